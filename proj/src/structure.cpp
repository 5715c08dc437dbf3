#include "sib/structure.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <numeric>
#include <sstream>

#include "sib/error.hpp"

namespace sib {

bool tuple_distinct(const Tuple& t)
{
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i + 1; j < t.size(); ++j)
            if (t[i] == t[j])
                return false;
    return true;
}

bool tuples_disjoint(const Tuple& a, const Tuple& b)
{
    for (int x : a)
        for (int y : b)
            if (x == y)
                return false;
    return true;
}

Tuple tuple_concat(const Tuple& a, const Tuple& b)
{
    Tuple r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

std::vector<int> complement_elements(int size, const std::vector<Tuple>& tuples)
{
    std::vector<char> used(size, 0);
    for (const Tuple& t : tuples)
        for (int e : t)
            if (e >= 0 && e < size)
                used[e] = 1;
    std::vector<int> out;
    for (int e = 0; e < size; ++e)
        if (!used[e])
            out.push_back(e);
    return out;
}

namespace {

bool valid_relation_name(const std::string& name)
{
    if (name.empty())
        return false;
    if (!std::isalpha(static_cast<unsigned char>(name[0])))
        return false;
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            return false;
    return true;
}

} // namespace

Signature::Signature(std::vector<Relation> relations) : relations_(std::move(relations))
{
    std::sort(relations_.begin(), relations_.end(),
        [](const Relation& a, const Relation& b) { return a.name < b.name; });
    for (std::size_t i = 0; i < relations_.size(); ++i) {
        const Relation& r = relations_[i];
        if (!valid_relation_name(r.name))
            throw InputError("invalid relation name '" + r.name + "'");
        if (r.arity < 1)
            throw InputError("relation '" + r.name + "' has arity " + std::to_string(r.arity) + " < 1");
        if (i > 0 && relations_[i - 1].name == r.name)
            throw InputError("duplicate relation declaration '" + r.name + "'");
        max_arity_ = std::max(max_arity_, r.arity);
    }
}

int Signature::index_of(std::string_view name) const
{
    for (std::size_t i = 0; i < relations_.size(); ++i)
        if (relations_[i].name == name)
            return static_cast<int>(i);
    return -1;
}

Structure::Structure() : sig_(std::make_shared<const Signature>()) { build_indexes(); }

Structure::Structure(Signature sig, int size, std::vector<Fact> facts)
    : Structure(std::make_shared<const Signature>(std::move(sig)), size, std::move(facts))
{
}

Structure::Structure(std::shared_ptr<const Signature> sig, int size, std::vector<Fact> facts)
    : sig_(std::move(sig)), size_(size)
{
    if (size_ < 0)
        throw InputError("negative universe size");
    facts_.resize(sig_->relation_count());
    for (Fact& f : facts) {
        if (f.rel < 0 || f.rel >= sig_->relation_count())
            throw InputError("fact references unknown relation index " + std::to_string(f.rel));
        const Relation& r = sig_->relation(f.rel);
        if (static_cast<int>(f.args.size()) != r.arity)
            throw InputError("arity mismatch: relation '" + r.name + "' expects " + std::to_string(r.arity)
                + " arguments, got " + std::to_string(f.args.size()));
        for (int e : f.args)
            if (e < 0 || e >= size_)
                throw InputError("element " + std::to_string(e) + " outside universe of size " + std::to_string(size_));
        facts_[f.rel].index.insert(std::move(f.args));
    }
    build_indexes();
}

void Structure::build_indexes()
{
    facts_.resize(sig_->relation_count());
    fact_count_ = 0;
    rel_pos_offset_.assign(sig_->relation_count() + 1, 0);
    for (int r = 0; r < sig_->relation_count(); ++r)
        rel_pos_offset_[r + 1] = rel_pos_offset_[r] + sig_->relation(r).arity;

    incident_.assign(size_, {});
    position_degree_.assign(size_, std::vector<int>(rel_pos_offset_.back(), 0));
    for (int r = 0; r < sig_->relation_count(); ++r) {
        FactSet& fs = facts_[r];
        fs.sorted.assign(fs.index.begin(), fs.index.end());
        std::sort(fs.sorted.begin(), fs.sorted.end());
        fact_count_ += static_cast<int>(fs.sorted.size());
        for (int i = 0; i < static_cast<int>(fs.sorted.size()); ++i) {
            const Tuple& t = fs.sorted[i];
            int last = -1;
            for (int pos = 0; pos < static_cast<int>(t.size()); ++pos) {
                int e = t[pos];
                position_degree_[e][rel_pos_offset_[r] + pos]++;
                if (e != last) // avoid duplicate incidence entries for loops like (e, e)
                    incident_[e].push_back({r, i});
                last = e;
            }
        }
    }
    // Deduplicate incidence lists for facts like R(e, x, e).
    for (auto& inc : incident_) {
        std::sort(inc.begin(), inc.end());
        inc.erase(std::unique(inc.begin(), inc.end()), inc.end());
    }
}

bool Structure::has_fact(int rel, const Tuple& args) const
{
    return facts_.at(rel).index.count(args) > 0;
}

bool Structure::has_fact(std::string_view rel, const Tuple& args) const
{
    int idx = sig_->index_of(rel);
    if (idx < 0)
        throw InputError("unknown relation '" + std::string(rel) + "'");
    return has_fact(idx, args);
}

std::vector<Fact> Structure::all_facts() const
{
    std::vector<Fact> out;
    out.reserve(fact_count_);
    for (int r = 0; r < sig_->relation_count(); ++r)
        for (const Tuple& t : facts_[r].sorted)
            out.push_back({r, t});
    return out;
}

int Structure::position_degree(int element, int rel, int pos) const
{
    return position_degree_.at(element).at(rel_pos_offset_.at(rel) + pos);
}

bool Structure::operator==(const Structure& other) const
{
    if (size_ != other.size_ || !(*sig_ == *other.sig_))
        return false;
    for (int r = 0; r < sig_->relation_count(); ++r)
        if (facts_[r].sorted != other.facts_[r].sorted)
            return false;
    return true;
}

namespace {

struct Line {
    int number = 0;
    std::string text;
};

std::vector<std::string> split_ws(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok)
        out.push_back(tok);
    return out;
}

int parse_int(const std::string& tok, int line, int col, const std::string& what)
{
    std::size_t pos = 0;
    int value = 0;
    try {
        value = std::stoi(tok, &pos);
    } catch (const std::exception&) {
        throw ParseError(line, col, "expected " + what + ", got '" + tok + "'");
    }
    if (pos != tok.size())
        throw ParseError(line, col, "expected " + what + ", got '" + tok + "'");
    return value;
}

int column_of_token(const std::string& line, int token_index)
{
    // 1-based column of the token's first character.
    int col = 0;
    int seen = -1;
    bool in_tok = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        bool ws = std::isspace(static_cast<unsigned char>(line[i])) != 0;
        if (!ws && !in_tok) {
            in_tok = true;
            ++seen;
            if (seen == token_index)
                return static_cast<int>(i) + 1;
        } else if (ws) {
            in_tok = false;
        }
        (void)col;
    }
    return static_cast<int>(line.size()) + 1;
}

} // namespace

Structure parse_structure(std::istream& in)
{
    std::string text(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>{});
    return parse_structure(text);
}

Structure parse_structure(const std::string& text)
{
    std::vector<Line> lines;
    {
        std::istringstream in(text);
        std::string raw;
        int number = 0;
        while (std::getline(in, raw)) {
            ++number;
            if (!raw.empty() && raw.back() == '\r')
                raw.pop_back();
            std::string trimmed = raw;
            std::size_t first = trimmed.find_first_not_of(" \t");
            if (first == std::string::npos || trimmed[first] == '#')
                continue;
            lines.push_back({number, raw});
        }
    }

    if (lines.empty())
        throw ParseError(1, 1, "missing 'language' line");

    // language line
    std::vector<Relation> rels;
    {
        const Line& ln = lines[0];
        auto toks = split_ws(ln.text);
        if (toks.empty() || toks[0] != "language")
            throw ParseError(ln.number, column_of_token(ln.text, 0), "expected 'language' line");
        if (toks.size() < 2)
            throw ParseError(ln.number, column_of_token(ln.text, 0), "language line declares no relations");
        for (std::size_t i = 1; i < toks.size(); ++i) {
            const std::string& tok = toks[i];
            std::size_t slash = tok.find('/');
            int col = column_of_token(ln.text, static_cast<int>(i));
            if (slash == std::string::npos)
                throw ParseError(ln.number, col, "expected NAME/ARITY, got '" + tok + "'");
            std::string name = tok.substr(0, slash);
            int arity = parse_int(tok.substr(slash + 1), ln.number, col, "arity");
            if (!valid_relation_name(name))
                throw ParseError(ln.number, col, "invalid relation name '" + name + "'");
            if (arity < 1)
                throw ParseError(ln.number, col, "arity must be at least 1");
            for (const Relation& r : rels)
                if (r.name == name)
                    throw ParseError(ln.number, col, "duplicate relation declaration '" + name + "'");
            rels.push_back({name, arity});
        }
    }
    Signature sig(std::move(rels));

    if (lines.size() < 2)
        throw ParseError(lines[0].number, 1, "missing 'universe' line");
    int size = 0;
    {
        const Line& ln = lines[1];
        auto toks = split_ws(ln.text);
        if (toks.size() != 2 || toks[0] != "universe")
            throw ParseError(ln.number, column_of_token(ln.text, 0), "expected 'universe N' line");
        size = parse_int(toks[1], ln.number, column_of_token(ln.text, 1), "universe size");
        if (size < 0)
            throw ParseError(ln.number, column_of_token(ln.text, 1), "universe size must be nonnegative");
    }

    std::vector<Fact> facts;
    for (std::size_t li = 2; li < lines.size(); ++li) {
        const Line& ln = lines[li];
        auto toks = split_ws(ln.text);
        int rel = sig.index_of(toks[0]);
        if (rel < 0)
            throw ParseError(ln.number, column_of_token(ln.text, 0), "unknown relation '" + toks[0] + "'");
        int arity = sig.relation(rel).arity;
        if (static_cast<int>(toks.size()) != arity + 1)
            throw ParseError(ln.number, column_of_token(ln.text, 0),
                "relation '" + toks[0] + "' expects " + std::to_string(arity) + " arguments, got "
                    + std::to_string(toks.size() - 1));
        Tuple args;
        for (int i = 1; i <= arity; ++i) {
            int col = column_of_token(ln.text, i);
            int e = parse_int(toks[i], ln.number, col, "element");
            if (e < 0 || e >= size)
                throw ParseError(ln.number, col,
                    "element " + std::to_string(e) + " outside universe of size " + std::to_string(size));
            args.push_back(e);
        }
        facts.push_back({rel, std::move(args)});
    }

    return Structure(std::move(sig), size, std::move(facts));
}

std::string serialize_structure(const Structure& s)
{
    std::string out = "language";
    for (const Relation& r : s.signature().relations())
        out += " " + r.name + "/" + std::to_string(r.arity);
    out += "\nuniverse " + std::to_string(s.size()) + "\n";
    for (int r = 0; r < s.signature().relation_count(); ++r) {
        const std::string& name = s.signature().relation(r).name;
        for (const Tuple& t : s.facts(r)) {
            out += name;
            for (int e : t)
                out += " " + std::to_string(e);
            out += "\n";
        }
    }
    return out;
}

Structure induced_substructure(const Structure& s, const std::vector<int>& domain)
{
    std::vector<int> dom = domain;
    std::sort(dom.begin(), dom.end());
    dom.erase(std::unique(dom.begin(), dom.end()), dom.end());
    std::vector<int> to_new(s.size(), -1);
    for (std::size_t i = 0; i < dom.size(); ++i) {
        int e = dom[i];
        if (e < 0 || e >= s.size())
            throw InputError("domain element " + std::to_string(e) + " out of range");
        to_new[e] = static_cast<int>(i);
    }
    std::vector<Fact> facts;
    for (int r = 0; r < s.signature().relation_count(); ++r) {
        for (const Tuple& t : s.facts(r)) {
            Tuple mapped;
            mapped.reserve(t.size());
            bool ok = true;
            for (int e : t) {
                if (to_new[e] < 0) {
                    ok = false;
                    break;
                }
                mapped.push_back(to_new[e]);
            }
            if (ok)
                facts.push_back({r, std::move(mapped)});
        }
    }
    return Structure(s.signature_ptr(), static_cast<int>(dom.size()), std::move(facts));
}

Structure disjoint_union(const Structure& a, const Structure& b)
{
    if (!(a.signature() == b.signature()))
        throw InputError("disjoint_union: signature mismatch");
    std::vector<Fact> facts = a.all_facts();
    for (Fact f : b.all_facts()) {
        for (int& e : f.args)
            e += a.size();
        facts.push_back(std::move(f));
    }
    return Structure(a.signature_ptr(), a.size() + b.size(), std::move(facts));
}

Structure relabel(const Structure& s, const std::vector<int>& perm)
{
    if (static_cast<int>(perm.size()) != s.size())
        throw InputError("relabel: permutation size mismatch");
    std::vector<char> seen(s.size(), 0);
    for (int v : perm) {
        if (v < 0 || v >= s.size() || seen[v])
            throw InputError("relabel: not a permutation");
        seen[v] = 1;
    }
    std::vector<Fact> facts = s.all_facts();
    for (Fact& f : facts)
        for (int& e : f.args)
            e = perm[e];
    return Structure(s.signature_ptr(), s.size(), std::move(facts));
}

std::optional<Fact> automorphism_violation(const Structure& s, const std::vector<int>& perm)
{
    if (static_cast<int>(perm.size()) != s.size())
        throw InputError("automorphism_violation: permutation size mismatch");
    for (int r = 0; r < s.signature().relation_count(); ++r) {
        for (const Tuple& t : s.facts(r)) {
            Tuple image(t.size());
            for (std::size_t i = 0; i < t.size(); ++i)
                image[i] = perm[t[i]];
            if (!s.has_fact(r, image))
                return Fact{r, t};
        }
    }
    return std::nullopt;
}

bool is_automorphism(const Structure& s, const std::vector<int>& perm)
{
    return !automorphism_violation(s, perm).has_value();
}

Structure make_eqrel(const std::vector<int>& class_sizes)
{
    int n = 0;
    for (int c : class_sizes) {
        if (c < 0)
            throw InputError("make_eqrel: negative class size");
        n += c;
    }
    Signature sig({{"E", 2}});
    std::vector<Fact> facts;
    int start = 0;
    for (int c : class_sizes) {
        for (int i = start; i < start + c; ++i)
            for (int j = start; j < start + c; ++j)
                facts.push_back({0, {i, j}});
        start += c;
    }
    return Structure(std::move(sig), n, std::move(facts));
}

} // namespace sib
