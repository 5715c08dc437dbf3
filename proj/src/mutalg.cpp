#include "sib/mutalg.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "sib/error.hpp"

namespace sib {

int ma_bound(const Structure& m, int rel)
{
    if (rel < 0 || rel >= m.signature().relation_count())
        throw InputError("ma_bound: unknown relation index");
    std::vector<int> count(m.size(), 0);
    for (const Tuple& t : m.facts(rel)) {
        if (!tuple_distinct(t))
            continue;
        for (int e : t)
            count[e]++;
    }
    int best = 0;
    for (int c : count)
        best = std::max(best, c);
    return best;
}

int ma_bound(const Structure& m, const std::string& rel)
{
    int idx = m.signature().index_of(rel);
    if (idx < 0)
        throw InputError("ma_bound: unknown relation '" + rel + "'");
    return ma_bound(m, idx);
}

namespace {

struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(n)
    {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x)
    {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    }
    void merge(int x, int y)
    {
        x = find(x);
        y = find(y);
        if (x != y)
            parent[std::max(x, y)] = std::min(x, y);
    }
};

std::vector<int> distinct_elements(const Tuple& t)
{
    std::vector<int> out(t.begin(), t.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace

std::vector<std::vector<int>> ma_components(const Structure& m)
{
    UnionFind uf(m.size());
    for (int r = 0; r < m.signature().relation_count(); ++r)
        for (const Tuple& t : m.facts(r)) {
            std::vector<int> elems = distinct_elements(t);
            for (std::size_t i = 1; i < elems.size(); ++i)
                uf.merge(elems[0], elems[i]);
        }
    std::vector<std::vector<int>> blocks(m.size());
    for (int e = 0; e < m.size(); ++e)
        blocks[uf.find(e)].push_back(e);
    std::vector<std::vector<int>> out;
    for (auto& b : blocks)
        if (!b.empty())
            out.push_back(std::move(b));
    return out; // already ordered by least element: roots are minima
}

bool is_ma_connected_part(const Structure& m, const std::vector<int>& elements)
{
    if (elements.empty())
        return true;
    std::vector<int> elems = elements;
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    for (int e : elems)
        if (e < 0 || e >= m.size())
            throw InputError("is_ma_connected_part: element out of range");

    std::vector<int> local(m.size(), -1);
    for (std::size_t i = 0; i < elems.size(); ++i)
        local[elems[i]] = static_cast<int>(i);

    UnionFind uf(static_cast<int>(elems.size()));
    for (int r = 0; r < m.signature().relation_count(); ++r)
        for (const Tuple& t : m.facts(r)) {
            std::vector<int> de = distinct_elements(t);
            if (de.size() < 2)
                continue;
            bool inside = std::all_of(de.begin(), de.end(), [&](int e) { return local[e] >= 0; });
            if (!inside)
                continue;
            for (std::size_t i = 1; i < de.size(); ++i)
                uf.merge(local[de[0]], local[de[i]]);
        }
    int root = uf.find(0);
    for (std::size_t i = 1; i < elems.size(); ++i)
        if (uf.find(static_cast<int>(i)) != root)
            return false;
    return true;
}

std::vector<std::vector<int>> connected_part_chain(const Structure& m, const std::vector<int>& component)
{
    std::vector<int> target = component;
    std::sort(target.begin(), target.end());
    target.erase(std::unique(target.begin(), target.end()), target.end());
    if (target.empty())
        throw InputError("connected_part_chain: empty component");
    if (!is_ma_connected_part(m, target))
        throw InputError("connected_part_chain: input is not a connected part");

    std::vector<char> in_target(m.size(), 0);
    for (int e : target)
        in_target[e] = 1;

    std::vector<std::vector<int>> chain;
    std::vector<int> current{target[0]};
    chain.push_back(current);
    std::vector<char> have(m.size(), 0);
    have[target[0]] = 1;

    while (current.size() < target.size()) {
        // Least hyperedge (relation, fact order) inside the component that
        // touches the current part and adds something new.
        bool grown = false;
        for (int r = 0; r < m.signature().relation_count() && !grown; ++r)
            for (const Tuple& t : m.facts(r)) {
                std::vector<int> de = distinct_elements(t);
                if (de.size() < 2)
                    continue;
                bool inside = std::all_of(de.begin(), de.end(), [&](int e) { return in_target[e]; });
                if (!inside)
                    continue;
                bool touches = std::any_of(de.begin(), de.end(), [&](int e) { return have[e]; });
                bool adds = std::any_of(de.begin(), de.end(), [&](int e) { return !have[e]; });
                if (!touches || !adds)
                    continue;
                for (int e : de)
                    if (!have[e]) {
                        have[e] = 1;
                        current.push_back(e);
                    }
                std::sort(current.begin(), current.end());
                if (!is_ma_connected_part(m, current))
                    throw std::logic_error("connected_part_chain: grown part failed connectivity");
                chain.push_back(current);
                grown = true;
                break;
            }
        if (!grown)
            throw std::logic_error("connected_part_chain: could not grow a connected component");
    }
    return chain;
}

std::vector<ComponentClass> component_census(const Structure& m, const SearchOptions& opts)
{
    std::vector<ComponentClass> classes;
    std::vector<std::string> keys;
    for (const std::vector<int>& block : ma_components(m)) {
        Structure piece = canonical_form(induced_substructure(m, block));
        std::string key = canonical_key(piece);
        bool placed = false;
        for (std::size_t i = 0; i < classes.size(); ++i) {
            if (keys[i] != key)
                continue;
            if (canonical_key_exact(piece) || is_isomorphic(classes[i].representative, piece, opts)) {
                classes[i].count++;
                placed = true;
                break;
            }
        }
        if (!placed) {
            classes.push_back({std::move(piece), 1});
            keys.push_back(std::move(key));
        }
    }
    std::vector<int> order(classes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (keys[a] != keys[b])
            return keys[a] < keys[b];
        return serialize_structure(classes[a].representative) < serialize_structure(classes[b].representative);
    });
    std::vector<ComponentClass> out;
    for (int i : order)
        out.push_back(std::move(classes[i]));
    return out;
}

namespace {

std::string strip_ws(const std::string& s)
{
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c)))
            out += c;
    return out;
}

QfTerm parse_term(const std::string& tok, int& max_var)
{
    if (tok.empty())
        throw InputError("formula: empty term");
    if (tok[0] == 'x') {
        std::string digits = tok.substr(1);
        if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            int idx = std::stoi(digits);
            if (idx < 1)
                throw InputError("formula: variables are numbered from x1");
            max_var = std::max(max_var, idx);
            return {true, idx - 1};
        }
        throw InputError("formula: bad variable '" + tok + "'");
    }
    if (std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return {false, std::stoi(tok)};
    throw InputError("formula: bad term '" + tok + "'");
}

std::vector<std::string> split_on(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

QfConjunction QfConjunction::parse(const std::string& text, const Signature& sig)
{
    std::string s = strip_ws(text);
    if (s.empty())
        throw InputError("formula: at least one literal required");
    QfConjunction out;
    int max_var = 0;
    for (const std::string& lit : split_on(s, '&')) {
        if (lit.empty())
            throw InputError("formula: empty literal");
        std::size_t open = lit.find('(');
        if (open != std::string::npos) {
            bool neg = lit[0] == '!';
            std::string name = lit.substr(neg ? 1 : 0, open - (neg ? 1 : 0));
            if (lit.back() != ')')
                throw InputError("formula: missing ')' in '" + lit + "'");
            int rel = sig.index_of(name);
            if (rel < 0)
                throw InputError("formula: unknown relation '" + name + "'");
            std::string inner = lit.substr(open + 1, lit.size() - open - 2);
            QfLiteral l;
            l.kind = neg ? QfLiteral::Kind::NegAtom : QfLiteral::Kind::Atom;
            l.rel = rel;
            for (const std::string& tok : split_on(inner, ','))
                l.args.push_back(parse_term(tok, max_var));
            if (static_cast<int>(l.args.size()) != sig.relation(rel).arity)
                throw InputError("formula: arity mismatch for '" + name + "'");
            out.literals.push_back(std::move(l));
            continue;
        }
        std::size_t neq = lit.find("!=");
        std::size_t eq = lit.find('=');
        QfLiteral l;
        std::string lhs, rhs;
        if (neq != std::string::npos) {
            l.kind = QfLiteral::Kind::Neq;
            lhs = lit.substr(0, neq);
            rhs = lit.substr(neq + 2);
        } else if (eq != std::string::npos) {
            l.kind = QfLiteral::Kind::Eq;
            lhs = lit.substr(0, eq);
            rhs = lit.substr(eq + 1);
        } else {
            throw InputError("formula: cannot parse literal '" + lit + "'");
        }
        l.args.push_back(parse_term(lhs, max_var));
        l.args.push_back(parse_term(rhs, max_var));
        out.literals.push_back(std::move(l));
    }
    out.var_count = max_var;
    if (out.var_count == 0)
        throw InputError("formula: no variables");
    return out;
}

namespace {

struct RealizationSearch {
    const Structure& m;
    const QfConjunction& phi;
    std::size_t limit;
    std::vector<int> assign;
    std::vector<char> used;
    std::vector<Tuple> found;

    bool term_value(const QfTerm& t, int& out) const
    {
        if (t.is_var) {
            if (assign[t.value] < 0)
                return false;
            out = assign[t.value];
            return true;
        }
        out = t.value;
        return true;
    }

    // False if the literal is fully assigned and violated.
    bool literal_ok(const QfLiteral& l) const
    {
        std::vector<int> vals(l.args.size());
        for (std::size_t i = 0; i < l.args.size(); ++i)
            if (!term_value(l.args[i], vals[i]))
                return true; // undetermined
        switch (l.kind) {
        case QfLiteral::Kind::Atom:
            return m.has_fact(l.rel, vals);
        case QfLiteral::Kind::NegAtom:
            return !m.has_fact(l.rel, vals);
        case QfLiteral::Kind::Eq:
            return vals[0] == vals[1];
        case QfLiteral::Kind::Neq:
            return vals[0] != vals[1];
        }
        return true;
    }

    void run(int var)
    {
        if (var == phi.var_count) {
            if (found.size() >= limit)
                throw InputError("formula has more realizations than the enumeration limit");
            found.emplace_back(assign.begin(), assign.end());
            return;
        }
        for (int e = 0; e < m.size(); ++e) {
            if (used[e])
                continue;
            assign[var] = e;
            used[e] = 1;
            bool ok = true;
            for (const QfLiteral& l : phi.literals)
                if (!literal_ok(l)) {
                    ok = false;
                    break;
                }
            if (ok)
                run(var + 1);
            used[e] = 0;
            assign[var] = -1;
        }
    }
};

} // namespace

std::vector<Tuple> enumerate_realizations(const Structure& m, const QfConjunction& phi, std::size_t limit)
{
    for (const QfLiteral& l : phi.literals) {
        if ((l.kind == QfLiteral::Kind::Atom || l.kind == QfLiteral::Kind::NegAtom)
            && (l.rel < 0 || l.rel >= m.signature().relation_count()))
            throw InputError("formula references a relation outside the signature");
        for (const QfTerm& t : l.args)
            if (!t.is_var && (t.value < 0 || t.value >= m.size()))
                throw InputError("formula references element " + std::to_string(t.value) + " out of range");
    }
    RealizationSearch search{m, phi, limit, std::vector<int>(phi.var_count, -1), std::vector<char>(m.size(), 0), {}};
    search.run(0);
    return search.found;
}

int max_disjoint_realizations(const Structure& m, const QfConjunction& phi, int cap)
{
    if (cap < 1)
        throw InputError("max_disjoint_realizations: cap must be at least 1");
    std::vector<Tuple> reals = enumerate_realizations(m, phi);
    int n = static_cast<int>(reals.size());
    if (n == 0)
        return 0;

    std::vector<std::vector<int>> elem_sets(n);
    for (int i = 0; i < n; ++i)
        elem_sets[i] = distinct_elements(reals[i]);

    std::vector<std::vector<char>> conflict(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            bool overlap = std::any_of(elem_sets[i].begin(), elem_sets[i].end(), [&](int e) {
                return std::binary_search(elem_sets[j].begin(), elem_sets[j].end(), e);
            });
            conflict[i][j] = conflict[j][i] = overlap ? 1 : 0;
        }

    // Greedy first-fit lower bound.
    int best = 0;
    {
        std::vector<int> picked;
        for (int i = 0; i < n && static_cast<int>(picked.size()) < cap; ++i) {
            bool ok = std::none_of(picked.begin(), picked.end(), [&](int j) { return conflict[i][j]; });
            if (ok)
                picked.push_back(i);
        }
        best = static_cast<int>(picked.size());
    }

    // Exact branch and bound: include/exclude the first live candidate.
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    auto rec = [&](auto&& self, int chosen, const std::vector<int>& candidates) -> void {
        if (best >= cap)
            return;
        best = std::max(best, chosen);
        if (candidates.empty() || chosen + static_cast<int>(candidates.size()) <= best)
            return;
        int v = candidates[0];
        std::vector<int> rest(candidates.begin() + 1, candidates.end());
        // Include v.
        std::vector<int> filtered;
        for (int u : rest)
            if (!conflict[v][u])
                filtered.push_back(u);
        self(self, chosen + 1, filtered);
        // Exclude v.
        self(self, chosen, rest);
    };
    rec(rec, 0, all);
    return std::min(best, cap);
}

} // namespace sib
