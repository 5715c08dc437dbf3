#include "sib/qftype.hpp"

#include <algorithm>
#include <numeric>

#include "sib/error.hpp"

namespace sib {

namespace {

void check_subject(const Structure& m, const Tuple& c, const char* who)
{
    for (int e : c)
        if (e < 0 || e >= m.size())
            throw InputError(std::string(who) + ": element " + std::to_string(e) + " out of range");
    if (!tuple_distinct(c))
        throw InputError(std::string(who) + ": subject tuple has repeated entries");
}

struct SubjectIndex {
    std::vector<int> pos_of;   // element -> subject position, -1 if none
    std::vector<char> in_params;

    SubjectIndex(const Structure& m, const Tuple& c, const std::vector<int>& params)
        : pos_of(m.size(), -1), in_params(m.size(), 0)
    {
        for (std::size_t i = 0; i < c.size(); ++i)
            pos_of[c[i]] = static_cast<int>(i);
        for (int p : params) {
            if (p < 0 || p >= m.size())
                throw InputError("parameter element " + std::to_string(p) + " out of range");
            in_params[p] = 1;
        }
    }

    // Canonical translation of a fact tuple into a pattern over (subject,
    // params); subject positions take precedence. Empty optional if some entry
    // is neither in the subject nor a parameter.
    std::optional<std::vector<PatternEntry>> translate(const Tuple& t) const
    {
        std::vector<PatternEntry> out;
        out.reserve(t.size());
        for (int e : t) {
            if (pos_of[e] >= 0)
                out.push_back({PatternEntry::Kind::Subject, pos_of[e]});
            else if (in_params[e])
                out.push_back({PatternEntry::Kind::Param, e});
            else
                return std::nullopt;
        }
        return out;
    }
};

Tuple instantiate(const std::vector<PatternEntry>& pattern, const Tuple& subject)
{
    Tuple out;
    out.reserve(pattern.size());
    for (const PatternEntry& pe : pattern)
        out.push_back(pe.kind == PatternEntry::Kind::Subject ? subject[pe.value] : pe.value);
    return out;
}

bool equality_patterns_agree(const Tuple& c, const Tuple& d, const std::vector<char>& in_params)
{
    for (std::size_t i = 0; i < c.size(); ++i) {
        bool ci = in_params[c[i]] != 0;
        bool di = in_params[d[i]] != 0;
        if (ci != di)
            return false;
        if (ci && c[i] != d[i])
            return false;
    }
    return true;
}

} // namespace

bool type_equal(const Structure& m, const Tuple& c, const Tuple& d, const std::vector<int>& params)
{
    if (c.size() != d.size())
        throw InputError("type_equal: tuple length mismatch");
    check_subject(m, c, "type_equal");
    check_subject(m, d, "type_equal");
    if (c == d)
        return true;

    SubjectIndex idx_c(m, c, params);
    SubjectIndex idx_d(m, d, params);
    if (!equality_patterns_agree(c, d, idx_c.in_params))
        return false;

    for (int r = 0; r < m.signature().relation_count(); ++r) {
        for (const Tuple& t : m.facts(r)) {
            if (auto pat = idx_c.translate(t)) {
                if (!m.has_fact(r, instantiate(*pat, d)))
                    return false;
            }
            if (auto pat = idx_d.translate(t)) {
                if (!m.has_fact(r, instantiate(*pat, c)))
                    return false;
            }
        }
    }
    return true;
}

QfDiagram::QfDiagram(int subject_len, std::vector<int> params, std::vector<FactPattern> fact_summary,
    std::vector<std::optional<int>> equality_pattern)
    : subject_len_(subject_len),
      params_(std::move(params)),
      fact_summary_(std::move(fact_summary)),
      equality_pattern_(std::move(equality_pattern))
{
}

std::string QfDiagram::to_string(const Signature& sig) const
{
    std::string out = "subject/" + std::to_string(subject_len_) + "\n";
    for (std::size_t i = 0; i < equality_pattern_.size(); ++i)
        if (equality_pattern_[i])
            out += "s" + std::to_string(i) + "=" + std::to_string(*equality_pattern_[i]) + "\n";
    for (const FactPattern& fp : fact_summary_) {
        out += sig.relation(fp.rel).name + "(";
        for (std::size_t i = 0; i < fp.entries.size(); ++i) {
            if (i)
                out += ",";
            const PatternEntry& pe = fp.entries[i];
            out += (pe.kind == PatternEntry::Kind::Subject ? "s" : "") + std::to_string(pe.value);
        }
        out += ")\n";
    }
    return out;
}

QfDiagram qf_diagram(const Structure& m, const Tuple& c, const std::vector<int>& params)
{
    check_subject(m, c, "qf_diagram");
    std::vector<int> ps = params;
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());

    SubjectIndex idx(m, c, ps);
    std::vector<FactPattern> summary;
    for (int r = 0; r < m.signature().relation_count(); ++r)
        for (const Tuple& t : m.facts(r))
            if (auto pat = idx.translate(t))
                summary.push_back({r, std::move(*pat)});
    std::sort(summary.begin(), summary.end());
    summary.erase(std::unique(summary.begin(), summary.end()), summary.end());

    std::vector<std::optional<int>> eq(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        if (idx.in_params[c[i]])
            eq[i] = c[i];

    return QfDiagram(static_cast<int>(c.size()), std::move(ps), std::move(summary), std::move(eq));
}

namespace {

void check_sequence(const Structure& m, const std::vector<Tuple>& seq, const std::vector<int>& params, int window)
{
    if (window < 2)
        throw InputError("indiscernibility window must be at least 2");
    std::vector<char> in_params(m.size(), 0);
    for (int p : params) {
        if (p < 0 || p >= m.size())
            throw InputError("parameter element out of range");
        in_params[p] = 1;
    }
    for (std::size_t i = 0; i < seq.size(); ++i) {
        check_subject(m, seq[i], "indiscernibility");
        if (seq[i].size() != seq[0].size())
            throw InputError("indiscernibility: tuples must have equal length");
        for (int e : seq[i])
            if (in_params[e])
                throw InputError("indiscernibility: tuple overlaps parameter set");
        for (std::size_t j = i + 1; j < seq.size(); ++j)
            if (!tuples_disjoint(seq[i], seq[j]))
                throw InputError("indiscernibility: tuples must be pairwise disjoint");
    }
}

Tuple concat_at(const std::vector<Tuple>& seq, const std::vector<int>& indices)
{
    Tuple out;
    for (int i : indices)
        out.insert(out.end(), seq[i].begin(), seq[i].end());
    return out;
}

// Visits index combinations / injective sequences of the given length and
// compares each subject against the first one visited; type equality is an
// equivalence relation, so this decides equality of all pairs.
template <typename NextFn>
bool all_same_type(const Structure& m, const std::vector<Tuple>& seq, const std::vector<int>& params, NextFn&& next)
{
    std::optional<Tuple> first;
    std::vector<int> indices;
    while (next(indices)) {
        Tuple subject = concat_at(seq, indices);
        if (!first)
            first = std::move(subject);
        else if (!type_equal(m, *first, subject, params))
            return false;
    }
    return true;
}

bool next_combination(std::vector<int>& idx, int n, int len)
{
    if (idx.empty()) {
        if (len > n)
            return false;
        idx.resize(len);
        std::iota(idx.begin(), idx.end(), 0);
        return true;
    }
    int i = len - 1;
    while (i >= 0 && idx[i] == n - (len - i))
        --i;
    if (i < 0)
        return false;
    ++idx[i];
    for (int j = i + 1; j < len; ++j)
        idx[j] = idx[j - 1] + 1;
    return true;
}

} // namespace

bool is_order_indiscernible(const Structure& m, const std::vector<Tuple>& seq, const std::vector<int>& params,
    int window)
{
    check_sequence(m, seq, params, window);
    int n = static_cast<int>(seq.size());
    for (int len = 1; len <= std::min(window, n); ++len) {
        auto next = [&, started = false](std::vector<int>& idx) mutable {
            if (!started) {
                started = true;
                idx.clear();
            }
            return next_combination(idx, n, len);
        };
        if (!all_same_type(m, seq, params, next))
            return false;
    }
    return true;
}

bool is_totally_indiscernible(const Structure& m, const std::vector<Tuple>& seq, const std::vector<int>& params,
    int window)
{
    check_sequence(m, seq, params, window);
    int n = static_cast<int>(seq.size());
    for (int len = 1; len <= std::min(window, n); ++len) {
        // Injective index sequences: combinations crossed with permutations.
        std::vector<int> comb;
        bool comb_started = false;
        std::vector<std::vector<int>> perms = symmetric_group(len);
        std::size_t perm_i = perms.size();
        auto next = [&](std::vector<int>& idx) {
            if (perm_i == perms.size()) {
                if (!comb_started) {
                    comb_started = true;
                    comb.clear();
                }
                if (!next_combination(comb, n, len))
                    return false;
                perm_i = 0;
            }
            idx.resize(len);
            for (int i = 0; i < len; ++i)
                idx[i] = comb[perms[perm_i][i]];
            ++perm_i;
            return true;
        };
        if (!all_same_type(m, seq, params, next))
            return false;
    }
    return true;
}

std::vector<std::vector<int>> symmetric_group(int k)
{
    std::vector<int> id(k);
    std::iota(id.begin(), id.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(id);
    } while (std::next_permutation(id.begin(), id.end()));
    return out;
}

Tuple apply_perm(const std::vector<int>& perm, const Tuple& t)
{
    Tuple out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        out[i] = t[perm[i]];
    return out;
}

bool PermissibleSet::contains(const std::vector<int>& perm) const
{
    return std::binary_search(permutations.begin(), permutations.end(), perm);
}

PermissibleSet permissible_permutations(const Structure& m, const std::vector<Tuple>& array, int index)
{
    if (index < 0 || index >= static_cast<int>(array.size()))
        throw InputError("permissible_permutations: index out of range");
    for (std::size_t i = 0; i < array.size(); ++i) {
        check_subject(m, array[i], "permissible_permutations");
        for (std::size_t j = i + 1; j < array.size(); ++j)
            if (!tuples_disjoint(array[i], array[j]))
                throw InputError("permissible_permutations: array tuples must be pairwise disjoint");
    }

    const Tuple& subject = array[index];
    int k = static_cast<int>(subject.size());
    std::vector<int> rest = complement_elements(m.size(), {subject});

    std::vector<std::vector<int>> result;
    for (const std::vector<int>& pi : symmetric_group(k)) {
        bool via_type = type_equal(m, apply_perm(pi, subject), subject, rest);

        // Cross-check: the map permuting the member in place and fixing
        // everything else must be an automorphism exactly then.
        std::vector<int> map(m.size());
        std::iota(map.begin(), map.end(), 0);
        for (int i = 0; i < k; ++i)
            map[subject[i]] = subject[pi[i]];
        bool via_auto = is_automorphism(m, map);
        if (via_type != via_auto)
            throw std::logic_error("permissible_permutations: type route and automorphism route disagree");

        if (via_type)
            result.push_back(pi);
    }
    std::sort(result.begin(), result.end());

    // Subgroup sanity: identity, closure under composition and inverse.
    PermissibleSet out{m, array, index, std::move(result)};
    std::vector<int> id(k);
    std::iota(id.begin(), id.end(), 0);
    if (!out.contains(id))
        throw std::logic_error("permissible set misses the identity");
    for (const auto& p : out.permutations) {
        std::vector<int> inv(k);
        for (int i = 0; i < k; ++i)
            inv[p[i]] = i;
        if (!out.contains(inv))
            throw std::logic_error("permissible set not closed under inverse");
        for (const auto& q : out.permutations) {
            std::vector<int> comp(k);
            for (int i = 0; i < k; ++i)
                comp[i] = p[q[i]];
            if (!out.contains(comp))
                throw std::logic_error("permissible set not closed under composition");
        }
    }
    return out;
}

} // namespace sib
