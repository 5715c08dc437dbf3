#ifndef SIB_QFTYPE_HPP
#define SIB_QFTYPE_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sib/structure.hpp"

namespace sib {

// One argument slot of a fact pattern: a subject position or a parameter
// element. Subject indices take precedence when an element is both.
struct PatternEntry {
    enum class Kind : std::uint8_t { Subject, Param };

    Kind kind = Kind::Subject;
    int value = 0;

    auto operator<=>(const PatternEntry&) const = default;
};

struct FactPattern {
    int rel = 0;
    std::vector<PatternEntry> entries;

    auto operator<=>(const FactPattern&) const = default;
};

// The quantifier-free complete type of a tuple over a parameter set,
// materialized as a canonically sorted fact summary plus the equality pattern
// of subject positions against the parameters. Since the language has bounded
// arity, this determines (and is determined by) all atomic truths on tuples
// drawn from subject + parameters.
class QfDiagram {
public:
    QfDiagram() = default;
    QfDiagram(int subject_len, std::vector<int> params, std::vector<FactPattern> fact_summary,
        std::vector<std::optional<int>> equality_pattern);

    int subject_len() const { return subject_len_; }
    const std::vector<int>& params() const { return params_; }
    const std::vector<FactPattern>& fact_summary() const { return fact_summary_; }
    const std::vector<std::optional<int>>& equality_pattern() const { return equality_pattern_; }

    std::string to_string(const Signature& sig) const;

    bool operator==(const QfDiagram&) const = default;

private:
    int subject_len_ = 0;
    std::vector<int> params_;
    std::vector<FactPattern> fact_summary_;
    std::vector<std::optional<int>> equality_pattern_;
};

// True iff c and d satisfy the same atomic formulas with parameters from
// `params`: every fact pattern over (subject, params) holds on c's
// instantiation iff on d's, and their equality patterns against the
// parameters agree. Direct two-sided check over the fact set; does not
// materialize diagrams.
bool type_equal(const Structure& m, const Tuple& c, const Tuple& d, const std::vector<int>& params);

QfDiagram qf_diagram(const Structure& m, const Tuple& c, const std::vector<int>& params);

// Order indiscernibility over `params`, checked for every pair of increasing
// index subsequences of equal length at most `window`. Tuples must be pairwise
// disjoint and disjoint from the parameters.
bool is_order_indiscernible(const Structure& m, const std::vector<Tuple>& seq, const std::vector<int>& params,
    int window = 3);

// Same with arbitrary injective index sequences.
bool is_totally_indiscernible(const Structure& m, const std::vector<Tuple>& seq, const std::vector<int>& params,
    int window = 3);

// The permutations pi of a member's coordinates whose application preserves
// its type over everything else. Always a subgroup of Sym(k).
struct PermissibleSet {
    Structure host;
    std::vector<Tuple> array;
    int index = 0;
    std::vector<std::vector<int>> permutations; // sorted; contains the identity

    bool contains(const std::vector<int>& perm) const;
};

PermissibleSet permissible_permutations(const Structure& m, const std::vector<Tuple>& array, int index);

// All permutations of 0..k-1 in lexicographic order.
std::vector<std::vector<int>> symmetric_group(int k);

Tuple apply_perm(const std::vector<int>& perm, const Tuple& t); // result[i] = t[perm[i]]

} // namespace sib

#endif
