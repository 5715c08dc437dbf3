#ifndef SIB_STRUCTURE_HPP
#define SIB_STRUCTURE_HPP

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace sib {

// Elements are 0..n-1. A tuple is an ordered list of elements; repeated
// entries are allowed in facts, while members of M^(k) must be distinct.
using Tuple = std::vector<int>;

bool tuple_distinct(const Tuple& t);
bool tuples_disjoint(const Tuple& a, const Tuple& b);
Tuple tuple_concat(const Tuple& a, const Tuple& b);

// Sorted universe minus the entries of the given tuples.
std::vector<int> complement_elements(int size, const std::vector<Tuple>& tuples);

struct Relation {
    std::string name;
    int arity = 0;

    bool operator==(const Relation&) const = default;
};

// Finite relational signature. Relations are normalized to name order at
// construction, so signatures built from any declaration order compare equal.
class Signature {
public:
    Signature() = default;
    explicit Signature(std::vector<Relation> relations);

    const std::vector<Relation>& relations() const { return relations_; }
    int relation_count() const { return static_cast<int>(relations_.size()); }
    int max_arity() const { return max_arity_; }
    int index_of(std::string_view name) const; // -1 if absent
    const Relation& relation(int index) const { return relations_.at(index); }

    bool operator==(const Signature&) const = default;

private:
    std::vector<Relation> relations_;
    int max_arity_ = 0;
};

struct Fact {
    int rel = 0;
    Tuple args;

    bool operator==(const Fact&) const = default;
};

struct TupleHash {
    std::size_t operator()(const Tuple& t) const
    {
        std::size_t h = t.size();
        for (int v : t)
            h = h * 1000003u + static_cast<std::size_t>(v) + 0x9e3779b9u;
        return h;
    }
};

// Immutable finite relational structure: signature + universe 0..n-1 + fact
// set. Facts are deduplicated and kept sorted per relation; membership tests
// are O(1) via a hash index; per-element incidence lists are precomputed.
class Structure {
public:
    Structure();
    Structure(Signature sig, int size, std::vector<Fact> facts);
    Structure(std::shared_ptr<const Signature> sig, int size, std::vector<Fact> facts);

    const Signature& signature() const { return *sig_; }
    const std::shared_ptr<const Signature>& signature_ptr() const { return sig_; }
    int size() const { return size_; }

    const std::vector<Tuple>& facts(int rel) const { return facts_.at(rel).sorted; }
    bool has_fact(int rel, const Tuple& args) const;
    bool has_fact(std::string_view rel, const Tuple& args) const;
    int fact_count() const { return fact_count_; }
    std::vector<Fact> all_facts() const;

    // Facts containing a given element, as (relation, index into facts(rel)).
    const std::vector<std::pair<int, int>>& incident(int element) const { return incident_.at(element); }

    // Count of facts of `rel` having `element` at argument position `pos`.
    int position_degree(int element, int rel, int pos) const;

    bool operator==(const Structure& other) const;

private:
    struct FactSet {
        std::vector<Tuple> sorted;
        std::unordered_set<Tuple, TupleHash> index;
    };

    void build_indexes();

    std::shared_ptr<const Signature> sig_;
    int size_ = 0;
    std::vector<FactSet> facts_;
    std::vector<std::vector<std::pair<int, int>>> incident_;
    std::vector<std::vector<int>> position_degree_; // [element][rel offset + pos]
    std::vector<int> rel_pos_offset_;
    int fact_count_ = 0;
};

// File grammar (UTF-8, line oriented):
//   # comment lines anywhere
//   language NAME/ARITY [NAME/ARITY ...]
//   universe N
//   NAME e1 e2 ... e_arity        (one fact per line)
Structure parse_structure(const std::string& text);
Structure parse_structure(std::istream& in);

// Canonical form: relations sorted by name in the language line, facts sorted
// lexicographically by (name, tuple). Equal structures serialize identically.
std::string serialize_structure(const Structure& s);

// Universe relabeled to 0..|domain|-1 preserving element order; keeps exactly
// the facts whose entries all lie in `domain`.
Structure induced_substructure(const Structure& s, const std::vector<int>& domain);

// Universe 0..(na+nb-1) with b's elements shifted by na.
Structure disjoint_union(const Structure& a, const Structure& b);

// Relabel via a permutation of the universe (perm[old] = new).
Structure relabel(const Structure& s, const std::vector<int>& perm);

// First fact (in canonical order) whose image under the permutation is not a
// fact, if any. A permutation of a finite fact set is an automorphism exactly
// when no such fact exists.
std::optional<Fact> automorphism_violation(const Structure& s, const std::vector<int>& perm);
bool is_automorphism(const Structure& s, const std::vector<int>& perm);

// Equivalence relation with the given class sizes: reflexive, symmetric,
// transitive facts of a binary relation E.
Structure make_eqrel(const std::vector<int>& class_sizes);

} // namespace sib

#endif
