#ifndef SIB_MUTALG_HPP
#define SIB_MUTALG_HPP

#include <string>
#include <vector>

#include "sib/embed.hpp"
#include "sib/structure.hpp"

namespace sib {

class Presentation;

// Max over elements of the number of distinct-entry facts of the relation
// containing the element; 0 for relations with no distinct-entry facts.
// Facts with repeated entries never count.
int ma_bound(const Structure& m, int rel);
int ma_bound(const Structure& m, const std::string& rel);

struct MaTrend {
    std::vector<std::pair<int, int>> values; // (t, bound)
    bool bounded = false;                    // constant on the last half of the range
};

MaTrend ma_trend(const Presentation& p, const std::string& relation, int t_lo, int t_hi);

// Connected components of the hypergraph whose hyperedges are the element
// sets of facts with at least two distinct elements. Isolated vertices are
// singleton blocks; blocks ordered by least element.
std::vector<std::vector<int>> ma_components(const Structure& m);

// A is connected using only hyperedges fully inside A.
bool is_ma_connected_part(const Structure& m, const std::vector<int>& elements);

// Strictly increasing chain of connected parts B_0 c ... c B_m = component,
// each grown by one hyperedge; every step is verified connected.
std::vector<std::vector<int>> connected_part_chain(const Structure& m, const std::vector<int>& component);

struct ComponentClass {
    Structure representative;
    int count = 0;
};

// Components as induced substructures, bucketed by isomorphism; deterministic
// representatives and order.
std::vector<ComponentClass> component_census(const Structure& m, const SearchOptions& opts = {});

// Conjunction of literals over variables x1..xn: atoms, negated atoms,
// equalities and disequalities between variables or against concrete
// elements. Realizations are injective assignments.
struct QfTerm {
    bool is_var = true;
    int value = 0; // variable index (0-based) or element

    bool operator==(const QfTerm&) const = default;
};

struct QfLiteral {
    enum class Kind { Atom, NegAtom, Eq, Neq };

    Kind kind = Kind::Atom;
    int rel = -1; // for Atom / NegAtom
    std::vector<QfTerm> args;
};

struct QfConjunction {
    int var_count = 0;
    std::vector<QfLiteral> literals;

    // Text grammar: literals joined by '&'; atoms R(x1,x2), negation
    // !R(x1,x2), disequality x1!=x2 or x1!=3, equality x1=x1 or x1=3.
    // Whitespace insignificant.
    static QfConjunction parse(const std::string& text, const Signature& sig);
};

// Satisfying injective assignments as tuples (x1..xn). Throws when more than
// `limit` realizations exist.
std::vector<Tuple> enumerate_realizations(const Structure& m, const QfConjunction& phi, std::size_t limit = 50000);

// Maximum size (capped) of a family of realizations with pairwise disjoint
// element sets; exact branch-and-bound set packing over the conflict graph.
int max_disjoint_realizations(const Structure& m, const QfConjunction& phi, int cap = 32);

} // namespace sib

#endif
