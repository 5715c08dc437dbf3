#ifndef SIB_PRESENTATIONS_HPP
#define SIB_PRESENTATIONS_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sib/structure.hpp"

namespace sib {

// One argument slot of a family fact pattern.
//   Pos    - coordinate of the member being instantiated (internal/base facts)
//   Base   - concrete element of the finite base
//   First  - coordinate of the first member of an ordered pair (cross facts)
//   Second - coordinate of the second member
//   Slot   - fresh witness slot (grid witness facts)
struct PatEntry {
    enum class Kind { Base, Pos, First, Second, Slot };

    Kind kind = Kind::Pos;
    int value = 0;

    bool operator==(const PatEntry&) const = default;
};

struct FamilyFact {
    int rel = 0;
    std::vector<PatEntry> entries;

    bool operator==(const FamilyFact&) const = default;
};

struct CrossFamilyBlock {
    std::string other;
    std::vector<FamilyFact> facts; // First = this family's member, Second = the other's
};

// A uniform family of disjoint k-tuples. Internal facts hold on every member,
// base facts mix a member with base elements, cross facts are applied to
// every ordered pair of distinct members, cross-family facts to every ordered
// pair across two families.
struct Family {
    std::string name;
    int k = 1;
    std::optional<int> count; // empty = infinite
    std::vector<FamilyFact> internal_facts;
    std::vector<FamilyFact> base_facts;
    std::vector<FamilyFact> cross_facts;
    std::vector<CrossFamilyBlock> cross_family_facts;

    bool infinite() const { return !count.has_value(); }
};

struct CellularPresentation {
    Signature sig;
    Structure base;
    std::vector<Family> families;
    std::string metadata_json; // optional free-form annotations
};

// Entry of the witness-tuple template appended to a member tuple in the grid
// relation R(member, witness...).
//   Base         - concrete base element
//   MemberCoord  - coordinate of a member of the same family; instantiated
//                  uniformly for every member index
//   FreshPerQ    - fresh element shared by all pairs with the same low label
//   FreshPerPair - fresh element per ordered label pair q < r
struct WitnessEntry {
    enum class Kind { Base, MemberCoord, FreshPerQ, FreshPerPair };

    Kind kind = Kind::FreshPerQ;
    int value = 0; // base element / coordinate / slot id

    bool operator==(const WitnessEntry&) const = default;
};

// Finitely presented shadow of a (k, R)-grid extension: an ordered finite
// label set D standing for the rationals, one k-tuple family per label, and
// witness tuples realizing R(a_{q,i}, d_{q,r}) while avoiding R(a_{r,i},
// d_{q,r}).
struct GridPresentation {
    Signature sig;
    Structure base;
    int k = 1;
    std::string relation;
    std::vector<std::string> labels; // ordered D
    std::vector<FamilyFact> clique_internal;
    std::vector<FamilyFact> clique_base;
    std::vector<FamilyFact> clique_cross;
    std::vector<WitnessEntry> witness_entries;
    std::vector<FamilyFact> witness_facts; // Slot | Base
    std::string metadata_json;

    // Length of the fresh part of the witness tuple.
    int rank() const;
};

// Chain of connected components C_0 c C_1 c ... where each properly embeds
// into the next but never backwards, plus components outside the scope.
struct ComponentChainSpec {
    Signature sig;
    std::vector<Structure> chain;
    std::vector<Structure> background;
    std::string metadata_json;
};

class Presentation {
public:
    enum class Kind { Cellular, Grid, Chain };

    explicit Presentation(CellularPresentation p);
    explicit Presentation(GridPresentation p);
    explicit Presentation(ComponentChainSpec p);

    Kind kind() const;
    const CellularPresentation& cellular() const;
    const GridPresentation& grid() const;
    const ComponentChainSpec& chain() const;

    const Signature& signature() const;

    // JSON document with a mandatory schema_version field; format documented
    // in docs/presentation-format.md.
    static Presentation from_json(const std::string& text);
    std::string to_json() const;

private:
    std::variant<CellularPresentation, GridPresentation, ComponentChainSpec> v_;
};

struct ElementOrigin {
    enum class Kind { Base, Member, Witness };

    Kind kind = Kind::Base;
    int family = -1;  // family index / label index
    int member = -1;  // member index within the family
    int pos = -1;     // coordinate within the member, or witness slot index
    int family2 = -1; // high label index for per-pair witnesses
};

struct TruncationLayout {
    std::vector<ElementOrigin> origins;
    std::vector<std::vector<Tuple>> members;              // per family / label
    std::vector<std::vector<int>> per_q_witness;          // [label][slot] -> element
    std::map<std::pair<int, int>, std::vector<int>> per_pair_witness;
};

struct Truncation {
    Structure structure;
    TruncationLayout layout;
};

// Instantiates min(count, t) members per family (t per infinite family),
// numbering base elements first, then families in order, members in index
// order, then witnesses.
Truncation instantiate(const Presentation& p, int t);
Structure truncate(const Presentation& p, int t);

struct ValidationIssue {
    std::string subject; // which map or condition
    std::string detail;  // violating fact or failed embedding
};

struct ValidationReport {
    bool valid = true;
    std::vector<ValidationIssue> issues;
};

// Brute-force validation on truncate(p, t): blockwise member transpositions
// must be automorphisms (cellular and grid), the grid separation condition
// R(a_{q,i}, d_{q,r}) and not R(a_{r,i}, d_{q,r}) must hold, and chain specs
// must satisfy the one-way embedding conditions. Map checks may run on
// several threads; the report is merged in map order either way.
ValidationReport validate(const Presentation& p, int t, int threads = 1);

// The member-transposition part alone, applicable to any structure with a
// family layout; used by validate and directly testable against corrupted
// structures.
ValidationReport check_blockwise_symmetries(const Structure& s, const TruncationLayout& layout, int threads = 1);

bool is_finitely_partitioned(const CellularPresentation& p);

enum class SiblingCount { One, Aleph0, Continuum };

struct SiblingVerdict {
    SiblingCount count = SiblingCount::One;
    std::string justification;
};

std::string to_string(SiblingCount c);

SiblingVerdict classify(const Presentation& p);

// Splits any family with a proper position subset whose subtuples form a
// clique on truncate(p, t), until none remains. Only infinite families are
// tested. The result validates and is separated at size t.
CellularPresentation separate(const CellularPresentation& p, int t);

// Truncates the grid at t and cuts the family of each label in `cuts` down to
// its first f(q) members. Verifies that the maximal-clique size census over
// the surviving member tuples equals the cut sizes plus t per uncut label.
Structure generate_nf(const GridPresentation& g, const std::map<std::string, int>& cuts, int t);

struct MstarResult {
    Structure structure;
    int largest_finite_one_clique = 0;
};

// Strands members 0..ell of the chosen family (keeping only their first
// element), removes every singleton family whose members absorb the stranded
// elements into a clique, and reports the largest maximal 1-clique avoiding
// the surviving infinite singleton families.
MstarResult generate_mstar_ell(const CellularPresentation& p, int family_index, int ell, int t);

// Disjoint union of the background components and the selected chain entries.
Structure generate_ns(const ComponentChainSpec& c, const std::vector<int>& s, int t);

// Built-in grid templates: rank 0 (witness drawn from the member tuples) and
// rank 1 (one fresh witness element per label).
GridPresentation builtin_rank0_grid(int k, const std::vector<std::string>& labels);
GridPresentation builtin_rank1_grid(int k, const std::vector<std::string>& labels);

} // namespace sib

#endif
