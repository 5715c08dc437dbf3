#ifndef SIB_CLIQUES_HPP
#define SIB_CLIQUES_HPP

#include <optional>
#include <vector>

#include "sib/qftype.hpp"
#include "sib/structure.hpp"

namespace sib {

// Two disjoint k-tuples are exchangeable when tp(ab/rest) = tp(ba/rest), or
// equivalently when the pointwise swap is an automorphism. Both routes are
// computed and must agree; disagreement is a bug.
bool exchangeable(const Structure& m, const Tuple& a, const Tuple& b);
bool exchangeable_via_types(const Structure& m, const Tuple& a, const Tuple& b);
bool exchangeable_via_swap(const Structure& m, const Tuple& a, const Tuple& b);

// A set of pairwise disjoint, pairwise exchangeable distinct-entry k-tuples.
// Members are orientation-explicit: a clique and a coordinate permutation of
// its members are distinct objects. Construction verifies the defining
// properties against the host.
class KClique {
public:
    static KClique verify(const Structure& host, std::vector<Tuple> members);

    int k() const { return k_; }
    int size() const { return static_cast<int>(members_.size()); }
    const std::vector<Tuple>& members() const { return members_; }
    std::vector<int> carrier() const; // sorted union of member entries

    bool operator==(const KClique&) const = default;

private:
    KClique() = default;
    int k_ = 0;
    std::vector<Tuple> members_; // sorted
};

struct CliqueEnumOptions {
    std::optional<std::vector<Tuple>> pool; // defaults to all of M^(k)
    long long default_pool_cap = 100000;    // guard on |M^(k)| when pool is absent
};

// All maximal k-cliques within the pool, canonically ordered. Exchangeability
// need not be transitive, so cliques are enumerated as maximal cliques of the
// compatibility graph (edges = disjoint and exchangeable) with a pivoting
// branch-and-bound.
std::vector<KClique> enumerate_maximal_kcliques(const Structure& m, int k, const CliqueEnumOptions& opts = {});

// Sorted multiset of maximal clique sizes; isomorphism-invariant.
std::vector<int> clique_size_census(const Structure& m, int k, const CliqueEnumOptions& opts = {});

// Union of two cliques sharing a member whose symmetric-difference carriers
// are disjoint. The hypotheses guarantee the union verifies; a verification
// failure is reported as a logic error.
KClique meld(const Structure& m, const KClique& a, const KClique& b);

struct CliqueExtension {
    Structure extended;
    KClique clique; // the input clique plus one fresh member
};

// Adjoin a fresh k-tuple replicating the members' facts against the rest of
// the universe and the member-to-member pattern, uniformly over all member
// choices. The returned clique re-verifies in the extended structure.
CliqueExtension extend_clique(const Structure& m, const KClique& a);

// The common quantifier-free diagram of the members over a parameter set
// disjoint from the carrier. Members disagreeing is a bug for verified
// cliques.
QfDiagram average_type(const Structure& m, const KClique& a, const std::vector<int>& params);

} // namespace sib

#endif
