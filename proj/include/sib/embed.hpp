#ifndef SIB_EMBED_HPP
#define SIB_EMBED_HPP

#include <optional>
#include <string>
#include <vector>

#include "sib/structure.hpp"

namespace sib {

// An injective element map with R(a) holding in the source iff R(map(a))
// holds in the target, for every relation and every source tuple.
struct EmbeddingWitness {
    std::vector<int> map; // source element -> target element
};

// Re-validates both directions of the iff by direct fact checking.
bool validate_witness(const Structure& source, const Structure& target, const std::vector<int>& map);

struct SearchOptions {
    // Per-search wall-clock guard; falls back to SIBTOOL_TIME_GUARD_SECS, then
    // 10 s. Exceeding it raises TimeGuardError, never a silent "no".
    std::optional<double> time_guard_secs;
    bool use_invariant_prune = true; // fast-fail invariants in is_isomorphic
    int threads = 1;
};

std::optional<EmbeddingWitness> find_embedding(const Structure& a, const Structure& b,
    const SearchOptions& opts = {});

// Bijective witness or absence. Fast-fails on invariant mismatch: size, fact
// counts per relation, degree-profile multiset, hyperedge component sizes,
// and the maximal 1-clique size census.
std::optional<EmbeddingWitness> is_isomorphic(const Structure& a, const Structure& b,
    const SearchOptions& opts = {});

// Partition of the inputs by bi-embeddability, refined by isomorphism. For
// finite structures each bi-embeddability block collapses to a single
// isomorphism sub-block.
struct CensusPartition {
    struct IsoBlock {
        std::vector<int> items; // indices into the input list
    };
    struct SiblingBlock {
        std::vector<IsoBlock> iso_blocks;
    };
    std::vector<SiblingBlock> blocks;

    int block_count() const { return static_cast<int>(blocks.size()); }
};

CensusPartition census(const std::vector<Structure>& structures, const SearchOptions& opts = {});

// True iff every induced substructure with at most s elements of either side
// embeds into the other. s is capped by `guard`.
bool same_age_up_to(const Structure& a, const Structure& b, int s, int guard = 5, const SearchOptions& opts = {});

// Canonical representative key of the isomorphism class: the lexicographically
// least serialization over all relabelings for n <= 8, an invariant
// fingerprint otherwise (callers resolve fingerprint collisions via
// is_isomorphic).
std::string canonical_key(const Structure& s);
bool canonical_key_exact(const Structure& s); // whether canonical_key is exact for s
std::string invariant_fingerprint(const Structure& s);

// The lexicographically least relabeling for n <= 8; the structure itself
// otherwise.
Structure canonical_form(const Structure& s);

} // namespace sib

#endif
