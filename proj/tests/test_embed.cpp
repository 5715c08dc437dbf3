#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "sib/embed.hpp"
#include "sib/error.hpp"
#include "sib/structure.hpp"
#include "support.hpp"

using namespace sib;
using sibtest::make_edges;
using sibtest::make_path;
using sibtest::random_structure;

TEST_SUITE_BEGIN("embed");

TEST_CASE("embedding examples")
{
    Structure p3 = make_path(3);
    Structure p5 = make_path(5);

    auto self = find_embedding(p3, p3);
    REQUIRE(self.has_value());
    CHECK(validate_witness(p3, p3, self->map));

    auto up = find_embedding(p3, p5);
    REQUIRE(up.has_value());
    CHECK(validate_witness(p3, p5, up->map));

    CHECK_FALSE(find_embedding(p5, p3).has_value());

    Structure other(Signature({{"T", 2}}), 3, {});
    CHECK_THROWS_AS(find_embedding(p3, other), InputError);
}

TEST_CASE("isomorphism examples")
{
    Structure eq33 = make_eqrel({3, 3});
    auto self = is_isomorphic(eq33, eq33);
    REQUIRE(self.has_value());
    for (int e = 0; e < eq33.size(); ++e)
        CHECK(self->map[e] == e); // the identity witness comes out first

    Structure eq24 = make_eqrel({2, 4});
    CHECK_FALSE(is_isomorphic(eq33, eq24).has_value());

    std::mt19937_64 rng(13);
    Structure edges = make_edges(3);
    std::vector<int> perm(edges.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Structure moved = relabel(edges, perm);
    auto w = is_isomorphic(edges, moved);
    REQUIRE(w.has_value());
    CHECK(validate_witness(edges, moved, w->map));
}

TEST_CASE("witnesses compose")
{
    Structure p2 = make_path(2);
    Structure p4 = make_path(4);
    Structure p6 = make_path(6);
    auto ab = find_embedding(p2, p4);
    auto bc = find_embedding(p4, p6);
    REQUIRE(ab.has_value());
    REQUIRE(bc.has_value());
    std::vector<int> comp(p2.size());
    for (int e = 0; e < p2.size(); ++e)
        comp[e] = bc->map[ab->map[e]];
    CHECK(validate_witness(p2, p6, comp));
}

TEST_CASE("witness validation rejects bad maps")
{
    Structure p3 = make_path(3);
    CHECK(validate_witness(p3, p3, {0, 1, 2}));
    CHECK_FALSE(validate_witness(p3, p3, {0, 0, 2}));   // not injective
    CHECK_FALSE(validate_witness(p3, p3, {2, 1, 0}));   // reverses the path
    CHECK_FALSE(validate_witness(p3, make_path(4), {0, 1, 3}));
}

TEST_CASE("witness validation checks both directions")
{
    // forward fact preservation holds but the image carries an extra fact
    Signature sig({{"E", 2}});
    Structure a(sig, 2, {{0, {0, 1}}});
    Structure b(sig, 2, {{0, {0, 1}}, {0, {1, 0}}});
    CHECK_FALSE(validate_witness(a, b, {0, 1}));
    CHECK_FALSE(find_embedding(a, b).has_value()); // no induced copy at all
}

TEST_CASE("finite mutual embedding equals isomorphism")
{
    std::mt19937_64 rng(271828);
    Signature sig({{"E", 2}, {"P", 1}});
    std::vector<Structure> corpus;
    for (int i = 0; i < 24; ++i)
        corpus.push_back(random_structure(rng, sig, 2 + static_cast<int>(rng() % 6), 0.3));
    for (std::size_t i = 0; i < corpus.size(); ++i)
        for (std::size_t j = i + 1; j < corpus.size(); ++j) {
            bool fwd = find_embedding(corpus[i], corpus[j]).has_value();
            bool bwd = find_embedding(corpus[j], corpus[i]).has_value();
            bool iso = is_isomorphic(corpus[i], corpus[j]).has_value();
            CHECK((fwd && bwd) == iso);
        }
}

TEST_CASE("invariant pruning is sound")
{
    std::mt19937_64 rng(321);
    Signature sig({{"E", 2}});
    SearchOptions pruned, unpruned;
    unpruned.use_invariant_prune = false;
    for (int round = 0; round < 60; ++round) {
        Structure a = random_structure(rng, sig, 2 + static_cast<int>(rng() % 5), 0.4);
        Structure b = random_structure(rng, sig, 2 + static_cast<int>(rng() % 5), 0.4);
        CHECK(is_isomorphic(a, b, pruned).has_value() == is_isomorphic(a, b, unpruned).has_value());
    }
}

TEST_CASE("census partitions")
{
    Structure p3 = make_path(3);
    Structure p4 = make_path(4);
    Structure moved = relabel(p3, {2, 0, 1});

    CensusPartition single = census({p3});
    CHECK(single.block_count() == 1);

    CensusPartition part = census({p3, moved, p4});
    CHECK(part.block_count() == 2);
    bool found = false;
    for (const auto& block : part.blocks) {
        // finite bi-embeddability blocks collapse to one isomorphism class
        CHECK(block.iso_blocks.size() == 1);
        for (const auto& ib : block.iso_blocks)
            if (ib.items == std::vector<int>{0, 1})
                found = true;
    }
    CHECK(found);

    Structure other(Signature({{"T", 2}}), 1, {});
    CHECK_THROWS_AS(census({p3, other}), InputError);
}

TEST_CASE("census order is deterministic")
{
    Structure p3 = make_path(3);
    Structure p4 = make_path(4);
    CensusPartition a = census({p3, p4});
    CensusPartition b = census({p4, p3});
    REQUIRE(a.block_count() == 2);
    REQUIRE(b.block_count() == 2);
    CHECK(a.blocks[0].iso_blocks[0].items == std::vector<int>{0});
    CHECK(b.blocks[0].iso_blocks[0].items == std::vector<int>{1});
}

TEST_CASE("same age up to a size")
{
    Structure p3 = make_path(3);
    CHECK(same_age_up_to(p3, p3, 3));

    Signature sig({{"S", 2}});
    auto s_edges = [&](int m) {
        std::vector<Fact> facts;
        for (int i = 0; i < m; ++i)
            facts.push_back({0, {2 * i, 2 * i + 1}});
        return Structure(sig, 2 * m, std::move(facts));
    };
    // all size-3 pieces match: an edge plus a point, or up to 3 isolated points
    CHECK(same_age_up_to(s_edges(3), s_edges(5), 3));
    // at size 4 they differ: four pairwise isolated points need four edges
    CHECK_FALSE(same_age_up_to(s_edges(3), s_edges(5), 4));
    CHECK(same_age_up_to(s_edges(4), s_edges(5), 4));

    // a length-2 path embeds only into the path
    CHECK_FALSE(same_age_up_to(p3, s_edges(3), 3));

    CHECK_THROWS_AS(same_age_up_to(p3, p3, 6), InputError); // exceeds the guard
    CHECK(same_age_up_to(p3, p3, 6, 8));                    // raised guard
}

TEST_CASE("canonical keys")
{
    Structure edges = make_edges(3);
    Structure moved = relabel(edges, {5, 4, 3, 2, 1, 0});
    CHECK(canonical_key_exact(edges));
    CHECK(canonical_key(edges) == canonical_key(moved));
    CHECK(canonical_key(edges) != canonical_key(make_eqrel({2, 2, 2})));

    Structure big(Signature({{"E", 2}}), 20, {});
    CHECK_FALSE(canonical_key_exact(big));
    CHECK(canonical_key(big) == invariant_fingerprint(big));
}

TEST_CASE("time guard raises instead of answering")
{
    // An induced 13-cycle cannot sit inside a 14-cycle; the search explores
    // plenty of branches before concluding that.
    Signature sig({{"S", 2}});
    auto cycle = [&](int n) {
        std::vector<Fact> facts;
        for (int i = 0; i < n; ++i)
            facts.push_back({0, {i, (i + 1) % n}});
        return Structure(sig, n, std::move(facts));
    };
    Structure c13 = cycle(13);
    Structure c14 = cycle(14);
    SearchOptions normal;
    CHECK_FALSE(find_embedding(c13, c14, normal).has_value());

    // ten isolated points into nine triangles: a heavily backtracking "no"
    Signature esig({{"E", 2}});
    Structure ten(esig, 10, {});
    std::vector<Fact> tri_facts;
    for (int t = 0; t < 9; ++t)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j)
                    tri_facts.push_back({0, {3 * t + i, 3 * t + j}});
    Structure triangles(esig, 27, std::move(tri_facts));
    SearchOptions tiny;
    tiny.time_guard_secs = 1e-9;
    CHECK_THROWS_AS(find_embedding(ten, triangles, tiny), TimeGuardError);
}

TEST_SUITE_END();
