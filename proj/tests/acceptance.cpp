// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "sib/cliques.hpp"
#include "sib/embed.hpp"
#include "sib/error.hpp"
#include "sib/mutalg.hpp"
#include "sib/presentations.hpp"
#include "sib/qftype.hpp"
#include "sib/structure.hpp"
#include "support.hpp"

using namespace sib;
using nlohmann::json;
using sibtest::all_distinct_tuples;
using sibtest::fixture_path;
using sibtest::random_structure;

namespace {

struct Check {
    bool ok = true;
    long long cases = 0;
    std::string detail;

    void fail(const std::string& why)
    {
        if (ok)
            detail = why;
        ok = false;
    }
};

std::vector<Structure> criterion_corpus(std::uint64_t seed, int count)
{
    // n <= 7, at most 2 relations of arity <= 2
    std::mt19937_64 rng(seed);
    std::vector<Signature> sigs{
        Signature({{"E", 2}, {"P", 1}}),
        Signature({{"R", 2}, {"S", 2}}),
        Signature({{"E", 2}}),
        Signature({{"P", 1}, {"Q", 1}}),
    };
    std::vector<Structure> out;
    std::uniform_real_distribution<double> density(0.1, 0.6);
    for (int i = 0; i < count; ++i) {
        const Signature& sig = sigs[rng() % sigs.size()];
        int n = 1 + static_cast<int>(rng() % 7);
        out.push_back(random_structure(rng, sig, n, density(rng)));
    }
    return out;
}

// --- criterion 1 -----------------------------------------------------------

Check exchangeability_equivalence()
{
    Check c;
    for (const Structure& s : criterion_corpus(101, 200)) {
        for (int k = 1; k <= 2 && k <= s.size(); ++k) {
            auto tuples = all_distinct_tuples(s.size(), k);
            for (std::size_t i = 0; i < tuples.size(); ++i)
                for (std::size_t j = i + 1; j < tuples.size(); ++j) {
                    if (!tuples_disjoint(tuples[i], tuples[j]))
                        continue;
                    ++c.cases;
                    if (exchangeable_via_types(s, tuples[i], tuples[j])
                        != exchangeable_via_swap(s, tuples[i], tuples[j]))
                        c.fail("route disagreement");
                }
        }
    }
    if (c.cases < 10000)
        c.fail("corpus too small: " + std::to_string(c.cases) + " pairs");
    c.detail = std::to_string(c.cases) + " disjoint pairs, two routes agree";
    return c;
}

// --- criterion 2 -----------------------------------------------------------

Check clique_iff_totally_indiscernible()
{
    Check c;
    auto test_family = [&](const Structure& s, const std::vector<Tuple>& family) {
        ++c.cases;
        bool verifies = true;
        try {
            KClique::verify(s, family);
        } catch (const InputError&) {
            verifies = false;
        }
        std::vector<int> rest = complement_elements(s.size(), family);
        bool ti = is_totally_indiscernible(s, family, rest, static_cast<int>(family.size()));
        if (verifies != ti)
            c.fail("clique verification and indiscernibility disagree");
    };

    for (const Structure& s : criterion_corpus(101, 200)) {
        int n = s.size();
        // every pairwise-disjoint family of <= 4 singletons
        auto singles = all_distinct_tuples(n, 1);
        int m = static_cast<int>(singles.size());
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                test_family(s, {singles[i], singles[j]});
                for (int l = j + 1; l < m; ++l) {
                    test_family(s, {singles[i], singles[j], singles[l]});
                    for (int o = l + 1; o < m; ++o)
                        test_family(s, {singles[i], singles[j], singles[l], singles[o]});
                }
            }
        // every pairwise-disjoint family of <= 3 pairs (4 would need 8 elements)
        if (n >= 4) {
            auto pairs = all_distinct_tuples(n, 2);
            int p = static_cast<int>(pairs.size());
            for (int i = 0; i < p; ++i)
                for (int j = i + 1; j < p; ++j) {
                    if (!tuples_disjoint(pairs[i], pairs[j]))
                        continue;
                    test_family(s, {pairs[i], pairs[j]});
                    for (int l = j + 1; l < p; ++l) {
                        if (!tuples_disjoint(pairs[i], pairs[l]) || !tuples_disjoint(pairs[j], pairs[l]))
                            continue;
                        test_family(s, {pairs[i], pairs[j], pairs[l]});
                    }
                }
        }
    }
    if (c.ok)
        c.detail = std::to_string(c.cases) + " families, full agreement";
    return c;
}

// --- criterion 3 -----------------------------------------------------------

Check meld_and_extend()
{
    Check c;
    std::mt19937_64 rng(303);

    // melds: subsets of maximal cliques sharing a member
    long long melds = 0;
    while (melds < 500) {
        std::vector<int> classes;
        int nclasses = 2 + static_cast<int>(rng() % 3);
        for (int i = 0; i < nclasses; ++i)
            classes.push_back(2 + static_cast<int>(rng() % 4));
        Structure s = make_eqrel(classes);
        for (const KClique& big : enumerate_maximal_kcliques(s, 1)) {
            if (big.size() < 2)
                continue;
            const auto& members = big.members();
            Tuple shared = members[rng() % members.size()];
            std::vector<Tuple> a{shared}, b{shared};
            for (const Tuple& t : members) {
                if (t == shared)
                    continue;
                if (rng() % 2)
                    a.push_back(t);
                if (rng() % 2)
                    b.push_back(t);
            }
            try {
                KClique ka = KClique::verify(s, a);
                KClique kb = KClique::verify(s, b);
                meld(s, ka, kb);
                ++melds;
            } catch (const std::exception& e) {
                c.fail(std::string("meld case failed: ") + e.what());
                melds = 500;
                break;
            }
        }
    }

    // melds on cliques found in random structures
    for (const Structure& s : criterion_corpus(304, 60)) {
        if (s.size() < 3)
            continue;
        for (int k = 1; k <= 2; ++k) {
            for (const KClique& big : enumerate_maximal_kcliques(s, k)) {
                if (big.size() < 3)
                    continue;
                const auto& members = big.members();
                std::vector<Tuple> a{members[0], members[1]};
                std::vector<Tuple> b{members[1], members[2]};
                try {
                    meld(s, KClique::verify(s, a), KClique::verify(s, b));
                    ++melds;
                } catch (const std::exception& e) {
                    c.fail(std::string("meld case failed: ") + e.what());
                }
            }
        }
    }

    // extensions: sufficiently large cliques; every large prior maximal clique
    // must re-verify afterwards
    long long extensions = 0;
    auto run_extension = [&](const Structure& host, const KClique& clique, int ambient_k) {
        int threshold = 2 * ambient_k + host.signature().max_arity();
        std::vector<std::pair<int, std::vector<Tuple>>> prior;
        for (int kp = 1; kp <= ambient_k; ++kp)
            for (const KClique& pc : enumerate_maximal_kcliques(host, kp))
                if (pc.size() > threshold)
                    prior.push_back({kp, pc.members()});
        try {
            CliqueExtension ext = extend_clique(host, clique);
            for (const auto& [kp, members] : prior)
                KClique::verify(ext.extended, members);
            ++extensions;
        } catch (const std::exception& e) {
            c.fail(std::string("extension case failed: ") + e.what());
        }
    };

    for (int i = 0; i < 100; ++i) {
        std::vector<int> classes{6 + static_cast<int>(rng() % 4)};
        int extra = static_cast<int>(rng() % 3);
        for (int j = 0; j < extra; ++j)
            classes.push_back(2 + static_cast<int>(rng() % 5));
        Structure s = make_eqrel(classes);
        std::vector<Tuple> members;
        for (int e = 0; e < classes[0]; ++e)
            members.push_back({e});
        run_extension(s, KClique::verify(s, members), 1);
    }
    for (int i = 0; i < 50; ++i) {
        int m = 7 + static_cast<int>(rng() % 3);
        Structure s = sibtest::make_edges(m);
        std::vector<Tuple> members;
        for (int e = 0; e < m; ++e)
            members.push_back({2 * e, 2 * e + 1});
        run_extension(s, KClique::verify(s, members), 2);
    }
    for (int i = 0; i < 50; ++i) {
        int n = 6 + static_cast<int>(rng() % 4);
        Structure s(Signature({{"E", 2}}), n, {});
        std::vector<Tuple> members;
        for (int e = 0; e < n; ++e)
            members.push_back({e});
        run_extension(s, KClique::verify(s, members), 1);
    }

    if (melds < 500)
        c.fail("too few meld cases");
    if (extensions < 200 && c.ok)
        c.fail("too few extension cases");
    if (c.ok)
        c.detail = std::to_string(melds) + " melds, " + std::to_string(extensions) + " extensions, zero failures";
    return c;
}

// --- criterion 4 -----------------------------------------------------------

Check nf_finite_shadow()
{
    Check c;
    std::mt19937_64 rng(404);
    const std::vector<std::string> labels{"a", "b", "c"};
    const int t = 13;
    long long pair_checks = 0;

    struct Kind {
        bool rank0;
        int k;
    };
    for (const Kind kind : {Kind{true, 1}, Kind{true, 2}, Kind{false, 1}, Kind{false, 2}}) {
        GridPresentation g = kind.rank0 ? builtin_rank0_grid(kind.k, labels) : builtin_rank1_grid(kind.k, labels);
        int min_size = 2 * kind.k + g.sig.max_arity() + 1; // k=1: 5, k=2: 8
        struct Instance {
            std::map<std::string, int> cuts;
            std::vector<int> expected; // family sizes, sorted
            Structure built;
        };
        std::vector<Instance> full; // fully cut, for pairwise census checks

        for (int i = 0; i < 13; ++i) {
            bool fully_cut = i < 10;
            Instance inst;
            if (fully_cut) {
                // shared low images plus a varying maximum: checked pairs then
                // dominate entrywise, so the failing search direction prunes
                // at depth zero while the succeeding one maps class to class
                int span = 12 - (min_size + 2) + 1;
                int max_value = min_size + 2 + (i % span);
                inst.cuts[labels[0]] = min_size;
                inst.cuts[labels[1]] = min_size + 1;
                inst.cuts[labels[2]] = max_value;
            } else {
                int cut_count = 1 + static_cast<int>(rng() % 2);
                std::set<int> values;
                while (static_cast<int>(values.size()) < cut_count)
                    values.insert(min_size + static_cast<int>(rng() % (12 - min_size + 1)));
                int li = 0;
                for (int v : values)
                    inst.cuts[labels[li++]] = v;
            }
            for (const std::string& l : labels)
                inst.expected.push_back(inst.cuts.count(l) ? inst.cuts[l] : t);
            std::sort(inst.expected.begin(), inst.expected.end());

            try {
                // the operation itself verifies the family-clique census
                inst.built = generate_nf(g, inst.cuts, t);
                ++c.cases;
            } catch (const std::exception& e) {
                c.fail(std::string("generate_nf failed: ") + e.what());
                continue;
            }

            // external cross-check at k = 1: the full census is visible
            if (kind.k == 1) {
                std::vector<int> expect_full = inst.expected;
                if (!kind.rank0) {
                    expect_full.push_back(1); // one singleton witness per label
                    expect_full.push_back(1);
                    expect_full.push_back(1);
                }
                std::sort(expect_full.begin(), expect_full.end());
                if (clique_size_census(inst.built, 1) != expect_full)
                    c.fail("external 1-clique census mismatch");
            }
            if (fully_cut)
                full.push_back(std::move(inst));
        }

        // distinct images => distinct census blocks; pair instances whose
        // maxima differ so the failing direction prunes immediately
        for (std::size_t i = 0; i < full.size(); ++i)
            for (std::size_t j = i + 1; j < full.size() && pair_checks < 40; ++j) {
                if (full[i].expected == full[j].expected)
                    continue;
                if (full[i].expected.back() == full[j].expected.back())
                    continue;
                ++pair_checks;
                if (census({full[i].built, full[j].built}).block_count() != 2)
                    c.fail("distinct images did not split into two census blocks");
            }
    }

    // one harder pair per rank at k = 1: equal maxima, different middles
    for (bool rank0 : {true, false}) {
        GridPresentation g = rank0 ? builtin_rank0_grid(1, labels) : builtin_rank1_grid(1, labels);
        Structure nf = generate_nf(g, {{"a", 5}, {"b", 7}, {"c", 9}}, 13);
        Structure ng = generate_nf(g, {{"a", 5}, {"b", 8}, {"c", 9}}, 13);
        c.cases += 2;
        ++pair_checks;
        if (census({nf, ng}).block_count() != 2)
            c.fail("equal-maximum pair did not split into two census blocks");
    }

    if (c.cases < 50)
        c.fail("too few instances: " + std::to_string(c.cases));
    if (c.ok)
        c.detail = std::to_string(c.cases) + " instances, " + std::to_string(pair_checks)
            + " census pair checks";
    return c;
}

// --- criterion 5 -----------------------------------------------------------

Check mstar_family()
{
    Check c;
    CellularPresentation p =
        Presentation::from_json(sibtest::read_file(fixture_path("edges_independent.pres.json"))).cellular();
    std::vector<Structure> outputs;
    for (int ell = 1; ell <= 4; ++ell) {
        try {
            MstarResult r = generate_mstar_ell(p, 0, ell, 8);
            ++c.cases;
            int lo = ell, hi = p.base.size() + ell + 1;
            if (r.largest_finite_one_clique < lo || r.largest_finite_one_clique > hi)
                c.fail("largest finite 1-clique outside the bracket at ell=" + std::to_string(ell));
            outputs.push_back(std::move(r.structure));
        } catch (const std::exception& e) {
            c.fail(std::string("generate_mstar_ell failed: ") + e.what());
        }
    }
    if (outputs.size() == 4 && census(outputs).block_count() != 4)
        c.fail("the four structures are not pairwise non-isomorphic");
    if (c.ok)
        c.detail = "ell in 1..4 pairwise non-isomorphic, sizes within brackets";
    return c;
}

// --- criterion 6 -----------------------------------------------------------

Check ns_family()
{
    Check c;
    ComponentChainSpec chain =
        Presentation::from_json(sibtest::read_file(fixture_path("path_chain.pres.json"))).chain();

    ValidationReport report = validate(Presentation(chain), 4);
    if (!report.valid)
        c.fail("chain validation failed");

    std::vector<std::vector<int>> sets{{}, {0}, {0, 1}, {3}, {1, 3}, {0, 1, 2, 3, 4}};
    std::vector<Structure> outputs;
    for (const auto& s : sets) {
        try {
            // generate_ns re-asserts the component-census distinguisher
            outputs.push_back(generate_ns(chain, s, 10));
            ++c.cases;
        } catch (const std::exception& e) {
            c.fail(std::string("generate_ns failed: ") + e.what());
        }
    }
    if (outputs.size() == sets.size() && census(outputs).block_count() != static_cast<int>(sets.size()))
        c.fail("six selections did not give six census blocks");
    if (c.ok)
        c.detail = "6 selections, 6 blocks, chain conditions verified";
    return c;
}

// --- criterion 7 -----------------------------------------------------------

Check packing_oracle()
{
    Check c;
    std::mt19937_64 rng(707);
    Signature sig({{"E", 2}, {"P", 1}});
    std::vector<std::string> formulas{
        "E(x1,x2)", "E(x1,x2)&x1!=x2", "E(x1,x2)&!E(x2,x1)", "P(x1)", "P(x1)&E(x1,x2)",
        "E(x1,x2)&E(x2,x3)", "E(x1,x2)&P(x2)", "!P(x1)&E(x1,x2)"};
    while (c.cases < 100) {
        int n = 3 + static_cast<int>(rng() % 5);
        Structure s = random_structure(rng, sig, n, 0.25);
        QfConjunction phi = QfConjunction::parse(formulas[rng() % formulas.size()], sig);
        std::vector<Tuple> reals = enumerate_realizations(s, phi);
        if (reals.empty() || reals.size() > 12)
            continue;
        ++c.cases;

        int best = 0;
        int m = static_cast<int>(reals.size());
        std::vector<std::vector<int>> sets(m);
        for (int i = 0; i < m; ++i) {
            sets[i].assign(reals[i].begin(), reals[i].end());
            std::sort(sets[i].begin(), sets[i].end());
            sets[i].erase(std::unique(sets[i].begin(), sets[i].end()), sets[i].end());
        }
        for (unsigned mask = 1; mask < (1u << m); ++mask) {
            std::vector<int> chosen;
            for (int i = 0; i < m; ++i)
                if (mask & (1u << i))
                    chosen.push_back(i);
            bool ok = true;
            for (std::size_t i = 0; i < chosen.size() && ok; ++i)
                for (std::size_t j = i + 1; j < chosen.size() && ok; ++j)
                    for (int e : sets[chosen[i]])
                        if (std::binary_search(sets[chosen[j]].begin(), sets[chosen[j]].end(), e)) {
                            ok = false;
                            break;
                        }
            if (ok)
                best = std::max(best, static_cast<int>(chosen.size()));
        }
        if (max_disjoint_realizations(s, phi) != best)
            c.fail("packing disagrees with the subset oracle");
    }
    if (c.ok)
        c.detail = std::to_string(c.cases) + " instances, exact agreement";
    return c;
}

// --- criterion 8 -----------------------------------------------------------

Check biembeddability_is_isomorphism()
{
    Check c;
    std::mt19937_64 rng(808);
    Signature sig({{"E", 2}, {"P", 1}});
    std::uniform_real_distribution<double> density(0.1, 0.6);
    std::vector<Structure> corpus;
    for (int i = 0; i < 200; ++i)
        corpus.push_back(random_structure(rng, sig, 1 + static_cast<int>(rng() % 7), density(rng)));

    for (std::size_t i = 0; i < corpus.size(); ++i)
        for (std::size_t j = i + 1; j < corpus.size(); ++j) {
            ++c.cases;
            bool fwd = find_embedding(corpus[i], corpus[j]).has_value();
            bool bwd = fwd && find_embedding(corpus[j], corpus[i]).has_value();
            bool iso = is_isomorphic(corpus[i], corpus[j]).has_value();
            if ((fwd && bwd) != iso)
                c.fail("mutual embedding and isomorphism disagree");
        }
    if (c.ok)
        c.detail = std::to_string(c.cases) + " pairs, full agreement";
    return c;
}

// --- criterion 9 -----------------------------------------------------------

Check classifier_fixtures()
{
    Check c;
    auto verdict_of = [&](const std::string& file) {
        return classify(Presentation::from_json(sibtest::read_file(fixture_path(file)))).count;
    };
    c.cases = 3;
    if (verdict_of("unary_predicates.pres.json") != SiblingCount::One)
        c.fail("unary predicates should classify ONE");
    if (verdict_of("edges_clique.pres.json") != SiblingCount::Aleph0)
        c.fail("edges plus clique should classify ALEPH0");
    if (verdict_of("rank1_grid.pres.json") != SiblingCount::Continuum)
        c.fail("rank-1 grid should classify CONTINUUM");
    if (c.ok)
        c.detail = "ONE / ALEPH0 / CONTINUUM as expected";
    return c;
}

// --- criterion 10 ----------------------------------------------------------

std::string run_cli_capture(const std::string& args, int& exit_code)
{
    std::string cmd = std::string(SIBTOOL_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        exit_code = -1;
        return "";
    }
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        out.append(buf.data(), n);
    int status = pclose(pipe);
    exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

bool envelope_ok(const json& j)
{
    return j.is_object() && j.contains("command") && j["command"].is_string() && j.contains("result")
        && j["result"].is_object() && j.contains("timing_ms") && j["timing_ms"].is_number()
        && j.contains("warnings") && j["warnings"].is_array();
}

Check roundtrips_and_json()
{
    Check c;

    // parse then serialize is the identity on the fixture corpus and on
    // generated structures
    std::vector<Structure> corpus;
    for (const char* name : {"path_3.str", "path_5.str", "edges_3.str", "empty.str", "mixed.str"})
        corpus.push_back(parse_structure(sibtest::read_file(fixture_path(std::string("structures/") + name))));
    corpus.push_back(make_eqrel({3, 4}));
    corpus.push_back(sibtest::edges_plus_clique(3, 4));
    for (const char* pres : {"edges_clique.pres.json", "rank0_grid.pres.json", "rank1_grid.pres.json"})
        corpus.push_back(truncate(Presentation::from_json(sibtest::read_file(fixture_path(pres))), 4));
    for (const Structure& s : corpus) {
        ++c.cases;
        Structure back = parse_structure(serialize_structure(s));
        if (!(back == s) || serialize_structure(back) != serialize_structure(s))
            c.fail("parse/serialize round trip failed");
    }

    // CLI --json outputs validate against the documented schema
    std::string p3 = fixture_path("structures/path_3.str");
    std::string p5 = fixture_path("structures/path_5.str");
    std::string e3 = fixture_path("structures/edges_3.str");
    std::string cells = fixture_path("edges_clique.pres.json");
    std::string grid = fixture_path("rank0_grid.pres.json");
    std::string chain = fixture_path("path_chain.pres.json");
    std::string split = fixture_path("secretly_split.pres.json");
    std::string indep = fixture_path("edges_independent.pres.json");

    std::vector<std::pair<std::string, std::vector<std::string>>> verbs = {
        {"parse " + p3, {"structure", "size", "relations", "fact_count"}},
        {"cliques --k 1 " + e3, {"k", "count", "census", "cliques"}},
        {"ma " + p5, {"bounds"}},
        {"components " + e3, {"components", "census"}},
        {"pack " + p5 + " --formula 'S(x1,x2)'", {"max_disjoint", "realizations", "cap"}},
        {"embed " + p3 + " " + p5, {"embeds", "witness"}},
        {"iso " + p3 + " " + p3, {"isomorphic", "witness"}},
        {"census " + p3 + " " + p5, {"block_count", "blocks"}},
        {"age " + p3 + " " + p5 + " --s 2", {"same_age_up_to", "s"}},
        {"validate " + cells + " --t 4", {"valid", "issues"}},
        {"classify " + cells, {"verdict", "justification"}},
        {"truncate " + cells + " --t 3", {"structure", "size"}},
        {"separate " + split + " --t 7", {"presentation"}},
        {"generate eqrel --classes 2,3", {"structure", "size"}},
        {"generate nf --spec " + grid + " --cut a=5,b=7,c=9 --t 12", {"structure", "size"}},
        {"generate mstar --spec " + indep + " --family 0 --ell 1 --t 8",
            {"structure", "size", "largest_finite_one_clique"}},
        {"generate ns --spec " + chain + " --s 0,2 --t 9", {"structure", "size"}},
    };
    for (const auto& [args, keys] : verbs) {
        ++c.cases;
        int code = -1;
        std::string out = run_cli_capture("--json " + args, code);
        if (code != 0) {
            c.fail("CLI exited " + std::to_string(code) + " for: " + args);
            continue;
        }
        json j;
        try {
            j = json::parse(out);
        } catch (const json::exception&) {
            c.fail("CLI emitted invalid JSON for: " + args);
            continue;
        }
        if (!envelope_ok(j)) {
            c.fail("JSON envelope malformed for: " + args);
            continue;
        }
        for (const std::string& key : keys)
            if (!j["result"].contains(key))
                c.fail("missing result key '" + key + "' for: " + args);
        // structure payloads re-parse and are canonical
        if (j["result"].contains("structure")) {
            std::string text = j["result"]["structure"].get<std::string>();
            if (serialize_structure(parse_structure(text)) != text)
                c.fail("CLI structure payload is not canonical for: " + args);
        }
    }

    if (c.ok)
        c.detail = std::to_string(c.cases) + " round trips and CLI schema checks";
    return c;
}

struct Criterion {
    int id;
    std::string name;
    double budget_secs; // 0 = no stated budget
    std::function<Check()> run;
};

} // namespace

int main()
{
    std::vector<Criterion> criteria = {
        {1, "exchangeability: type route vs swap-automorphism route", 60, exchangeability_equivalence},
        {2, "k-clique verification vs total indiscernibility", 0, clique_iff_totally_indiscernible},
        {3, "meld and extension preservation", 0, meld_and_extend},
        {4, "cut-size census and non-isomorphism of grid cuts", 120, nf_finite_shadow},
        {5, "stranded-family structures pairwise non-isomorphic", 30, mstar_family},
        {6, "component-chain selections distinguishable", 0, ns_family},
        {7, "exact packing vs subset oracle", 0, packing_oracle},
        {8, "mutual embedding equals isomorphism", 0, biembeddability_is_isomorphism},
        {9, "classifier verdicts on the three fixtures", 0, classifier_fixtures},
        {10, "serialization round trips and CLI JSON schema", 0, roundtrips_and_json},
    };

    bool all_ok = true;
    for (const Criterion& cr : criteria) {
        auto started = std::chrono::steady_clock::now();
        Check result;
        try {
            result = cr.run();
        } catch (const std::exception& e) {
            result.ok = false;
            result.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        if (cr.budget_secs > 0 && secs > cr.budget_secs) {
            result.ok = false;
            result.detail += " [over time budget]";
        }
        all_ok = all_ok && result.ok;
        std::printf("[%2d] %s  %s (%s; %.1f s%s)\n", cr.id, result.ok ? "PASS" : "FAIL", cr.name.c_str(),
            result.detail.c_str(), secs,
            cr.budget_secs > 0 ? (" of " + std::to_string(static_cast<int>(cr.budget_secs)) + " s").c_str() : "");
    }
    std::printf("%s\n", all_ok ? "acceptance: all criteria PASS" : "acceptance: FAILURES present");
    return all_ok ? 0 : 1;
}
