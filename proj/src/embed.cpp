#include "sib/embed.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>

#include "sib/cliques.hpp"
#include "sib/error.hpp"

namespace sib {

namespace {

using Clock = std::chrono::steady_clock;

double resolved_time_guard(const SearchOptions& opts)
{
    if (opts.time_guard_secs)
        return *opts.time_guard_secs;
    if (const char* env = std::getenv("SIBTOOL_TIME_GUARD_SECS")) {
        char* end = nullptr;
        double v = std::strtod(env, &end);
        if (end && *end == '\0' && v > 0)
            return v;
    }
    return 10.0;
}

struct Deadline {
    Clock::time_point at;
    long long counter = 0;

    explicit Deadline(double secs) : at(Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                         std::chrono::duration<double>(secs)))
    {
    }

    void poll()
    {
        if ((++counter & 0xff) == 0 && Clock::now() > at)
            throw TimeGuardError("embedding search exceeded its time guard");
    }
};

// Per-element profile: for every (relation, position) the count of facts with
// the element there, plus the all-same-entry loop pattern per relation.
struct ElementProfile {
    std::vector<int> degrees;
    std::vector<char> loops;

    auto operator<=>(const ElementProfile&) const = default;
};

ElementProfile element_profile(const Structure& s, int e)
{
    ElementProfile p;
    for (int r = 0; r < s.signature().relation_count(); ++r) {
        int arity = s.signature().relation(r).arity;
        for (int pos = 0; pos < arity; ++pos)
            p.degrees.push_back(s.position_degree(e, r, pos));
        p.loops.push_back(s.has_fact(r, Tuple(arity, e)) ? 1 : 0);
    }
    return p;
}

bool profile_dominates(const ElementProfile& big, const ElementProfile& small)
{
    for (std::size_t i = 0; i < small.degrees.size(); ++i)
        if (big.degrees[i] < small.degrees[i])
            return false;
    return big.loops == small.loops;
}

struct EmbedSearch {
    const Structure& a;
    const Structure& b;
    Deadline deadline;
    std::vector<int> order;            // source elements, most-constrained first
    std::vector<std::vector<int>> cand; // candidate targets per source element
    std::vector<int> map;               // source -> target or -1
    std::vector<int> back;              // target -> source or -1

    EmbedSearch(const Structure& a_, const Structure& b_, double guard) : a(a_), b(b_), deadline(guard)
    {
        map.assign(a.size(), -1);
        back.assign(b.size(), -1);

        std::vector<ElementProfile> pa(a.size()), pb(b.size());
        for (int e = 0; e < a.size(); ++e)
            pa[e] = element_profile(a, e);
        for (int e = 0; e < b.size(); ++e)
            pb[e] = element_profile(b, e);

        order.resize(a.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int u, int v) {
            return a.incident(u).size() > a.incident(v).size();
        });

        cand.resize(a.size());
        for (int u = 0; u < a.size(); ++u) {
            std::vector<int> exact, loose;
            for (int v = 0; v < b.size(); ++v) {
                if (!profile_dominates(pb[v], pa[u]))
                    continue;
                (pb[v] == pa[u] ? exact : loose).push_back(v);
            }
            cand[u] = std::move(exact);
            cand[u].insert(cand[u].end(), loose.begin(), loose.end());
        }
    }

    bool consistent(int u, int v) const
    {
        // Facts of a touching u with all entries assigned must map to facts.
        for (auto [r, fi] : a.incident(u)) {
            const Tuple& t = a.facts(r)[fi];
            Tuple image(t.size());
            bool complete = true;
            for (std::size_t i = 0; i < t.size(); ++i) {
                int w = t[i] == u ? v : map[t[i]];
                if (w < 0) {
                    complete = false;
                    break;
                }
                image[i] = w;
            }
            if (complete && !b.has_fact(r, image))
                return false;
        }
        // Facts of b touching v with all entries in the image must pull back.
        for (auto [r, fi] : b.incident(v)) {
            const Tuple& t = b.facts(r)[fi];
            Tuple pre(t.size());
            bool complete = true;
            for (std::size_t i = 0; i < t.size(); ++i) {
                int w = t[i] == v ? u : back[t[i]];
                if (w < 0) {
                    complete = false;
                    break;
                }
                pre[i] = w;
            }
            if (complete && !a.has_fact(r, pre))
                return false;
        }
        return true;
    }

    bool run(std::size_t depth)
    {
        deadline.poll();
        if (depth == order.size())
            return true;
        int u = order[depth];
        for (int v : cand[u]) {
            if (back[v] >= 0)
                continue;
            if (!consistent(u, v))
                continue;
            map[u] = v;
            back[v] = u;
            if (run(depth + 1))
                return true;
            map[u] = -1;
            back[v] = -1;
        }
        return false;
    }
};

} // namespace

bool validate_witness(const Structure& source, const Structure& target, const std::vector<int>& map)
{
    if (static_cast<int>(map.size()) != source.size())
        return false;
    std::vector<char> hit(target.size(), 0);
    for (int v : map) {
        if (v < 0 || v >= target.size() || hit[v])
            return false;
        hit[v] = 1;
    }
    if (!(source.signature() == target.signature()))
        return false;
    for (int r = 0; r < source.signature().relation_count(); ++r)
        for (const Tuple& t : source.facts(r)) {
            Tuple image(t.size());
            for (std::size_t i = 0; i < t.size(); ++i)
                image[i] = map[t[i]];
            if (!target.has_fact(r, image))
                return false;
        }
    std::vector<int> back(target.size(), -1);
    for (std::size_t u = 0; u < map.size(); ++u)
        back[map[u]] = static_cast<int>(u);
    for (int r = 0; r < target.signature().relation_count(); ++r)
        for (const Tuple& t : target.facts(r)) {
            Tuple pre(t.size());
            bool inside = true;
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (back[t[i]] < 0) {
                    inside = false;
                    break;
                }
                pre[i] = back[t[i]];
            }
            if (inside && !source.has_fact(r, pre))
                return false;
        }
    return true;
}

std::optional<EmbeddingWitness> find_embedding(const Structure& a, const Structure& b, const SearchOptions& opts)
{
    if (!(a.signature() == b.signature()))
        throw InputError("find_embedding: signature mismatch");
    if (a.size() > b.size())
        return std::nullopt;
    EmbedSearch search(a, b, resolved_time_guard(opts));
    if (!search.run(0))
        return std::nullopt;
    EmbeddingWitness w{search.map};
    if (!validate_witness(a, b, w.map))
        throw std::logic_error("find_embedding: produced witness failed validation");
    return w;
}

namespace {

std::vector<int> component_sizes(const Structure& s)
{
    std::vector<int> parent(s.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int r = 0; r < s.signature().relation_count(); ++r)
        for (const Tuple& t : s.facts(r))
            for (std::size_t i = 1; i < t.size(); ++i) {
                int x = find(t[0]), y = find(t[i]);
                if (x != y)
                    parent[x] = y;
            }
    std::vector<int> size(s.size(), 0);
    for (int e = 0; e < s.size(); ++e)
        size[find(e)]++;
    std::vector<int> out;
    for (int e = 0; e < s.size(); ++e)
        if (size[e] > 0)
            out.push_back(size[e]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ElementProfile> profile_multiset(const Structure& s)
{
    std::vector<ElementProfile> ps(s.size());
    for (int e = 0; e < s.size(); ++e)
        ps[e] = element_profile(s, e);
    std::sort(ps.begin(), ps.end());
    return ps;
}

bool invariants_match(const Structure& a, const Structure& b)
{
    if (a.size() != b.size())
        return false;
    for (int r = 0; r < a.signature().relation_count(); ++r)
        if (a.facts(r).size() != b.facts(r).size())
            return false;
    if (profile_multiset(a) != profile_multiset(b))
        return false;
    if (component_sizes(a) != component_sizes(b))
        return false;
    if (clique_size_census(a, 1) != clique_size_census(b, 1))
        return false;
    return true;
}

} // namespace

std::optional<EmbeddingWitness> is_isomorphic(const Structure& a, const Structure& b, const SearchOptions& opts)
{
    if (!(a.signature() == b.signature()))
        throw InputError("is_isomorphic: signature mismatch");
    if (a.size() != b.size())
        return std::nullopt;
    if (opts.use_invariant_prune && !invariants_match(a, b))
        return std::nullopt;
    // An injective embedding between equal-size structures is onto, and the
    // two-directional fact condition then makes it an isomorphism.
    return find_embedding(a, b, opts);
}

namespace {

std::vector<int> least_relabeling(const Structure& s)
{
    int n = s.size();
    std::vector<int> perm(n), best_perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<Tuple>> best;
    bool have_best = false;
    do {
        std::vector<std::vector<Tuple>> mapped(s.signature().relation_count());
        for (int r = 0; r < s.signature().relation_count(); ++r) {
            mapped[r].reserve(s.facts(r).size());
            for (const Tuple& t : s.facts(r)) {
                Tuple img(t.size());
                for (std::size_t i = 0; i < t.size(); ++i)
                    img[i] = perm[t[i]];
                mapped[r].push_back(std::move(img));
            }
            std::sort(mapped[r].begin(), mapped[r].end());
        }
        if (!have_best || mapped < best) {
            best = std::move(mapped);
            best_perm = perm;
            have_best = true;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best_perm;
}

} // namespace

Structure canonical_form(const Structure& s)
{
    if (!canonical_key_exact(s))
        return s;
    if (s.size() == 0)
        return s;
    return relabel(s, least_relabeling(s));
}

std::string canonical_key(const Structure& s)
{
    if (!canonical_key_exact(s))
        return invariant_fingerprint(s);
    return "exact|" + serialize_structure(canonical_form(s));
}

bool canonical_key_exact(const Structure& s)
{
    return s.size() <= 8;
}

std::string invariant_fingerprint(const Structure& s)
{
    std::ostringstream out;
    out << "fp|n=" << s.size() << "|counts=";
    for (int r = 0; r < s.signature().relation_count(); ++r)
        out << s.facts(r).size() << ",";
    out << "|components=";
    for (int c : component_sizes(s))
        out << c << ",";
    out << "|profiles=";
    for (const ElementProfile& p : profile_multiset(s)) {
        for (int d : p.degrees)
            out << d << ".";
        for (char l : p.loops)
            out << int(l);
        out << ";";
    }
    return out.str();
}

CensusPartition census(const std::vector<Structure>& structures, const SearchOptions& opts)
{
    for (std::size_t i = 1; i < structures.size(); ++i)
        if (!(structures[i].signature() == structures[0].signature()))
            throw InputError("census: structures must share a signature");

    // Isomorphism classes first.
    struct Class {
        std::string key;
        int rep; // input index
        std::vector<int> items;
    };
    std::vector<Class> classes;
    for (int i = 0; i < static_cast<int>(structures.size()); ++i) {
        std::string key = canonical_key(structures[i]);
        bool placed = false;
        for (Class& c : classes) {
            if (c.key != key)
                continue;
            if (canonical_key_exact(structures[i]) || is_isomorphic(structures[c.rep], structures[i], opts)) {
                c.items.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed)
            classes.push_back({std::move(key), i, {i}});
    }

    // Bi-embeddability between class representatives.
    int nc = static_cast<int>(classes.size());
    std::vector<int> block_of(nc, -1);
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < nc; ++i) {
        for (std::size_t bi = 0; bi < blocks.size() && block_of[i] < 0; ++bi) {
            int j = blocks[bi][0];
            const Structure& si = structures[classes[i].rep];
            const Structure& sj = structures[classes[j].rep];
            if (find_embedding(si, sj, opts) && find_embedding(sj, si, opts)) {
                blocks[bi].push_back(i);
                block_of[i] = static_cast<int>(bi);
            }
        }
        if (block_of[i] < 0) {
            block_of[i] = static_cast<int>(blocks.size());
            blocks.push_back({i});
        }
    }

    // Deterministic order: blocks by least canonical key of their classes.
    std::vector<int> block_order(blocks.size());
    std::iota(block_order.begin(), block_order.end(), 0);
    auto block_key = [&](int bi) {
        std::string k = classes[blocks[bi][0]].key;
        for (int ci : blocks[bi])
            k = std::min(k, classes[ci].key);
        return k;
    };
    std::stable_sort(block_order.begin(), block_order.end(),
        [&](int x, int y) { return block_key(x) < block_key(y); });

    CensusPartition out;
    for (int bi : block_order) {
        CensusPartition::SiblingBlock sb;
        std::vector<int> cs = blocks[bi];
        std::stable_sort(cs.begin(), cs.end(), [&](int x, int y) { return classes[x].key < classes[y].key; });
        for (int ci : cs)
            sb.iso_blocks.push_back({classes[ci].items});
        out.blocks.push_back(std::move(sb));
    }
    return out;
}

bool same_age_up_to(const Structure& a, const Structure& b, int s, int guard, const SearchOptions& opts)
{
    if (s < 1)
        throw InputError("same_age_up_to: s must be at least 1");
    if (s > guard)
        throw InputError("same_age_up_to: s exceeds the guard (" + std::to_string(guard) + ")");

    auto pieces_embed = [&](const Structure& from, const Structure& into) {
        for (int sz = 1; sz <= s; ++sz) {
            if (sz > from.size())
                break;
            std::vector<int> subset(sz);
            std::iota(subset.begin(), subset.end(), 0);
            std::vector<std::string> seen;
            while (true) {
                Structure piece = induced_substructure(from, subset);
                std::string key = canonical_key(piece);
                if (!std::binary_search(seen.begin(), seen.end(), key)) {
                    seen.insert(std::lower_bound(seen.begin(), seen.end(), key), key);
                    if (!find_embedding(piece, into, opts))
                        return false;
                }
                int i = sz - 1;
                while (i >= 0 && subset[i] == from.size() - (sz - i))
                    --i;
                if (i < 0)
                    break;
                ++subset[i];
                for (int j = i + 1; j < sz; ++j)
                    subset[j] = subset[j - 1] + 1;
            }
        }
        return true;
    };
    return pieces_embed(a, b) && pieces_embed(b, a);
}

} // namespace sib
