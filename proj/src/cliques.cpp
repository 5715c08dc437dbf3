#include "sib/cliques.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

#include "sib/error.hpp"

namespace sib {

namespace {

void check_pair(const Structure& m, const Tuple& a, const Tuple& b)
{
    if (a.size() != b.size())
        throw InputError("exchangeable: tuple length mismatch");
    for (int e : a)
        if (e < 0 || e >= m.size())
            throw InputError("exchangeable: element out of range");
    for (int e : b)
        if (e < 0 || e >= m.size())
            throw InputError("exchangeable: element out of range");
    if (!tuple_distinct(a) || !tuple_distinct(b))
        throw InputError("exchangeable: tuples must have distinct entries");
}

} // namespace

bool exchangeable_via_types(const Structure& m, const Tuple& a, const Tuple& b)
{
    check_pair(m, a, b);
    if (!tuples_disjoint(a, b))
        return false;
    std::vector<int> rest = complement_elements(m.size(), {a, b});
    return type_equal(m, tuple_concat(a, b), tuple_concat(b, a), rest);
}

bool exchangeable_via_swap(const Structure& m, const Tuple& a, const Tuple& b)
{
    check_pair(m, a, b);
    if (!tuples_disjoint(a, b))
        return false;
    std::vector<int> map(m.size());
    std::iota(map.begin(), map.end(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        map[a[i]] = b[i];
        map[b[i]] = a[i];
    }
    return is_automorphism(m, map);
}

bool exchangeable(const Structure& m, const Tuple& a, const Tuple& b)
{
    bool via_types = exchangeable_via_types(m, a, b);
    bool via_swap = exchangeable_via_swap(m, a, b);
    if (via_types != via_swap)
        throw std::logic_error("exchangeable: type route and swap-automorphism route disagree");
    return via_types;
}

KClique KClique::verify(const Structure& host, std::vector<Tuple> members)
{
    if (members.empty())
        throw InputError("a k-clique is a non-empty set of tuples");
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    int k = static_cast<int>(members[0].size());
    if (k < 1)
        throw InputError("k-clique members must have length at least 1");
    for (const Tuple& t : members) {
        if (static_cast<int>(t.size()) != k)
            throw InputError("k-clique members must all have the same length");
        if (!tuple_distinct(t))
            throw InputError("k-clique members must have distinct entries");
    }
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            if (!tuples_disjoint(members[i], members[j]))
                throw InputError("k-clique members must be pairwise disjoint");
            if (!exchangeable(host, members[i], members[j]))
                throw InputError("k-clique members must be pairwise exchangeable");
        }
    KClique out;
    out.k_ = k;
    out.members_ = std::move(members);
    return out;
}

std::vector<int> KClique::carrier() const
{
    std::vector<int> out;
    for (const Tuple& t : members_)
        out.insert(out.end(), t.begin(), t.end());
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Fixed-capacity bitset over pool indices.
struct Bits {
    std::vector<std::uint64_t> w;

    explicit Bits(int n = 0) : w((n + 63) / 64, 0) {}
    void set(int i) { w[i >> 6] |= std::uint64_t(1) << (i & 63); }
    void reset(int i) { w[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
    bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    bool any() const
    {
        for (auto x : w)
            if (x)
                return true;
        return false;
    }
    int count() const
    {
        int c = 0;
        for (auto x : w)
            c += __builtin_popcountll(x);
        return c;
    }
    int count_and(const Bits& o) const
    {
        int c = 0;
        for (std::size_t i = 0; i < w.size(); ++i)
            c += __builtin_popcountll(w[i] & o.w[i]);
        return c;
    }
    Bits and_with(const Bits& o) const
    {
        Bits r = *this;
        for (std::size_t i = 0; i < w.size(); ++i)
            r.w[i] &= o.w[i];
        return r;
    }
    template <typename Fn>
    void for_each(Fn&& fn) const
    {
        for (std::size_t i = 0; i < w.size(); ++i) {
            std::uint64_t x = w[i];
            while (x) {
                int b = __builtin_ctzll(x);
                fn(static_cast<int>(i * 64 + b));
                x &= x - 1;
            }
        }
    }
};

void generate_distinct_tuples(int n, int k, Tuple& cur, std::vector<char>& used, std::vector<Tuple>& out)
{
    if (static_cast<int>(cur.size()) == k) {
        out.push_back(cur);
        return;
    }
    for (int e = 0; e < n; ++e) {
        if (used[e])
            continue;
        used[e] = 1;
        cur.push_back(e);
        generate_distinct_tuples(n, k, cur, used, out);
        cur.pop_back();
        used[e] = 0;
    }
}

struct CliqueSearch {
    const std::vector<Tuple>& pool;
    const std::vector<Bits>& adj;
    std::vector<std::vector<int>> found;
    std::vector<int> current;

    void run(Bits p, Bits x)
    {
        if (!p.any() && !x.any()) {
            found.push_back(current);
            return;
        }
        // Tomita pivot: vertex of P|X maximizing |P & N(u)|, lowest index wins.
        int pivot = -1, best = -1;
        auto consider = [&](int u) {
            int c = p.count_and(adj[u]);
            if (c > best) {
                best = c;
                pivot = u;
            }
        };
        p.for_each(consider);
        x.for_each(consider);

        std::vector<int> candidates;
        p.for_each([&](int v) {
            if (!adj[pivot].test(v))
                candidates.push_back(v);
        });
        for (int v : candidates) {
            current.push_back(v);
            run(p.and_with(adj[v]), x.and_with(adj[v]));
            current.pop_back();
            p.reset(v);
            x.set(v);
        }
    }
};

} // namespace

std::vector<KClique> enumerate_maximal_kcliques(const Structure& m, int k, const CliqueEnumOptions& opts)
{
    if (k < 1)
        throw InputError("enumerate_maximal_kcliques: k must be at least 1");

    std::vector<Tuple> pool;
    if (opts.pool) {
        pool = *opts.pool;
        for (const Tuple& t : pool) {
            if (static_cast<int>(t.size()) != k)
                throw InputError("pool tuple has wrong length");
            if (!tuple_distinct(t))
                throw InputError("pool tuple has repeated entries");
            for (int e : t)
                if (e < 0 || e >= m.size())
                    throw InputError("pool tuple element out of range");
        }
        std::sort(pool.begin(), pool.end());
        pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    } else {
        long long count = 1;
        for (int i = 0; i < k; ++i) {
            count *= (m.size() - i);
            if (count <= 0) {
                count = 0;
                break;
            }
            if (count > opts.default_pool_cap)
                throw InputError("default pool |M^(k)| exceeds the size cap; supply an explicit pool");
        }
        Tuple cur;
        std::vector<char> used(m.size(), 0);
        generate_distinct_tuples(m.size(), k, cur, used, pool);
    }

    int p = static_cast<int>(pool.size());
    if (p == 0)
        return {};
    if (p > 32768)
        throw InputError("pool too large for exact maximal-clique enumeration");

    std::vector<Bits> adj(p, Bits(p));
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (tuples_disjoint(pool[i], pool[j]) && exchangeable(m, pool[i], pool[j])) {
                adj[i].set(j);
                adj[j].set(i);
            }

    CliqueSearch search{pool, adj, {}, {}};
    Bits all(p);
    for (int i = 0; i < p; ++i)
        all.set(i);
    search.run(all, Bits(p));

    std::vector<KClique> out;
    out.reserve(search.found.size());
    for (std::vector<int>& idxs : search.found) {
        std::vector<Tuple> members;
        members.reserve(idxs.size());
        for (int i : idxs)
            members.push_back(pool[i]);
        out.push_back(KClique::verify(m, std::move(members)));
    }
    std::sort(out.begin(), out.end(),
        [](const KClique& a, const KClique& b) { return a.members() < b.members(); });
    return out;
}

std::vector<int> clique_size_census(const Structure& m, int k, const CliqueEnumOptions& opts)
{
    std::vector<int> sizes;
    for (const KClique& c : enumerate_maximal_kcliques(m, k, opts))
        sizes.push_back(c.size());
    std::sort(sizes.begin(), sizes.end());
    return sizes;
}

KClique meld(const Structure& m, const KClique& a, const KClique& b)
{
    if (a.k() != b.k())
        throw InputError("meld: cliques must have the same tuple length");
    std::vector<Tuple> shared;
    std::set_intersection(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
        std::back_inserter(shared));
    if (shared.empty())
        throw InputError("meld: cliques must share a member");

    std::vector<Tuple> only_a, only_b;
    std::set_difference(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
        std::back_inserter(only_a));
    std::set_difference(b.members().begin(), b.members().end(), a.members().begin(), a.members().end(),
        std::back_inserter(only_b));
    for (const Tuple& ta : only_a)
        for (const Tuple& tb : only_b)
            if (!tuples_disjoint(ta, tb))
                throw InputError("meld: carriers of the symmetric difference must be disjoint");

    std::vector<Tuple> all = a.members();
    all.insert(all.end(), only_b.begin(), only_b.end());
    try {
        return KClique::verify(m, std::move(all));
    } catch (const InputError& e) {
        throw std::logic_error(std::string("meld: union failed to verify despite hypotheses: ") + e.what());
    }
}

CliqueExtension extend_clique(const Structure& m, const KClique& a)
{
    int k = a.k();
    int n = m.size();
    int member_count = a.size();

    // element -> (member index, coordinate)
    std::vector<std::pair<int, int>> where(n, {-1, -1});
    for (int j = 0; j < member_count; ++j)
        for (int c = 0; c < k; ++c)
            where[a.members()[j][c]] = {j, c};

    Tuple fresh(k);
    std::iota(fresh.begin(), fresh.end(), n);
    std::vector<Tuple> all_members = a.members();
    all_members.push_back(fresh);
    int fresh_index = member_count;

    auto coord = [&](int member, int c) -> int { return all_members[member][c]; };

    std::vector<Fact> facts = m.all_facts();
    for (const Fact& f : m.all_facts()) {
        // Pattern of the fact over the clique: per entry either a concrete
        // element or (local member slot, coordinate).
        std::vector<int> touched;                    // member indices, first-occurrence order
        std::vector<std::pair<int, int>> entry(f.args.size(), {-1, -1}); // (local slot, coord), or (-1, element)
        for (std::size_t i = 0; i < f.args.size(); ++i) {
            auto [mj, c] = where[f.args[i]];
            if (mj < 0) {
                entry[i] = {-1, f.args[i]};
            } else {
                int local = -1;
                for (std::size_t s = 0; s < touched.size(); ++s)
                    if (touched[s] == mj)
                        local = static_cast<int>(s);
                if (local < 0) {
                    local = static_cast<int>(touched.size());
                    touched.push_back(mj);
                }
                entry[i] = {local, c};
            }
        }
        if (touched.empty())
            continue;

        // Re-index the touched members injectively over all members plus the
        // fresh one; only assignments hitting the fresh member yield new facts.
        int s = static_cast<int>(touched.size());
        std::vector<int> assign(s, -1);
        std::vector<char> used(member_count + 1, 0);
        auto emit = [&]() {
            Tuple args(f.args.size());
            for (std::size_t i = 0; i < f.args.size(); ++i) {
                auto [slot, c] = entry[i];
                args[i] = slot < 0 ? c : coord(assign[slot], c);
            }
            facts.push_back({f.rel, std::move(args)});
        };
        auto rec = [&](auto&& self, int depth, bool has_fresh) -> void {
            if (depth == s) {
                if (has_fresh)
                    emit();
                return;
            }
            for (int target = 0; target <= member_count; ++target) {
                if (used[target])
                    continue;
                used[target] = 1;
                assign[depth] = target;
                self(self, depth + 1, has_fresh || target == fresh_index);
                used[target] = 0;
            }
        };
        rec(rec, 0, false);
    }

    Structure extended(m.signature_ptr(), n + k, std::move(facts));
    try {
        KClique clique = KClique::verify(extended, std::move(all_members));
        return {std::move(extended), std::move(clique)};
    } catch (const InputError& e) {
        throw std::logic_error(std::string("extend_clique: extension failed to verify: ") + e.what());
    }
}

QfDiagram average_type(const Structure& m, const KClique& a, const std::vector<int>& params)
{
    if (a.size() < 2)
        throw InputError("average_type: clique must have at least two members");
    std::vector<int> carrier = a.carrier();
    for (int p : params)
        if (std::binary_search(carrier.begin(), carrier.end(), p))
            throw InputError("average_type: parameters overlap the clique carrier");

    QfDiagram first = qf_diagram(m, a.members()[0], params);
    for (int i = 1; i < a.size(); ++i)
        if (!(qf_diagram(m, a.members()[i], params) == first))
            throw std::logic_error("average_type: members of a verified clique disagree over the parameters");
    return first;
}

} // namespace sib
