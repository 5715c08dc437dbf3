#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace sibtest {

using sib::Fact;
using sib::Signature;
using sib::Structure;
using sib::Tuple;

Structure make_path(int n)
{
    Signature sig({{"S", 2}});
    std::vector<Fact> facts;
    for (int i = 0; i + 1 < n; ++i)
        facts.push_back({0, {i, i + 1}});
    return Structure(std::move(sig), n, std::move(facts));
}

Structure make_edges(int m)
{
    Signature sig({{"E", 2}});
    std::vector<Fact> facts;
    for (int i = 0; i < m; ++i) {
        facts.push_back({0, {2 * i, 2 * i + 1}});
        facts.push_back({0, {2 * i + 1, 2 * i}});
    }
    return Structure(std::move(sig), 2 * m, std::move(facts));
}

Structure make_clique(int n)
{
    Signature sig({{"E", 2}});
    std::vector<Fact> facts;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j)
                facts.push_back({0, {i, j}});
    return Structure(std::move(sig), n, std::move(facts));
}

Structure edges_plus_clique(int edges, int clique)
{
    return sib::disjoint_union(make_edges(edges), make_clique(clique));
}

Structure random_structure(std::mt19937_64& rng, const Signature& sig, int n, double density)
{
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<Fact> facts;
    for (int r = 0; r < sig.relation_count(); ++r) {
        int arity = sig.relation(r).arity;
        Tuple t(arity, 0);
        std::function<void(int)> rec = [&](int pos) {
            if (pos == arity) {
                if (coin(rng) < density)
                    facts.push_back({r, t});
                return;
            }
            for (int e = 0; e < n; ++e) {
                t[pos] = e;
                rec(pos + 1);
            }
        };
        rec(0);
    }
    return Structure(sig, n, std::move(facts));
}

std::vector<Tuple> all_distinct_tuples(int n, int k)
{
    std::vector<Tuple> out;
    Tuple cur;
    std::vector<char> used(n, 0);
    std::function<void()> rec = [&] {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int e = 0; e < n; ++e) {
            if (used[e])
                continue;
            used[e] = 1;
            cur.push_back(e);
            rec();
            cur.pop_back();
            used[e] = 0;
        }
    };
    rec();
    return out;
}

std::vector<std::vector<Tuple>> naive_maximal_cliques(const Structure& m, int k, const std::vector<Tuple>& pool)
{
    (void)k;
    int p = static_cast<int>(pool.size());
    std::vector<std::vector<char>> adj(p, std::vector<char>(p, 0));
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (sib::tuples_disjoint(pool[i], pool[j]) && sib::exchangeable(m, pool[i], pool[j]))
                adj[i][j] = adj[j][i] = 1;

    std::vector<std::vector<int>> found;
    std::function<void(std::vector<int>&, std::vector<int>&, std::vector<int>&)> bk =
        [&](std::vector<int>& r, std::vector<int>& pset, std::vector<int>& x) {
            if (pset.empty() && x.empty()) {
                found.push_back(r);
                return;
            }
            std::vector<int> pcopy = pset;
            for (int v : pcopy) {
                std::vector<int> r2 = r, p2, x2;
                r2.push_back(v);
                for (int u : pset)
                    if (adj[v][u])
                        p2.push_back(u);
                for (int u : x)
                    if (adj[v][u])
                        x2.push_back(u);
                bk(r2, p2, x2);
                pset.erase(std::find(pset.begin(), pset.end(), v));
                x.push_back(v);
            }
        };
    std::vector<int> r, pset(p), x;
    for (int i = 0; i < p; ++i)
        pset[i] = i;
    bk(r, pset, x);

    std::vector<std::vector<Tuple>> out;
    for (std::vector<int>& idxs : found) {
        // Independent maximality check.
        for (int v = 0; v < p; ++v) {
            if (std::find(idxs.begin(), idxs.end(), v) != idxs.end())
                continue;
            bool joins_all = std::all_of(idxs.begin(), idxs.end(), [&](int u) { return adj[u][v] != 0; });
            if (joins_all)
                throw std::logic_error("naive_maximal_cliques produced a non-maximal clique");
        }
        std::vector<Tuple> members;
        for (int i : idxs)
            members.push_back(pool[i]);
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string fixture_path(const std::string& name)
{
    return std::string(SIB_FIXTURE_DIR) + "/" + name;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace sibtest
