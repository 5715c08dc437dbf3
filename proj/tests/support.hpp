#ifndef SIB_TESTS_SUPPORT_HPP
#define SIB_TESTS_SUPPORT_HPP

#include <random>
#include <string>
#include <vector>

#include "sib/cliques.hpp"
#include "sib/structure.hpp"

namespace sibtest {

sib::Structure make_path(int n);                          // S(i, i+1) for i < n-1
sib::Structure make_edges(int m);                         // m disjoint symmetric E-edges
sib::Structure make_clique(int n);                        // complete symmetric E-graph
sib::Structure edges_plus_clique(int edges, int clique);  // disjoint union, shared E/2

// Random structure over the signature: each potential fact present
// independently with probability `density`.
sib::Structure random_structure(std::mt19937_64& rng, const sib::Signature& sig, int n, double density);

std::vector<sib::Tuple> all_distinct_tuples(int n, int k);

// Textbook maximal-clique enumeration over the compatibility graph, no
// pivoting, with an explicit maximality check on every output; the oracle for
// the production enumerator.
std::vector<std::vector<sib::Tuple>> naive_maximal_cliques(const sib::Structure& m, int k,
    const std::vector<sib::Tuple>& pool);

std::string fixture_path(const std::string& name);
std::string read_file(const std::string& path);

} // namespace sibtest

#endif
