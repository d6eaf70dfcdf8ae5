#pragma once

#include "sandpile/graph.hpp"

#include <string>
#include <vector>

namespace sandpile {

inline constexpr int kCanonicalMaxOrder = 10;
inline constexpr int kEnumerationMaxOrder = 8;

struct CanonicalLabeling
{
  /// First byte is the order, then the upper-triangle adjacency bits packed
  /// big-endian in graph6 column order.
  std::string form;
  /// perm[v] = position of vertex v in the minimizing order.
  std::vector<int> perm;
};

/// Lexicographically least adjacency bit string over all n! relabelings,
/// found by branch and bound with twin pruning. Unit weights, n <= 10.
CanonicalLabeling canonical_labeling(const Graph& g);
std::string canonical_form(const Graph& g);

/// One representative per isomorphism class of connected graphs on n
/// vertices, each returned in its canonical labeling, sorted by canonical
/// form. n <= kEnumerationMaxOrder.
std::vector<Graph> enumerate_connected(int n, bool biconnected_only = false);

/// All graphs (connected or not) on n vertices up to isomorphism.
std::vector<Graph> enumerate_all(int n);

} // namespace sandpile
