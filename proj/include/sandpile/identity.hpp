#pragma once

#include "sandpile/engine.hpp"
#include "sandpile/exact.hpp"
#include "sandpile/graph.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace sandpile {

/// Two independent routes disagreed. Always an implementation bug.
class CrossCheckFault : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

/// m_G over all vertices: deg(v) - 1 everywhere.
FullConfig max_stable_full(const Graph& g);

// ---------------------------------------------------------------------------
// Maximal identity property
// ---------------------------------------------------------------------------

/// Stab(m + m) == m, computed independently of the exact route.
bool has_mip_by_stabilization(const Sandpile& sp);
/// m equivalent to 0, by exact solve.
bool has_mip_by_equivalence(const Sandpile& sp);
/// Both routes, required to agree (CrossCheckFault otherwise).
bool has_mip(const Graph& g, Vertex sink);

struct CmipReport
{
  std::vector<bool> per_sink;
  /// Per sink, the solution y of the reduced Laplacian system y = m.
  std::vector<ExactVector> firing_vectors;
  bool overall = false;
};

/// Per-sink MIP with firing vectors, cross-checked against compatibility of m
/// and the stabilization routes. The vectors come from one inverse at sink 0;
/// graphs of up to 48 vertices also solve and stabilize at every sink.
CmipReport has_cmip(const Graph& g);

/**
 * CMIP decided with stabilizations only, for graphs too large for per-sink
 * exact work. With s = 2 size - n, CMIP holds iff m is the identity at sink 0
 * and Stab(m + s e_i) == m for every non-sink i. Stops at the first failure.
 */
bool cmip_by_stabilization(const Graph& g);

// ---------------------------------------------------------------------------
// Compatibility
// ---------------------------------------------------------------------------

/**
 * c is compatible iff c^(i) lies in the integer image of the reduced
 * Laplacian for every sink i. Decided at sink 0 alone: with B the inverse
 * reduced Laplacian there, c is compatible iff B c^(0) is integral and
 * lcd(B) divides sum(c).
 */
bool is_compatible(const Graph& g, const FullConfig& c);
/// Definitional route: one exact solve per sink.
bool is_compatible_by_sinks(const Graph& g, const FullConfig& c);

struct CompatibilityIdeal
{
  Integer x; // generator of the ideal (minimal compatibility number)
  Integer k; // group order, det of a reduced Laplacian
};

/// x as the lcm over all sinks of the inverse reduced Laplacian's entry lcd.
/// With `verify`, also runs the least-d search and throws CrossCheckFault on
/// disagreement.
CompatibilityIdeal minimal_compatibility_number(const Graph& g, bool verify = true);
/// x as lcd of one inverse reduced Laplacian (sink 0). Sink independent.
Integer minimal_compatibility_number_single_sink(const Graph& g);
/// Least d >= 1 with d e_i compatible for every i, by direct search.
Integer minimal_compatibility_number_by_search(const Graph& g);

/// For compatible c with s = sum(c): whether s e_i is compatible for all i.
/// Throws std::invalid_argument if c is not compatible.
bool lemma_shift_compatibility(const Graph& g, const FullConfig& c);

struct NecessaryConditions
{
  Integer k;
  Integer x;
  std::int64_t s = 0; // 2 size - n
  /// gcd(k, s) > 1; vacuously true for trees.
  bool gcd_ok = false;
  /// x <= n^2 - 2n for n > 2, x == 1 for n == 2.
  bool bound_ok = false;
  /// (x == 1) == is_tree.
  bool tree_consistent = false;
};

NecessaryConditions necessary_conditions(const Graph& g);

// ---------------------------------------------------------------------------
// Complete identity property
// ---------------------------------------------------------------------------

struct CipReport
{
  /// Recurrent identity at each sink, as a ChipConfig of that sandpile.
  std::vector<ChipConfig> identities;
  /// consistency[s][v] = identity at sink s read at vertex v; -1 on the
  /// diagonal.
  std::vector<std::vector<std::int64_t>> consistency;
  bool holds = false;
  std::optional<FullConfig> witness;
};

CipReport has_cip(const Graph& g);

/// Whether attaching one pendant edge at every vertex, one at a time, always
/// gives a graph with the complete identity property.
bool all_leaf_attachments_have_cip(const Graph& g);

// ---------------------------------------------------------------------------
// Add-tree construction
// ---------------------------------------------------------------------------

struct TreeDecoration
{
  Graph graph;
  std::vector<int> tree_sizes;
  Integer k;
};

/// Attach a path of size t_v - (deg v - 1) at each v, t_v the least multiple
/// of k = det(reduced Laplacian) with t_v >= deg v - 1.
TreeDecoration cmip_tree_decoration(const Graph& g);

// ---------------------------------------------------------------------------
// Graph products
// ---------------------------------------------------------------------------

/// P_2 strong P_k has CMIP iff k == 2 or k == 1 mod 3.
bool strong_p2_pk_prediction(int k);
/// K_i Cartesian P_j has CMIP only for (4, 2).
bool cartesian_ki_pj_prediction(int i, int j);

struct QuotientSystem
{
  IntegerMatrix laplacian;
  IntegerVector chips;
  ExactVector firing_vector;
};

/// K_i Cartesian P_j with sink (0,0), collapsing each layer's positive
/// abscissas to one class. Class order from the far layer down: for each
/// ordinate y = j-1 .. 0, the vertex (0,y) then {(x,y) : x > 0}, the sink
/// (0,0) being dropped. Solves the collapsed system exactly.
QuotientSystem cartesian_quotient(int i, int j);

/// Closed forms of the collapsed firing vector for j = 2 and j = 3. Each is
/// checked against cartesian_quotient(i, j); CrossCheckFault on mismatch.
ExactVector quotient_firing_vector_j2(int i);
ExactVector quotient_firing_vector_j3(int i);

/// The collapsed reduced Laplacians written out in closed form.
IntegerMatrix quotient_laplacian_j2(int i);
IntegerMatrix quotient_laplacian_j3(int i);

} // namespace sandpile
