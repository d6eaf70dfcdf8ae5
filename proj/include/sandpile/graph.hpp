#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sandpile {

using Vertex = int;

/// Undirected edge with a positive integer weight (edge multiplicity).
struct Edge
{
  Vertex u = 0;
  Vertex v = 0;
  std::int64_t weight = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Half of an edge as seen from one endpoint.
struct Arc
{
  Vertex to = 0;
  std::int64_t weight = 1;
};

class GraphError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/**
 * Weighted simple undirected graph on vertices 0..n-1.
 *
 * Immutable after construction. Edges are stored normalized (u < v) and
 * sorted; adjacency is kept in CSR form so neighbor scans are contiguous.
 * Loops and repeated pairs are rejected: multiplicity belongs in the weight.
 */
class Graph
{
public:
  Graph() = default;
  Graph(int order, std::vector<Edge> edges);

  int order() const { return order_; }
  int size() const { return static_cast<int>(edges_.size()); }

  std::span<const Edge> edges() const { return edges_; }
  std::span<const Arc> neighbors(Vertex v) const
  {
    return {arcs_.data() + offsets_[v], arcs_.data() + offsets_[v + 1]};
  }

  /// Weighted degree.
  std::int64_t degree(Vertex v) const { return degrees_[v]; }
  /// Weight of the edge {u, v}, or 0 when absent.
  std::int64_t weight(Vertex u, Vertex v) const;
  bool has_edge(Vertex u, Vertex v) const { return weight(u, v) != 0; }
  bool unit_weights() const;

  friend bool operator==(const Graph& a, const Graph& b)
  {
    return a.order_ == b.order_ && a.edges_ == b.edges_;
  }

private:
  int order_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> offsets_{0};
  std::vector<Arc> arcs_;
  std::vector<std::int64_t> degrees_;
};

// ---------------------------------------------------------------------------
// Families. Numbering conventions:
//   path/cycle      sequential along the path / around the cycle
//   complete_bipartite(m,n)  part-major: 0..m-1 then m..m+n-1
//   grid(r,c)       cell (i,j) -> i*c + j; the optional super-sink is r*c
//   diamond         the K4-minus-an-edge on 0..3, tips 0 and 3
//   diamond_ring(n) diamond k on 4k..4k+3, tip 4k+3 joined to tip 4(k+1)
// ---------------------------------------------------------------------------

Graph path_graph(int n);
Graph cycle_graph(int n);
Graph complete_graph(int n);
Graph complete_bipartite(int m, int n);
Graph star_graph(int leaves);
Graph petersen_graph();
Graph diamond_graph();
Graph diamond_ring(int n);

/// rows x cols grid of cells. With `boundary_sink` an extra vertex is joined to
/// every boundary cell with weight 4 - (grid degree), so every cell has degree 4.
Graph grid_graph(int rows, int cols, bool boundary_sink = false);

struct FamilySpec
{
  enum class Kind
  {
    path,
    cycle,
    complete,
    complete_bipartite,
    grid,
    petersen,
    diamond,
    diamond_ring,
    star,
  };

  Kind kind = Kind::path;
  std::vector<int> params;
  bool boundary_sink = false;
};

Graph build_family(const FamilySpec& spec);

// ---------------------------------------------------------------------------
// Products (unit-weight graphs only). Vertex (a, b) is numbered a*|H| + b.
// ---------------------------------------------------------------------------

enum class ProductKind
{
  cartesian,
  tensor,
  strong,
};

Graph product(ProductKind kind, const Graph& g, const Graph& h);
inline Graph cartesian_product(const Graph& g, const Graph& h) { return product(ProductKind::cartesian, g, h); }
inline Graph tensor_product(const Graph& g, const Graph& h) { return product(ProductKind::tensor, g, h); }
inline Graph strong_product(const Graph& g, const Graph& h) { return product(ProductKind::strong, g, h); }

// ---------------------------------------------------------------------------
// Trees attached at a vertex.
// ---------------------------------------------------------------------------

/// Rooted tree as a parent array; parent[root] == -1. size() counts edges.
class TreeShape
{
public:
  explicit TreeShape(std::vector<int> parent);

  static TreeShape single_vertex() { return TreeShape({-1}); }
  /// Path with `edges` edges, rooted at one end.
  static TreeShape path(int edges);
  static TreeShape star(int edges);

  int size() const { return static_cast<int>(parent_.size()) - 1; }
  int root() const { return root_; }
  std::span<const int> parent() const { return parent_; }

private:
  std::vector<int> parent_;
  int root_ = 0;
};

/// Glue the root of `tree` onto `v`. The non-root tree nodes become vertices
/// g.order(), g.order()+1, ... in increasing tree-index order.
Graph attach_tree(const Graph& g, Vertex v, const TreeShape& tree);

/// attach_tree with a single pendant edge.
inline Graph attach_leaf(const Graph& g, Vertex v) { return attach_tree(g, v, TreeShape::path(1)); }

/// Apply a vertex relabeling: vertex v of g becomes perm[v].
Graph relabel(const Graph& g, std::span<const int> perm);

// Predicates.
bool is_connected(const Graph& g);
bool is_tree(const Graph& g);
bool is_bipartite(const Graph& g);
/// Connected, at least 3 vertices, and connected after deleting any one vertex.
bool is_biconnected(const Graph& g);

} // namespace sandpile
