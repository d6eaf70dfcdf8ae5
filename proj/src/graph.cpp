#include "sandpile/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace sandpile {

Graph::Graph(int order, std::vector<Edge> edges)
  : order_(order)
  , edges_(std::move(edges))
{
  if (order < 1)
    throw GraphError("graph needs at least one vertex");
  for (auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= order || e.v >= order)
      throw GraphError("edge endpoint out of range");
    if (e.u == e.v)
      throw GraphError("loops are not allowed");
    if (e.weight < 1)
      throw GraphError("edge weights must be positive");
    if (e.u > e.v)
      std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  for (std::size_t i = 1; i < edges_.size(); ++i)
    if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
      throw GraphError("repeated edge " + std::to_string(edges_[i].u) + "-" + std::to_string(edges_[i].v));

  std::vector<int> count(order, 0);
  degrees_.assign(order, 0);
  for (const auto& e : edges_) {
    ++count[e.u];
    ++count[e.v];
    degrees_[e.u] += e.weight;
    degrees_[e.v] += e.weight;
  }
  offsets_.assign(order + 1, 0);
  for (int v = 0; v < order; ++v)
    offsets_[v + 1] = offsets_[v] + count[v];
  arcs_.resize(offsets_[order]);
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    arcs_[fill[e.u]++] = {e.v, e.weight};
    arcs_[fill[e.v]++] = {e.u, e.weight};
  }
  for (int v = 0; v < order; ++v)
    std::sort(arcs_.begin() + offsets_[v], arcs_.begin() + offsets_[v + 1],
              [](const Arc& a, const Arc& b) { return a.to < b.to; });
}

std::int64_t Graph::weight(Vertex u, Vertex v) const
{
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v, [](const Arc& a, Vertex x) { return a.to < x; });
  return (it != nb.end() && it->to == v) ? it->weight : 0;
}

bool Graph::unit_weights() const
{
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.weight == 1; });
}

// ---------------------------------------------------------------------------

Graph path_graph(int n)
{
  if (n < 1)
    throw GraphError("path needs n >= 1");
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i)
    edges.push_back({i, i + 1});
  return Graph(n, std::move(edges));
}

Graph cycle_graph(int n)
{
  if (n < 3)
    throw GraphError("cycle needs n >= 3 to be simple");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    edges.push_back({i, (i + 1) % n});
  return Graph(n, std::move(edges));
}

Graph complete_graph(int n)
{
  if (n < 1)
    throw GraphError("complete graph needs n >= 1");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      edges.push_back({i, j});
  return Graph(n, std::move(edges));
}

Graph complete_bipartite(int m, int n)
{
  if (m < 1 || n < 1)
    throw GraphError("complete bipartite graph needs m, n >= 1");
  std::vector<Edge> edges;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      edges.push_back({i, m + j});
  return Graph(m + n, std::move(edges));
}

Graph star_graph(int leaves)
{
  if (leaves < 1)
    throw GraphError("star needs at least one leaf");
  return complete_bipartite(1, leaves);
}

Graph petersen_graph()
{
  std::vector<Edge> edges;
  for (int i = 0; i < 5; ++i) {
    edges.push_back({i, (i + 1) % 5});
    edges.push_back({i, i + 5});
    edges.push_back({5 + i, 5 + (i + 2) % 5});
  }
  return Graph(10, std::move(edges));
}

Graph diamond_graph()
{
  return Graph(4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}});
}

Graph diamond_ring(int n)
{
  if (n < 1)
    throw GraphError("diamond ring needs n >= 1");
  std::vector<Edge> edges;
  for (int k = 0; k < n; ++k) {
    const int b = 4 * k;
    edges.push_back({b, b + 1});
    edges.push_back({b, b + 2});
    edges.push_back({b + 1, b + 2});
    edges.push_back({b + 1, b + 3});
    edges.push_back({b + 2, b + 3});
    edges.push_back({b + 3, (b + 4) % (4 * n)});
  }
  return Graph(4 * n, std::move(edges));
}

Graph grid_graph(int rows, int cols, bool boundary_sink)
{
  if (rows < 1 || cols < 1)
    throw GraphError("grid needs positive dimensions");
  std::vector<Edge> edges;
  const int cells = rows * cols;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const int v = i * cols + j;
      if (j + 1 < cols)
        edges.push_back({v, v + 1});
      if (i + 1 < rows)
        edges.push_back({v, v + cols});
      if (boundary_sink) {
        const int missing = (i == 0) + (i == rows - 1) + (j == 0) + (j == cols - 1);
        if (missing > 0)
          edges.push_back({v, cells, missing});
      }
    }
  }
  return Graph(cells + (boundary_sink ? 1 : 0), std::move(edges));
}

Graph build_family(const FamilySpec& spec)
{
  using Kind = FamilySpec::Kind;
  auto need = [&](std::size_t count) {
    if (spec.params.size() != count)
      throw GraphError("family expects " + std::to_string(count) + " parameter(s)");
    for (int p : spec.params)
      if (p < 1)
        throw GraphError("family parameters must be >= 1");
  };
  switch (spec.kind) {
  case Kind::path:
    need(1);
    return path_graph(spec.params[0]);
  case Kind::cycle:
    need(1);
    return cycle_graph(spec.params[0]);
  case Kind::complete:
    need(1);
    return complete_graph(spec.params[0]);
  case Kind::complete_bipartite:
    need(2);
    return complete_bipartite(spec.params[0], spec.params[1]);
  case Kind::grid:
    need(2);
    return grid_graph(spec.params[0], spec.params[1], spec.boundary_sink);
  case Kind::petersen:
    need(0);
    return petersen_graph();
  case Kind::diamond:
    need(0);
    return diamond_graph();
  case Kind::diamond_ring:
    need(1);
    return diamond_ring(spec.params[0]);
  case Kind::star:
    need(1);
    return star_graph(spec.params[0]);
  }
  throw GraphError("unknown family");
}

// ---------------------------------------------------------------------------

Graph product(ProductKind kind, const Graph& g, const Graph& h)
{
  if (!g.unit_weights() || !h.unit_weights())
    throw GraphError("graph products are defined for unit-weight graphs only");
  const int n = g.order();
  const int m = h.order();
  auto id = [m](int a, int b) { return a * m + b; };
  std::vector<Edge> edges;
  const bool cart = kind != ProductKind::tensor;
  const bool tens = kind != ProductKind::cartesian;
  if (cart) {
    for (int a = 0; a < n; ++a)
      for (const auto& e : h.edges())
        edges.push_back({id(a, e.u), id(a, e.v)});
    for (const auto& e : g.edges())
      for (int b = 0; b < m; ++b)
        edges.push_back({id(e.u, b), id(e.v, b)});
  }
  if (tens) {
    for (const auto& e : g.edges()) {
      for (const auto& f : h.edges()) {
        edges.push_back({id(e.u, f.u), id(e.v, f.v)});
        edges.push_back({id(e.u, f.v), id(e.v, f.u)});
      }
    }
  }
  return Graph(n * m, std::move(edges));
}

// ---------------------------------------------------------------------------

TreeShape::TreeShape(std::vector<int> parent)
  : parent_(std::move(parent))
{
  const int n = static_cast<int>(parent_.size());
  if (n == 0)
    throw GraphError("tree needs at least one vertex");
  int roots = 0;
  std::vector<std::vector<int>> children(n);
  for (int i = 0; i < n; ++i) {
    if (parent_[i] == -1) {
      ++roots;
      root_ = i;
    } else if (parent_[i] < 0 || parent_[i] >= n || parent_[i] == i) {
      throw GraphError("tree parent out of range");
    } else {
      children[parent_[i]].push_back(i);
    }
  }
  if (roots != 1)
    throw GraphError("tree must have exactly one root");
  std::vector<int> stack{root_};
  int seen = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++seen;
    for (int c : children[v])
      stack.push_back(c);
  }
  if (seen != n)
    throw GraphError("parent array contains a cycle");
}

TreeShape TreeShape::path(int edges)
{
  if (edges < 0)
    throw GraphError("tree size must be >= 0");
  std::vector<int> parent(edges + 1);
  for (int i = 0; i <= edges; ++i)
    parent[i] = i - 1;
  return TreeShape(std::move(parent));
}

TreeShape TreeShape::star(int edges)
{
  if (edges < 0)
    throw GraphError("tree size must be >= 0");
  std::vector<int> parent(edges + 1, 0);
  parent[0] = -1;
  return TreeShape(std::move(parent));
}

Graph attach_tree(const Graph& g, Vertex v, const TreeShape& tree)
{
  if (v < 0 || v >= g.order())
    throw GraphError("attachment vertex out of range");
  const auto parent = tree.parent();
  const int t = static_cast<int>(parent.size());
  std::vector<int> map(t);
  int next = g.order();
  for (int i = 0; i < t; ++i)
    map[i] = (i == tree.root()) ? v : next++;
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  for (int i = 0; i < t; ++i)
    if (parent[i] >= 0)
      edges.push_back({map[parent[i]], map[i]});
  return Graph(next, std::move(edges));
}

Graph relabel(const Graph& g, std::span<const int> perm)
{
  if (static_cast<int>(perm.size()) != g.order())
    throw GraphError("permutation size mismatch");
  std::vector<Edge> edges;
  edges.reserve(g.size());
  for (const auto& e : g.edges())
    edges.push_back({perm[e.u], perm[e.v], e.weight});
  return Graph(g.order(), std::move(edges));
}

// ---------------------------------------------------------------------------

namespace {

int count_reachable(const Graph& g, Vertex start, Vertex removed)
{
  std::vector<char> seen(g.order(), 0);
  if (removed >= 0)
    seen[removed] = 1;
  std::vector<Vertex> stack{start};
  seen[start] = 1;
  int count = 0;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    ++count;
    for (const auto& a : g.neighbors(v)) {
      if (!seen[a.to]) {
        seen[a.to] = 1;
        stack.push_back(a.to);
      }
    }
  }
  return count;
}

} // namespace

bool is_connected(const Graph& g)
{
  return g.order() > 0 && count_reachable(g, 0, -1) == g.order();
}

bool is_tree(const Graph& g)
{
  return is_connected(g) && g.size() == g.order() - 1;
}

bool is_bipartite(const Graph& g)
{
  std::vector<int> side(g.order(), -1);
  for (Vertex s = 0; s < g.order(); ++s) {
    if (side[s] >= 0)
      continue;
    side[s] = 0;
    std::queue<Vertex> queue;
    queue.push(s);
    while (!queue.empty()) {
      Vertex v = queue.front();
      queue.pop();
      for (const auto& a : g.neighbors(v)) {
        if (side[a.to] < 0) {
          side[a.to] = 1 - side[v];
          queue.push(a.to);
        } else if (side[a.to] == side[v]) {
          return false;
        }
      }
    }
  }
  return true;
}

bool is_biconnected(const Graph& g)
{
  const int n = g.order();
  if (n < 3 || !is_connected(g))
    return false;
  for (Vertex removed = 0; removed < n; ++removed) {
    const Vertex start = removed == 0 ? 1 : 0;
    if (count_reachable(g, start, removed) != n - 1)
      return false;
  }
  return true;
}

} // namespace sandpile
