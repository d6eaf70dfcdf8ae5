#include "sandpile/canonical.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <mutex>

namespace sandpile {

namespace {

using Mask = std::uint32_t;

struct Searcher
{
  int n = 0;
  std::array<Mask, kCanonicalMaxOrder> adj{};
  std::array<int, kCanonicalMaxOrder> twin_class{};

  std::array<int, kCanonicalMaxOrder> cur{};        // cur[pos] = vertex
  std::array<Mask, kCanonicalMaxOrder> cur_col{};   // column bits for each position
  std::array<int, kCanonicalMaxOrder> best{};
  std::array<Mask, kCanonicalMaxOrder> best_col{};
  std::array<bool, kCanonicalMaxOrder> below{};     // prefix through pos is < best
  bool have_best = false;
  Mask placed = 0;

  void init_twins()
  {
    for (int v = 0; v < n; ++v) {
      twin_class[v] = v;
      for (int u = 0; u < v; ++u) {
        const Mask nu = adj[u] & ~(Mask{1} << v);
        const Mask nv = adj[v] & ~(Mask{1} << u);
        if (nu == nv) {
          twin_class[v] = twin_class[u];
          break;
        }
      }
    }
  }

  void search(int depth)
  {
    if (depth == n) {
      const bool improves = !have_best || (n > 0 && below[n - 1]);
      if (improves) {
        best = cur;
        best_col = cur_col;
        have_best = true;
      }
      // The current path now coincides with the best string.
      below.fill(false);
      return;
    }
    for (int v = 0; v < n; ++v) {
      const Mask bit = Mask{1} << v;
      if (placed & bit)
        continue;
      bool skip = false;
      for (int u = 0; u < v; ++u) {
        if (!(placed & (Mask{1} << u)) && twin_class[u] == twin_class[v]) {
          skip = true;
          break;
        }
      }
      if (skip)
        continue;

      Mask col = 0;
      for (int i = 0; i < depth; ++i)
        col = (col << 1) | ((adj[cur[i]] >> v) & 1u);

      bool parent_below = depth == 0 ? !have_best : below[depth - 1];
      if (!have_best)
        parent_below = true;
      bool now_below = parent_below;
      if (!parent_below) {
        if (col > best_col[depth])
          continue;
        now_below = col < best_col[depth];
      }
      cur[depth] = v;
      cur_col[depth] = col;
      below[depth] = now_below;
      placed |= bit;
      search(depth + 1);
      placed &= ~bit;
    }
  }
};

CanonicalLabeling canonical_from_masks(int n, const std::array<Mask, kCanonicalMaxOrder>& adj)
{
  Searcher s;
  s.n = n;
  s.adj = adj;
  s.init_twins();
  s.search(0);

  CanonicalLabeling out;
  out.perm.assign(n, 0);
  for (int pos = 0; pos < n; ++pos)
    out.perm[s.best[pos]] = pos;

  out.form.push_back(static_cast<char>(n));
  unsigned char acc = 0;
  int bits = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      const unsigned bit = (s.best_col[j] >> (j - 1 - i)) & 1u;
      acc = static_cast<unsigned char>((acc << 1) | bit);
      if (++bits == 8) {
        out.form.push_back(static_cast<char>(acc));
        acc = 0;
        bits = 0;
      }
    }
  }
  if (bits > 0)
    out.form.push_back(static_cast<char>(acc << (8 - bits)));
  return out;
}

std::array<Mask, kCanonicalMaxOrder> masks_of(const Graph& g)
{
  std::array<Mask, kCanonicalMaxOrder> adj{};
  for (const auto& e : g.edges()) {
    adj[e.u] |= Mask{1} << e.v;
    adj[e.v] |= Mask{1} << e.u;
  }
  return adj;
}

Graph graph_from_masks(int n, const std::array<Mask, kCanonicalMaxOrder>& adj)
{
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if ((adj[u] >> v) & 1u)
        edges.push_back({u, v});
  return Graph(n, std::move(edges));
}

struct Level
{
  // canonical form -> canonical adjacency masks
  std::map<std::string, std::array<Mask, kCanonicalMaxOrder>> graphs;
};

std::mutex g_levels_mutex;
std::vector<Level> g_levels;

const Level& level(int n)
{
  std::lock_guard<std::mutex> lock(g_levels_mutex);
  if (g_levels.empty()) {
    Level one;
    one.graphs.emplace(std::string(1, static_cast<char>(1)), std::array<Mask, kCanonicalMaxOrder>{});
    g_levels.push_back(std::move(one));
  }
  while (static_cast<int>(g_levels.size()) < n) {
    const int m = static_cast<int>(g_levels.size()); // building order m + 1
    Level next;
    for (const auto& [form, adj] : g_levels.back().graphs) {
      for (Mask subset = 0; subset < (Mask{1} << m); ++subset) {
        auto grown = adj;
        grown[m] = subset;
        for (int u = 0; u < m; ++u)
          if ((subset >> u) & 1u)
            grown[u] |= Mask{1} << m;
        auto canon = canonical_from_masks(m + 1, grown);
        if (next.graphs.count(canon.form))
          continue;
        std::array<Mask, kCanonicalMaxOrder> relabeled{};
        for (int u = 0; u <= m; ++u)
          for (int v = 0; v <= m; ++v)
            if ((grown[u] >> v) & 1u)
              relabeled[canon.perm[u]] |= Mask{1} << canon.perm[v];
        next.graphs.emplace(std::move(canon.form), relabeled);
      }
    }
    g_levels.push_back(std::move(next));
  }
  return g_levels[n - 1];
}

} // namespace

CanonicalLabeling canonical_labeling(const Graph& g)
{
  if (g.order() > kCanonicalMaxOrder)
    throw GraphError("canonical form supports at most " + std::to_string(kCanonicalMaxOrder) + " vertices");
  if (!g.unit_weights())
    throw GraphError("canonical form requires unit weights");
  return canonical_from_masks(g.order(), masks_of(g));
}

std::string canonical_form(const Graph& g)
{
  return canonical_labeling(g).form;
}

std::vector<Graph> enumerate_all(int n)
{
  if (n < 1 || n > kEnumerationMaxOrder)
    throw GraphError("enumeration supports 1 <= n <= " + std::to_string(kEnumerationMaxOrder));
  std::vector<Graph> out;
  for (const auto& [form, adj] : level(n).graphs)
    out.push_back(graph_from_masks(n, adj));
  return out;
}

std::vector<Graph> enumerate_connected(int n, bool biconnected_only)
{
  auto all = enumerate_all(n);
  std::vector<Graph> out;
  for (auto& g : all) {
    if (biconnected_only ? is_biconnected(g) : is_connected(g))
      out.push_back(std::move(g));
  }
  return out;
}

} // namespace sandpile
