#include "sandpile/identity.hpp"

#include <numeric>

namespace sandpile {

FullConfig max_stable_full(const Graph& g)
{
  FullConfig m(g.order());
  for (Vertex v = 0; v < g.order(); ++v)
    m[v] = g.degree(v) - 1;
  return m;
}

namespace {

IntegerVector to_integer_vector(const ChipConfig& c)
{
  IntegerVector out(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i)
    out[i] = c[i];
  return out;
}

/// Restriction of a full integer vector to the non-sink vertices.
IntegerVector restrict_full(const FullConfig& c, Vertex sink)
{
  IntegerVector out(c.size() - 1);
  for (Eigen::Index v = 0, r = 0; v < c.size(); ++v)
    if (v != sink)
      out[r++] = c[v];
  return out;
}

std::int64_t total(const FullConfig& c)
{
  return c.sum();
}

void require_connected(const Graph& g)
{
  if (g.order() < 2)
    throw GraphError("at least two vertices required");
  if (!is_connected(g))
    throw GraphError("graph must be connected");
}

} // namespace

bool has_mip_by_stabilization(const Sandpile& sp)
{
  const ChipConfig m = sp.max_stable();
  return sp.stab(m + m) == m;
}

bool has_mip_by_equivalence(const Sandpile& sp)
{
  return sp.equivalent(sp.max_stable(), sp.zero());
}

bool has_mip(const Graph& g, Vertex sink)
{
  const Sandpile sp(g, sink);
  const bool a = has_mip_by_stabilization(sp);
  const bool b = has_mip_by_equivalence(sp);
  if (a != b)
    throw CrossCheckFault("MIP routes disagree at sink " + std::to_string(sink));
  return a;
}

namespace {

constexpr int kDirectSolveMaxOrder = 48;

/// Firing vectors y_s with reduced_laplacian(g, s) y_s = c^(s) for every sink
/// s, all read off one inverse at sink 0. With B that inverse and b_s its
/// column for s padded by 0 at vertex 0, the padded vector y_0 - S b_s + a 1
/// (S the total of c, a fixing entry s to 0) solves the system at sink s.
std::vector<ExactVector> firing_vectors_all_sinks(const Graph& g, const FullConfig& c)
{
  const int n = g.order();
  const ExactMatrix b = inverse_exact(reduced_laplacian(g, 0));
  const ExactVector y0 = b * restrict_full(c, 0).cast<Rational>();
  const Rational sum(total(c));
  std::vector<ExactVector> out;
  out.reserve(n);
  ExactVector padded(n);
  for (Vertex s = 0; s < n; ++s) {
    padded[0] = 0;
    for (int v = 1; v < n; ++v)
      padded[v] = y0[v - 1] - (s == 0 ? Rational(0) : sum * b(v - 1, s - 1));
    const Rational shift = padded[s];
    ExactVector y(n - 1);
    for (int v = 0, r = 0; v < n; ++v)
      if (v != s)
        y[r++] = padded[v] - shift;
    out.push_back(std::move(y));
  }
  return out;
}

} // namespace

CmipReport has_cmip(const Graph& g)
{
  require_connected(g);
  CmipReport report;
  report.overall = true;
  report.firing_vectors = firing_vectors_all_sinks(g, max_stable_full(g));
  for (Vertex s = 0; s < g.order(); ++s) {
    const Sandpile sp(g, s);
    const ExactVector& y = report.firing_vectors[s];
    const bool exact = is_integral(y);
    if (g.order() <= kDirectSolveMaxOrder) {
      if (y != sp.firing_vector_between(sp.max_stable(), sp.zero()))
        throw CrossCheckFault("firing vectors disagree at sink " + std::to_string(s));
      if (exact != has_mip_by_stabilization(sp))
        throw CrossCheckFault("MIP routes disagree at sink " + std::to_string(s));
    }
    report.per_sink.push_back(exact);
    report.overall = report.overall && exact;
  }
  if (report.overall != is_compatible(g, max_stable_full(g)))
    throw CrossCheckFault("CMIP verdict disagrees with compatibility of m");
  if (report.overall != cmip_by_stabilization(g))
    throw CrossCheckFault("CMIP verdict disagrees with the stabilization route");
  return report;
}

bool cmip_by_stabilization(const Graph& g)
{
  require_connected(g);
  const Sandpile sp(g, 0);
  const ChipConfig m = sp.max_stable();
  if (sp.stab(m + m) != m)
    return false;
  const std::int64_t s = total(max_stable_full(g));
  for (int i = 0; i < sp.dim(); ++i) {
    ChipConfig c = m;
    c[i] += s;
    if (sp.stab(c) != m)
      return false;
  }
  return true;
}

bool is_compatible(const Graph& g, const FullConfig& c)
{
  require_connected(g);
  if (c.size() != g.order())
    throw ConfigError("full configuration has the wrong length");
  const ExactMatrix b = inverse_exact(reduced_laplacian(g, 0));
  if (Integer(total(c)) % lcd_of_entries(b) != 0)
    return false;
  const ExactVector y = b * restrict_full(c, 0).cast<Rational>();
  return is_integral(y);
}

bool is_compatible_by_sinks(const Graph& g, const FullConfig& c)
{
  require_connected(g);
  if (c.size() != g.order())
    throw ConfigError("full configuration has the wrong length");
  for (Vertex s = 0; s < g.order(); ++s)
    if (!is_integral(solve_exact_vector(reduced_laplacian(g, s), restrict_full(c, s))))
      return false;
  return true;
}

Integer minimal_compatibility_number_single_sink(const Graph& g)
{
  require_connected(g);
  return lcd_of_entries(inverse_exact(reduced_laplacian(g, 0)));
}

Integer minimal_compatibility_number_by_search(const Graph& g)
{
  require_connected(g);
  const int n = g.order();
  const Integer k = spanning_tree_count(g, false);
  // inv[s] column j solves the reduced system at sink s for e_(vertex j).
  std::vector<ExactMatrix> inv;
  for (Vertex s = 0; s < n; ++s)
    inv.push_back(solve_exact(reduced_laplacian(g, s), IntegerMatrix::Identity(n - 1, n - 1)));
  for (Integer d = 1; d <= k; ++d) {
    bool all = true;
    for (Vertex i = 0; i < n && all; ++i) {
      for (Vertex s = 0; s < n && all; ++s) {
        if (s == i)
          continue;
        const int col = i < s ? i : i - 1;
        for (Eigen::Index r = 0; r < n - 1 && all; ++r)
          all = denominator(Rational(inv[s](r, col) * d)) == 1;
      }
    }
    if (all)
      return d;
  }
  throw CrossCheckFault("no d up to the group order makes every d e_i compatible");
}

CompatibilityIdeal minimal_compatibility_number(const Graph& g, bool verify)
{
  require_connected(g);
  CompatibilityIdeal out{1, spanning_tree_count(g, false)};
  for (Vertex s = 0; s < g.order(); ++s)
    out.x = boost::multiprecision::lcm(out.x, lcd_of_entries(inverse_exact(reduced_laplacian(g, s))));
  if (verify) {
    if (minimal_compatibility_number_single_sink(g) != out.x)
      throw CrossCheckFault("minimal compatibility number depends on the sink");
    if (minimal_compatibility_number_by_search(g) != out.x)
      throw CrossCheckFault("minimal compatibility number disagrees with the least-d search");
  }
  if (out.k % out.x != 0)
    throw CrossCheckFault("minimal compatibility number does not divide the group order");
  return out;
}

bool lemma_shift_compatibility(const Graph& g, const FullConfig& c)
{
  if (!is_compatible(g, c))
    throw std::invalid_argument("lemma_shift_compatibility needs a compatible configuration");
  const std::int64_t s = total(c);
  for (Vertex i = 0; i < g.order(); ++i) {
    FullConfig e = FullConfig::Zero(g.order());
    e[i] = s;
    if (!is_compatible(g, e))
      return false;
  }
  return true;
}

NecessaryConditions necessary_conditions(const Graph& g)
{
  require_connected(g);
  NecessaryConditions out;
  out.k = spanning_tree_count(g, false);
  out.x = minimal_compatibility_number_single_sink(g);
  out.s = total(max_stable_full(g));
  const bool tree = is_tree(g);
  out.gcd_ok = tree || boost::multiprecision::gcd(out.k, Integer(out.s)) > 1;
  const std::int64_t n = g.order();
  out.bound_ok = n == 2 ? out.x == 1 : out.x <= Integer(n * n - 2 * n);
  out.tree_consistent = (out.x == 1) == tree;
  return out;
}

CipReport has_cip(const Graph& g)
{
  require_connected(g);
  const int n = g.order();
  CipReport report;
  report.consistency.assign(n, std::vector<std::int64_t>(n, -1));
  for (Vertex s = 0; s < n; ++s) {
    const Sandpile sp(g, s);
    report.identities.push_back(sp.recurrent_identity());
    for (int i = 0; i < sp.dim(); ++i)
      report.consistency[s][sp.vertex_at(i)] = report.identities.back()[i];
  }
  FullConfig witness(n);
  report.holds = true;
  for (Vertex v = 0; v < n && report.holds; ++v) {
    witness[v] = report.consistency[v == 0 ? 1 : 0][v];
    for (Vertex s = 0; s < n; ++s)
      if (s != v && report.consistency[s][v] != witness[v])
        report.holds = false;
  }
  if (report.holds)
    report.witness = witness;
  return report;
}

bool all_leaf_attachments_have_cip(const Graph& g)
{
  for (Vertex v = 0; v < g.order(); ++v)
    if (!has_cip(attach_leaf(g, v)).holds)
      return false;
  return true;
}

TreeDecoration cmip_tree_decoration(const Graph& g)
{
  require_connected(g);
  TreeDecoration out{g, {}, spanning_tree_count(g, false)};
  const std::int64_t k = static_cast<std::int64_t>(out.k);
  for (Vertex v = 0; v < g.order(); ++v) {
    const std::int64_t need = g.degree(v) - 1;
    const std::int64_t target = (need + k - 1) / k * k;
    const int size = static_cast<int>(target - need);
    out.tree_sizes.push_back(size);
    if (size > 0)
      out.graph = attach_tree(out.graph, v, TreeShape::path(size));
  }
  return out;
}

bool strong_p2_pk_prediction(int k)
{
  if (k < 2)
    throw std::invalid_argument("k must be at least 2");
  return k == 2 || k % 3 == 1;
}

bool cartesian_ki_pj_prediction(int i, int j)
{
  if (i < 2 || j < 2)
    throw std::invalid_argument("i and j must be at least 2");
  return i == 4 && j == 2;
}

QuotientSystem cartesian_quotient(int i, int j)
{
  if (i < 2 || j < 2)
    throw std::invalid_argument("i and j must be at least 2");
  const Graph g = cartesian_product(complete_graph(i), path_graph(j));
  const Sandpile sp(g, 0);
  auto index = [&](int a, int b) { return sp.index_of(a * j + b); };
  Partition p;
  for (int y = j - 1; y >= 0; --y) {
    if (y != 0)
      p.classes.push_back({index(0, y)});
    std::vector<int> layer;
    for (int x = 1; x < i; ++x)
      layer.push_back(index(x, y));
    p.classes.push_back(std::move(layer));
  }
  QuotientSystem q;
  q.laplacian = partition_collapse(sp.reduced_laplacian(), p);
  q.chips = partition_collapse_vec(to_integer_vector(sp.max_stable()), p);
  q.firing_vector = solve_exact_vector(q.laplacian, q.chips);
  return q;
}

IntegerMatrix quotient_laplacian_j2(int i)
{
  IntegerMatrix m(3, 3);
  m << i, 1 - i, 0,
       1 - i, 2 * i - 2, 1 - i,
       0, 1 - i, 2 * i - 2;
  return m;
}

IntegerMatrix quotient_laplacian_j3(int i)
{
  IntegerMatrix m(5, 5);
  m << i, 1 - i, -1, 0, 0,
       1 - i, 2 * i - 2, 0, 1 - i, 0,
       -1, 0, i + 1, 1 - i, 0,
       0, 1 - i, 1 - i, 3 * i - 3, 1 - i,
       0, 0, 0, 1 - i, 2 * i - 2;
  return m;
}

namespace {

void check_quotient(const QuotientSystem& q, const IntegerMatrix& laplacian, const ExactVector& closed, int i, int j)
{
  if (q.laplacian != laplacian)
    throw CrossCheckFault("collapsed Laplacian differs from the closed form at i=" + std::to_string(i) +
                          ", j=" + std::to_string(j));
  if (q.firing_vector != closed)
    throw CrossCheckFault("collapsed firing vector differs from the closed form at i=" + std::to_string(i) +
                          ", j=" + std::to_string(j));
}

} // namespace

ExactVector quotient_firing_vector_j2(int i)
{
  if (i < 2)
    throw std::invalid_argument("i must be at least 2");
  const Integer ii = i;
  const Integer den = ii + 2;
  ExactVector v(3);
  v << Rational(3 * ii * (ii - 1), den), Rational((ii - 1) * (3 * ii + 2), den), Rational(2 * (ii - 1) * (ii + 1), den);
  check_quotient(cartesian_quotient(i, 2), quotient_laplacian_j2(i), v, i, 2);
  return v;
}

ExactVector quotient_firing_vector_j3(int i)
{
  if (i < 2)
    throw std::invalid_argument("i must be at least 2");
  const Integer ii = i;
  const Integer den = (ii + 1) * (ii + 3);
  ExactVector v(5);
  v << Rational(2 * ii * (3 * ii - 2) * (ii + 3), den), Rational((3 * ii - 2) * (2 * ii * ii + 6 * ii + 1), den),
    Rational(5 * ii * ii * ii + 8 * ii * ii - 6 * ii + 1, den), Rational(5 * ii * ii * ii + 11 * ii * ii - 5 * ii - 1, den),
    Rational((3 * ii - 2) * (ii * ii + 3 * ii + 1), den);
  check_quotient(cartesian_quotient(i, 3), quotient_laplacian_j3(i), v, i, 3);
  return v;
}

} // namespace sandpile
