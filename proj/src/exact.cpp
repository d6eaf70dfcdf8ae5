#include "sandpile/exact.hpp"

#include <gmp.h>

namespace sandpile {

IntegerMatrix full_laplacian(const Graph& g)
{
  if (!is_connected(g))
    throw GraphError("Laplacian requested for a disconnected graph");
  const int n = g.order();
  IntegerMatrix m = IntegerMatrix::Zero(n, n);
  for (const Edge& e : g.edges()) {
    m(e.u, e.v) -= e.weight;
    m(e.v, e.u) -= e.weight;
    m(e.u, e.u) += e.weight;
    m(e.v, e.v) += e.weight;
  }
  return m;
}

IntegerMatrix reduced_laplacian(const Graph& g, Vertex sink)
{
  if (sink < 0 || sink >= g.order())
    throw GraphError("sink out of range");
  const IntegerMatrix full = full_laplacian(g);
  const int n = g.order();
  IntegerMatrix m(n - 1, n - 1);
  for (int i = 0, r = 0; i < n; ++i) {
    if (i == sink)
      continue;
    for (int j = 0, c = 0; j < n; ++j) {
      if (j == sink)
        continue;
      m(r, c++) = full(i, j);
    }
    ++r;
  }
  return m;
}

namespace detail {

Integer bareiss_eliminate(IntegerMatrix& work, Eigen::Index n)
{
  const Eigen::Index cols = work.cols();
  Integer prev = 1;
  bool negate = false;
  mpz_t tmp;
  mpz_init(tmp);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    while (p < n && work(p, k) == 0)
      ++p;
    if (p == n) {
      mpz_clear(tmp);
      return 0;
    }
    if (p != k) {
      work.row(p).swap(work.row(k));
      negate = !negate;
    }
    mpz_srcptr akk = work(k, k).backend().data();
    for (Eigen::Index i = k + 1; i < n; ++i) {
      mpz_srcptr aik = work(i, k).backend().data();
      for (Eigen::Index j = k + 1; j < cols; ++j) {
        mpz_ptr aij = work(i, j).backend().data();
        mpz_mul(tmp, akk, aij);
        mpz_submul(tmp, aik, work(k, j).backend().data());
        mpz_divexact(aij, tmp, prev.backend().data());
      }
      work(i, k) = 0;
    }
    prev = work(k, k);
  }
  mpz_clear(tmp);
  return negate ? Integer(-prev) : prev;
}

IntegerMatrix bareiss_back_substitute(const IntegerMatrix& work, Eigen::Index n)
{
  const Eigen::Index k = work.cols() - n;
  const Integer& d = work(n - 1, n - 1);
  IntegerMatrix x(n, k);
  Integer acc;
  for (Eigen::Index c = 0; c < k; ++c) {
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      acc = d * work(i, n + c);
      for (Eigen::Index j = i + 1; j < n; ++j)
        acc -= work(i, j) * x(j, c);
      mpz_divexact(x(i, c).backend().data(), acc.backend().data(), work(i, i).backend().data());
    }
  }
  return x;
}

} // namespace detail

IntegerMatrix to_integer(const ExactMatrix& m)
{
  IntegerMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (denominator(m(i, j)) != 1)
        throw DimensionError("matrix entry is not an integer");
      out(i, j) = numerator(m(i, j));
    }
  return out;
}

IntegerMatrix Partition::indicator(Eigen::Index dim) const
{
  IntegerMatrix p = IntegerMatrix::Zero(dim, static_cast<Eigen::Index>(classes.size()));
  std::vector<bool> seen(dim, false);
  Eigen::Index covered = 0;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (classes[c].empty())
      throw DimensionError("partition class is empty");
    for (int v : classes[c]) {
      if (v < 0 || v >= dim)
        throw DimensionError("partition index out of range");
      if (seen[v])
        throw DimensionError("partition classes overlap");
      seen[v] = true;
      ++covered;
      p(v, static_cast<Eigen::Index>(c)) = 1;
    }
  }
  if (covered != dim)
    throw DimensionError("partition does not cover every index");
  return p;
}

Integer spanning_tree_count(const Graph& g, bool check_all_sinks)
{
  if (!is_connected(g))
    throw GraphError("spanning trees of a disconnected graph");
  if (g.order() == 1)
    return 1;
  const Integer k = determinant(reduced_laplacian(g, 0));
  if (check_all_sinks) {
    for (Vertex s = 1; s < g.order(); ++s)
      if (determinant(reduced_laplacian(g, s)) != k)
        throw std::logic_error("reduced Laplacian determinant depends on the sink");
  }
  return k;
}

} // namespace sandpile
