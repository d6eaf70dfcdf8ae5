#pragma once

#include "sandpile/graph.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Core>

#include <stdexcept>
#include <vector>

namespace sandpile {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

template<typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template<typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntegerMatrix = DenseMatrix<Integer>;
using IntegerVector = DenseVector<Integer>;
using ExactMatrix = DenseMatrix<Rational>;
using ExactVector = DenseVector<Rational>;

class SingularMatrixError : public std::domain_error
{
public:
  SingularMatrixError()
    : std::domain_error("matrix is singular")
  {
  }
};

class DimensionError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Laplacians
// ---------------------------------------------------------------------------

/// Delta = D - A for the weighted graph. Rejects disconnected graphs.
IntegerMatrix full_laplacian(const Graph& g);
/// Delta with the sink's row and column removed; rows/cols follow vertex
/// order skipping the sink.
IntegerMatrix reduced_laplacian(const Graph& g, Vertex sink);

// ---------------------------------------------------------------------------
// Fraction-free elimination
// ---------------------------------------------------------------------------

namespace detail {

/// Clear denominators row by row. Returns the integer matrix and the factor
/// each row was multiplied by.
template<typename Derived>
IntegerMatrix integer_rows(const Eigen::MatrixBase<Derived>& m, std::vector<Integer>* scale)
{
  using Scalar = typename Derived::Scalar;
  IntegerMatrix out(m.rows(), m.cols());
  if (scale)
    scale->assign(m.rows(), Integer(1));
  if constexpr (std::is_same_v<Scalar, Rational>) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      Integer l = 1;
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        l = boost::multiprecision::lcm(l, Integer(denominator(Rational(m(i, j)))));
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const Rational r = m(i, j);
        out(i, j) = numerator(r) * (l / denominator(r));
      }
      if (scale)
        (*scale)[i] = l;
    }
  } else {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        out(i, j) = Integer(m(i, j));
  }
  return out;
}

/// Bareiss forward elimination on the leading `n` columns of `work`, applying
/// the same row operations to the trailing columns. Returns the determinant of
/// the leading block (0 if singular; elimination stops early in that case).
Integer bareiss_eliminate(IntegerMatrix& work, Eigen::Index n);

/// Fraction-free back substitution after bareiss_eliminate succeeded. Entry
/// (i, j) of the result is the numerator of x_i for right-hand side j over the
/// final pivot work(n-1, n-1).
IntegerMatrix bareiss_back_substitute(const IntegerMatrix& work, Eigen::Index n);

} // namespace detail

/// Exact determinant by Bareiss elimination.
template<typename Derived>
auto determinant(const Eigen::MatrixBase<Derived>& m)
{
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols())
    throw DimensionError("determinant of a non-square matrix");
  std::vector<Integer> scale;
  IntegerMatrix work = detail::integer_rows(m, &scale);
  Integer det = m.rows() == 0 ? Integer(1) : detail::bareiss_eliminate(work, m.rows());
  if constexpr (std::is_same_v<Scalar, Rational>) {
    Integer s = 1;
    for (const auto& f : scale)
      s *= f;
    return Rational(det, s);
  } else {
    return det;
  }
}

/// Solve A X = B exactly for possibly many right-hand sides.
template<typename DerivedA, typename DerivedB>
ExactMatrix solve_exact(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
{
  if (a.rows() != a.cols())
    throw DimensionError("solve_exact needs a square matrix");
  if (b.rows() != a.rows())
    throw DimensionError("right-hand side has the wrong number of rows");
  const Eigen::Index n = a.rows();
  const Eigen::Index k = b.cols();

  // Scale each augmented row [a_i | b_i] by one common factor.
  ExactMatrix aug(n, n + k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j)
      aug(i, j) = Rational(a(i, j));
    for (Eigen::Index j = 0; j < k; ++j)
      aug(i, n + j) = Rational(b(i, j));
  }
  IntegerMatrix work = detail::integer_rows(aug, nullptr);
  ExactMatrix x(n, k);
  if (n == 0)
    return x;
  if (detail::bareiss_eliminate(work, n) == 0)
    throw SingularMatrixError();
  const IntegerMatrix num = detail::bareiss_back_substitute(work, n);
  const Integer& pivot = work(n - 1, n - 1);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      x(i, j) = Rational(num(i, j), pivot);
  return x;
}

template<typename DerivedA, typename DerivedB>
ExactVector solve_exact_vector(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
{
  static_assert(DerivedB::ColsAtCompileTime == 1 || DerivedB::ColsAtCompileTime == Eigen::Dynamic);
  if (b.cols() != 1)
    throw DimensionError("solve_exact_vector needs a single right-hand side");
  return solve_exact(a, b).col(0);
}

template<typename Derived>
ExactMatrix inverse_exact(const Eigen::MatrixBase<Derived>& m)
{
  return solve_exact(m, IntegerMatrix::Identity(m.rows(), m.rows()));
}

/// Least common multiple of all entry denominators; 1 for integer matrices.
template<typename Derived>
Integer lcd_of_entries(const Eigen::MatrixBase<Derived>& m)
{
  using Scalar = typename Derived::Scalar;
  Integer l = 1;
  if constexpr (std::is_same_v<Scalar, Rational>) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        l = boost::multiprecision::lcm(l, Integer(denominator(Rational(m(i, j)))));
  }
  return l;
}

template<typename Derived>
bool is_integral(const Eigen::MatrixBase<Derived>& m)
{
  return lcd_of_entries(m) == 1;
}

/// Exact conversion of an integer-valued rational matrix; throws otherwise.
IntegerMatrix to_integer(const ExactMatrix& m);

// ---------------------------------------------------------------------------
// Partition collapse (symmetry quotients)
// ---------------------------------------------------------------------------

struct Partition
{
  std::vector<std::vector<int>> classes;

  /// Class-indicator matrix P (dim x classes). Validates the partition.
  IntegerMatrix indicator(Eigen::Index dim) const;
};

/// P^T M P: entry [A][B] is the sum of M[u][v] over u in A, v in B.
template<typename Derived>
DenseMatrix<typename Derived::Scalar> partition_collapse(const Eigen::MatrixBase<Derived>& m, const Partition& p)
{
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols())
    throw DimensionError("partition_collapse needs a square matrix");
  const DenseMatrix<Scalar> ind = p.indicator(m.rows()).template cast<Scalar>();
  return ind.transpose() * m * ind;
}

template<typename Derived>
DenseVector<typename Derived::Scalar> partition_collapse_vec(const Eigen::MatrixBase<Derived>& v, const Partition& p)
{
  using Scalar = typename Derived::Scalar;
  const DenseMatrix<Scalar> ind = p.indicator(v.rows()).template cast<Scalar>();
  return ind.transpose() * v;
}

// ---------------------------------------------------------------------------

/// det of the reduced Laplacian. With `check_all_sinks` every sink is
/// evaluated and required to agree.
Integer spanning_tree_count(const Graph& g, bool check_all_sinks = true);

} // namespace sandpile
