#ifndef HAN_SOLVE_HPP
#define HAN_SOLVE_HPP

#include <han/cpqr.hpp>
#include <han/types.hpp>

namespace han {

/// Solve A11 X = B for square A11 via column-pivoted QR. Throws a
/// numerical_error carrying the detected rank when A11 is singular to
/// working precision.
template <class Scalar>
Matrix<Scalar> solve_square(const Matrix<Scalar>& a11, const Matrix<Scalar>& b,
                            double rank_tol = 1e-15) {
  if (a11.rows() == 0 || a11.rows() != a11.cols())
    throw invalid_input("solve_square: matrix must be square and nonempty");
  if (a11.rows() != b.rows())
    throw invalid_input("solve_square: dimension mismatch");
  CpqrResult<Scalar> qr = cpqr(a11);
  const Index r = qr.rank(rank_tol);
  if (r < a11.rows())
    throw numerical_error("solve_square: singular to working precision", r);
  return qr.solve(b);
}

/// Rank-truncated pseudoinverse through column-pivoted QR: X with
/// A X A = A up to the truncation tolerance.
template <class Scalar>
Matrix<Scalar> pinv_cpqr(const Matrix<Scalar>& a, double rank_tol = 1e-15) {
  if (a.size() == 0) throw invalid_input("pinv_cpqr: empty matrix");
  CpqrResult<Scalar> qr = cpqr(a);
  const Index r = qr.rank(rank_tol);
  if (r == 0) return Matrix<Scalar>::Zero(a.cols(), a.rows());
  // A P = Q R; keep the leading r columns: X = P(:,0:r) R1^{-1} Q1^H.
  Matrix<Scalar> q1h = qr.apply_q_adjoint(Matrix<Scalar>::Identity(a.rows(), a.rows()))
                           .topRows(r);
  Matrix<Scalar> x = qr.r()
                         .topLeftCorner(r, r)
                         .template triangularView<Eigen::Upper>()
                         .solve(q1h);
  Matrix<Scalar> out = Matrix<Scalar>::Zero(a.cols(), a.rows());
  const IndexSet perm = qr.colperm();
  for (Index i = 0; i < r; ++i) out.row(perm[i]) = x.row(i);
  return out;
}

}  // namespace han

#endif  // HAN_SOLVE_HPP
