#ifndef HAN_NORMS_HPP
#define HAN_NORMS_HPP

#include <han/types.hpp>

#include <Eigen/QR>

#include <functional>

namespace han {

/// Matrix-free operator: forward and adjoint application to blocks of
/// vectors, plus its dimensions.
template <class Scalar>
struct LinearOperator {
  Index rows = 0;
  Index cols = 0;
  std::function<Matrix<Scalar>(const Matrix<Scalar>&)> apply;          // (cols x p) -> (rows x p)
  std::function<Matrix<Scalar>(const Matrix<Scalar>&)> apply_adjoint;  // (rows x p) -> (cols x p)
};

template <class Scalar>
LinearOperator<Scalar> operator_from_dense(const Matrix<Scalar>& m) {
  return LinearOperator<Scalar>{
      m.rows(), m.cols(),
      [&m](const Matrix<Scalar>& x) { return Matrix<Scalar>(m * x); },
      [&m](const Matrix<Scalar>& x) { return Matrix<Scalar>(m.adjoint() * x); }};
}

/// Power-iteration estimate of the spectral norm. The returned value is
/// |M x|/|x| for the final iterate, hence never exceeds the true norm.
template <class Scalar>
double spectral_norm_est(const LinearOperator<Scalar>& op, int iters,
                         std::uint64_t seed) {
  if (iters < 10) throw invalid_input("spectral_norm_est: iters must be >= 10");
  if (op.rows == 0 || op.cols == 0) return 0.0;
  std::mt19937_64 rng(seed);
  Matrix<Scalar> x = random_gaussian<Scalar>(op.cols, 1, rng);
  double xn = x.norm();
  if (xn == 0.0) return 0.0;
  x /= xn;
  double est = 0.0;
  for (int t = 0; t < iters; ++t) {
    Matrix<Scalar> y = op.apply(x);
    const double yn = y.norm();
    if (yn == 0.0) return 0.0;
    est = yn;
    x = op.apply_adjoint(y);
    xn = x.norm();
    if (xn == 0.0) return est;
    x /= xn;
  }
  return est;
}

/// Block (subspace-iteration) estimate; converges much faster than the
/// single-vector version on residual matrices with flat spectra. Still a
/// lower bound on the true norm.
template <class Scalar>
double spectral_norm_block_est(const LinearOperator<Scalar>& op, int block,
                               int sweeps, std::uint64_t seed) {
  if (block < 1 || sweeps < 1)
    throw invalid_input("spectral_norm_block_est: bad block/sweeps");
  if (op.rows == 0 || op.cols == 0) return 0.0;
  const Index p = std::min<Index>(block, std::min(op.rows, op.cols));
  std::mt19937_64 rng(seed);
  Matrix<Scalar> x = random_gaussian<Scalar>(op.cols, p, rng);
  for (int t = 0; t < sweeps; ++t) {
    Eigen::HouseholderQR<Matrix<Scalar>> qx(x);
    x = qx.householderQ() * Matrix<Scalar>::Identity(op.cols, p);
    Matrix<Scalar> y = op.apply(x);
    Eigen::HouseholderQR<Matrix<Scalar>> qy(y);
    y = qy.householderQ() * Matrix<Scalar>::Identity(op.rows, p);
    x = op.apply_adjoint(y);
  }
  Eigen::HouseholderQR<Matrix<Scalar>> qx(x);
  x = qx.householderQ() * Matrix<Scalar>::Identity(op.cols, p);
  Matrix<Scalar> z = op.apply(x);
  Eigen::JacobiSVD<Matrix<Scalar>> svd(z);
  return svd.singularValues()(0);
}

}  // namespace han

#endif  // HAN_NORMS_HPP
