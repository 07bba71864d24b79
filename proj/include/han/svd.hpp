#ifndef HAN_SVD_HPP
#define HAN_SVD_HPP

#include <han/types.hpp>

#include <Eigen/SVD>

namespace han {

inline constexpr Index kSvdDefaultCap = 4096;

template <class Scalar>
struct SvdResult {
  Eigen::VectorXd singular_values;  // descending
  Matrix<Scalar> u;                 // m x min(m,n)
  Matrix<Scalar> v;                 // n x min(m,n)
};

/// Dense SVD oracle (Jacobi). Refuses matrices with min(m,n) beyond `cap`;
/// this is a validation tool, not a production path.
template <class Scalar>
SvdResult<Scalar> svd_dense(const Matrix<Scalar>& m, Index cap = kSvdDefaultCap) {
  if (m.size() == 0) throw invalid_input("svd_dense: empty matrix");
  if (!all_finite(m)) throw invalid_input("svd_dense: non-finite entry");
  if (std::min(m.rows(), m.cols()) > cap)
    throw invalid_input("svd_dense: oracle cap exceeded");
  Eigen::JacobiSVD<Matrix<Scalar>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return SvdResult<Scalar>{svd.singularValues(), svd.matrixU(), svd.matrixV()};
}

/// Singular values only.
template <class Scalar>
Eigen::VectorXd svd_values(const Matrix<Scalar>& m, Index cap = kSvdDefaultCap) {
  if (m.size() == 0) throw invalid_input("svd_values: empty matrix");
  if (!all_finite(m)) throw invalid_input("svd_values: non-finite entry");
  if (std::min(m.rows(), m.cols()) > cap)
    throw invalid_input("svd_values: oracle cap exceeded");
  Eigen::JacobiSVD<Matrix<Scalar>> svd(m);
  return svd.singularValues();
}

/// Largest singular value of a small dense block.
template <class Scalar>
double spectral_norm_dense(const Matrix<Scalar>& m, Index cap = kSvdDefaultCap) {
  if (m.size() == 0) return 0.0;
  return svd_values(m, cap)(0);
}

}  // namespace han

#endif  // HAN_SVD_HPP
