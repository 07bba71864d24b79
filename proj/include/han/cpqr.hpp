#ifndef HAN_CPQR_HPP
#define HAN_CPQR_HPP

#include <han/types.hpp>

namespace han {

//
// Column-pivoted Householder QR: M * P = Q * R with the diagonal of R
// nonincreasing in magnitude. Backed by Eigen's ColPivHouseholderQR;
// this wrapper fixes the result surface (explicit R, permutation as an
// IndexSet, and a Q applier) and the rank rule used across the library.
//
template <class Scalar>
class CpqrResult {
 public:
  explicit CpqrResult(Matrix<Scalar> m) : qr_(std::move(m)) {}

  Index rows() const { return qr_.rows(); }
  Index cols() const { return qr_.cols(); }

  /// Upper-trapezoidal factor, min(m,n) x n, columns in pivot order.
  Matrix<Scalar> r() const {
    const Index k = std::min(qr_.rows(), qr_.cols());
    return qr_.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
  }

  /// Column permutation: position j of the permuted matrix holds
  /// original column colperm()[j].
  IndexSet colperm() const {
    const auto& p = qr_.colsPermutation().indices();
    std::vector<Index> perm(static_cast<std::size_t>(qr_.cols()));
    for (Index i = 0; i < qr_.cols(); ++i)
      perm[static_cast<std::size_t>(i)] = static_cast<Index>(p[i]);
    return IndexSet(std::move(perm));
  }

  /// |R(i,i)| for i < min(m,n).
  Eigen::VectorXd diag_magnitudes() const {
    const Index k = std::min(qr_.rows(), qr_.cols());
    return qr_.matrixQR().diagonal().head(k).cwiseAbs();
  }

  /// Numerical rank: entries of |diag(R)| at least rel_tol * |R(0,0)|.
  Index rank(double rel_tol) const {
    const Eigen::VectorXd d = diag_magnitudes();
    if (d.size() == 0 || d[0] == 0.0) return 0;
    const double thresh = rel_tol * d[0];
    Index r = 0;
    while (r < d.size() && d[r] >= thresh) ++r;
    return r;
  }

  Matrix<Scalar> apply_q(const Matrix<Scalar>& x) const {
    if (x.rows() != qr_.rows())
      throw invalid_input("cpqr: Q applier expects full-height blocks");
    return qr_.householderQ() * x;
  }

  Matrix<Scalar> apply_q_adjoint(const Matrix<Scalar>& x) const {
    if (x.rows() != qr_.rows())
      throw invalid_input("cpqr: Q applier expects full-height blocks");
    return qr_.householderQ().adjoint() * x;
  }

  /// Least-squares solve min ||M x - b||.
  Matrix<Scalar> solve(const Matrix<Scalar>& b) const { return qr_.solve(b); }

  const Eigen::ColPivHouseholderQR<Matrix<Scalar>>& eigen() const { return qr_; }

 private:
  Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr_;
};

template <class Scalar>
CpqrResult<Scalar> cpqr(const Matrix<Scalar>& m) {
  if (m.size() == 0) throw invalid_input("cpqr: empty matrix");
  if (!all_finite(m)) throw invalid_input("cpqr: non-finite entry");
  return CpqrResult<Scalar>(m);
}

}  // namespace han

#endif  // HAN_CPQR_HPP
