#ifndef HAN_RESIDUAL_HPP
#define HAN_RESIDUAL_HPP

#include <han/low_rank.hpp>
#include <han/matrix_source.hpp>
#include <han/norms.hpp>
#include <han/svd.hpp>

namespace han {

struct ResidualNorms {
  double abs_spectral = 0.0;
  double rel_spectral = 0.0;
  double abs_frob = 0.0;
  double rel_frob = 0.0;
};

struct ResidualOptions {
  /// Entry-count cap for materializing the source.
  std::size_t materialize_cap = kDefaultMaterializeCap;
  /// Evaluate matrix-free beyond the cap (one source pass per matvec).
  bool operator_mode = false;
  /// Below this min-dimension the dense SVD is used for spectral norms.
  Index exact_svd_max_min_dim = 512;
  int block = 8;
  int sweeps = 40;
  std::uint64_t seed = 0x5eed;
};

namespace detail {

template <class Scalar>
double dense_norm2(const Matrix<Scalar>& m, const ResidualOptions& opt) {
  if (m.size() == 0) return 0.0;
  if (std::min(m.rows(), m.cols()) <= opt.exact_svd_max_min_dim)
    return spectral_norm_dense(m, std::max<Index>(kSvdDefaultCap, m.rows()));
  return spectral_norm_block_est(operator_from_dense(m), opt.block, opt.sweeps,
                                 opt.seed);
}

}  // namespace detail

/// Residual norms of A - A~ against a dense reference A whose norms are
/// already known; the cheap path when several approximations are scored
/// against one materialized matrix.
template <class Scalar>
ResidualNorms residual_norms_dense(const Matrix<Scalar>& a,
                                   const LowRankApprox<Scalar>& ap, double norm_a_2,
                                   double norm_a_f,
                                   const ResidualOptions& opt = {}) {
  if (a.rows() != ap.rows() || a.cols() != ap.cols())
    throw invalid_input("residual_norms: shape mismatch");
  Matrix<Scalar> r = a - ap.to_dense();
  ResidualNorms out;
  out.abs_frob = r.norm();
  out.abs_spectral = detail::dense_norm2(r, opt);
  out.rel_frob = norm_a_f > 0 ? out.abs_frob / norm_a_f : 0.0;
  out.rel_spectral = norm_a_2 > 0 ? out.abs_spectral / norm_a_2 : 0.0;
  return out;
}

/// Spectral and Frobenius norms of A - A~, absolute and relative. Within
/// the materialization cap the source is expanded once; beyond it,
/// operator mode streams the source (one full pass per matvec) and must be
/// requested explicitly.
template <class Scalar>
ResidualNorms residual_norms(const MatrixSource<Scalar>& src,
                             const LowRankApprox<Scalar>& ap,
                             const ResidualOptions& opt = {}) {
  if (src.rows() != ap.rows() || src.cols() != ap.cols())
    throw invalid_input("residual_norms: shape mismatch");
  const std::size_t entries =
      static_cast<std::size_t>(src.rows()) * static_cast<std::size_t>(src.cols());
  if (entries <= opt.materialize_cap) {
    Matrix<Scalar> a = src.materialize(opt.materialize_cap);
    return residual_norms_dense(a, ap, detail::dense_norm2(a, opt), a.norm(), opt);
  }
  if (!opt.operator_mode)
    throw invalid_input("residual_norms: cap exceeded without operator mode");

  const Index m = src.rows(), n = src.cols();
  const Index chunk = std::max<Index>(1, static_cast<Index>(opt.materialize_cap / n));
  // One streaming pass for the Frobenius norms.
  double a_f2 = 0.0, r_f2 = 0.0;
  for (Index i0 = 0; i0 < m; i0 += chunk) {
    const Index h = std::min<Index>(chunk, m - i0);
    std::vector<Index> ids(static_cast<std::size_t>(h));
    for (Index t = 0; t < h; ++t) ids[static_cast<std::size_t>(t)] = i0 + t;
    Matrix<Scalar> rows = src.rows(IndexSet(std::move(ids)));
    a_f2 += rows.squaredNorm();
    Matrix<Scalar> sel = Matrix<Scalar>::Zero(m, h);
    for (Index t = 0; t < h; ++t) sel(i0 + t, t) = Scalar(1);
    Matrix<Scalar> approx_rows = ap.apply_adjoint(sel).adjoint();  // h x n
    r_f2 += (rows - approx_rows).squaredNorm();
  }
  LinearOperator<Scalar> res_op{
      m, n,
      [&](const Matrix<Scalar>& x) {
        Matrix<Scalar> y = Matrix<Scalar>::Zero(m, x.cols());
        for (Index i0 = 0; i0 < m; i0 += chunk) {
          const Index h = std::min<Index>(chunk, m - i0);
          std::vector<Index> ids(static_cast<std::size_t>(h));
          for (Index t = 0; t < h; ++t) ids[static_cast<std::size_t>(t)] = i0 + t;
          y.middleRows(i0, h) = src.rows(IndexSet(std::move(ids))) * x;
        }
        return Matrix<Scalar>(y - ap.apply(x));
      },
      [&](const Matrix<Scalar>& x) {
        Matrix<Scalar> y = Matrix<Scalar>::Zero(n, x.cols());
        for (Index i0 = 0; i0 < m; i0 += chunk) {
          const Index h = std::min<Index>(chunk, m - i0);
          std::vector<Index> ids(static_cast<std::size_t>(h));
          for (Index t = 0; t < h; ++t) ids[static_cast<std::size_t>(t)] = i0 + t;
          y.noalias() +=
              src.rows(IndexSet(std::move(ids))).adjoint() * x.middleRows(i0, h);
        }
        return Matrix<Scalar>(y - ap.apply_adjoint(x));
      }};
  LinearOperator<Scalar> a_op{
      m, n,
      [&](const Matrix<Scalar>& x) {
        Matrix<Scalar> y = Matrix<Scalar>::Zero(m, x.cols());
        for (Index i0 = 0; i0 < m; i0 += chunk) {
          const Index h = std::min<Index>(chunk, m - i0);
          std::vector<Index> ids(static_cast<std::size_t>(h));
          for (Index t = 0; t < h; ++t) ids[static_cast<std::size_t>(t)] = i0 + t;
          y.middleRows(i0, h) = src.rows(IndexSet(std::move(ids))) * x;
        }
        return y;
      },
      [&](const Matrix<Scalar>& x) {
        Matrix<Scalar> y = Matrix<Scalar>::Zero(n, x.cols());
        for (Index i0 = 0; i0 < m; i0 += chunk) {
          const Index h = std::min<Index>(chunk, m - i0);
          std::vector<Index> ids(static_cast<std::size_t>(h));
          for (Index t = 0; t < h; ++t) ids[static_cast<std::size_t>(t)] = i0 + t;
          y.noalias() +=
              src.rows(IndexSet(std::move(ids))).adjoint() * x.middleRows(i0, h);
        }
        return y;
      }};
  ResidualNorms out;
  out.abs_frob = std::sqrt(r_f2);
  const double a_f = std::sqrt(a_f2);
  out.abs_spectral = spectral_norm_block_est(res_op, opt.block, opt.sweeps, opt.seed);
  const double a_2 = spectral_norm_block_est(a_op, opt.block, opt.sweeps, opt.seed);
  out.rel_frob = a_f > 0 ? out.abs_frob / a_f : 0.0;
  out.rel_spectral = a_2 > 0 ? out.abs_spectral / a_2 : 0.0;
  return out;
}

}  // namespace han

#endif  // HAN_RESIDUAL_HPP
