#ifndef HAN_SRR_HPP
#define HAN_SRR_HPP

#include <han/cpqr.hpp>
#include <han/types.hpp>

namespace han {

struct SrrConfig {
  /// Entrywise bound enforced on the coefficient matrix; must be >= 1.
  double c = 2.0;
  /// Relative threshold on the pivoted-R diagonal for rank truncation.
  double rank_tol = 1e-15;
  /// Cap on swap post-processing iterations; <0 means 3 * rows * cols.
  long max_swaps = -1;
};

//
// Skinny rank-revealing factorization of a tall matrix M (m x k):
//
//   M = P [I; E] M(pivots, :)   up to a residual of order rank_tol * |M|_F,
//
// with |E|_max <= c. `pivots` lists the selected rows in discovery order;
// `coeff` holds E with rows in ascending order over the non-pivot indices
// and columns following the pivot order. rank == pivots.size() and may be
// smaller than k when trailing diagonals of the pivoted R collapse.
//
template <class Scalar>
struct SrrResult {
  IndexSet pivots;
  Matrix<Scalar> coeff;
  Index rank = 0;
  /// Number of pivot swaps the post-processing performed.
  long swaps = 0;
};

namespace detail {

// Coefficients E solving min |M(comp,:) - E M(piv,:)|_F row-block-wise,
// through a fresh QR of M(piv,:)^T. Rows of the result follow `comp` order.
template <class Scalar>
Matrix<Scalar> interpolation_coeffs(const Matrix<Scalar>& m, const IndexSet& piv,
                                    const IndexSet& comp) {
  Matrix<Scalar> basis_t = select_rows(m, piv).transpose();   // k x r
  Matrix<Scalar> rest_t = select_rows(m, comp).transpose();   // k x (m-r)
  Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(std::move(basis_t));
  return qr.solve(rest_t).transpose();
}

}  // namespace detail

template <class Scalar>
SrrResult<Scalar> srr(const Matrix<Scalar>& m, const SrrConfig& cfg = {}) {
  const Index rows = m.rows(), cols = m.cols();
  if (rows == 0 || cols == 0) throw invalid_input("srr: empty matrix");
  if (!all_finite(m)) throw invalid_input("srr: non-finite entry");
  if (cfg.c < 1.0) throw invalid_input("srr: c must be >= 1");
  if (!(cfg.rank_tol > 0.0 && cfg.rank_tol < 1.0))
    throw invalid_input("srr: rank_tol must be in (0,1)");

  // Row selection via column-pivoted QR of M^T.
  CpqrResult<Scalar> qr = cpqr<Scalar>(m.transpose());
  const Index rank = qr.rank(cfg.rank_tol);

  SrrResult<Scalar> out;
  out.rank = rank;
  if (rank == 0) {
    out.pivots = IndexSet{};
    out.coeff = Matrix<Scalar>::Zero(rows, 0);
    return out;
  }

  const IndexSet perm = qr.colperm();
  std::vector<Index> piv(perm.begin(), perm.begin() + rank);
  out.pivots = IndexSet(std::move(piv));
  IndexSet comp = out.pivots.complement(rows);

  // E^T = R11^{-1} R12 in permuted order, then rows rearranged to the
  // ascending non-pivot order.
  Matrix<Scalar> r = qr.r();
  Matrix<Scalar> et = r.topLeftCorner(rank, rank)
                          .template triangularView<Eigen::Upper>()
                          .solve(r.topRightCorner(rank, rows - rank));
  Matrix<Scalar> coeff_perm = et.transpose();  // rows follow perm[rank..)
  std::vector<Index> tail(perm.begin() + rank, perm.end());
  out.coeff.resize(rows - rank, rank);
  {
    // position of each non-pivot original index within ascending comp order
    std::vector<Index> pos(static_cast<std::size_t>(rows), -1);
    for (Index i = 0; i < comp.size(); ++i) pos[static_cast<std::size_t>(comp[i])] = i;
    for (Index i = 0; i < static_cast<Index>(tail.size()); ++i)
      out.coeff.row(pos[static_cast<std::size_t>(tail[static_cast<std::size_t>(i)])]) =
          coeff_perm.row(i);
  }

  // Swap post-processing: while some |E(i,j)| exceeds c, exchanging
  // non-pivot row i with pivot j multiplies the volume of the pivot block
  // by at least |E(i,j)| > c >= 1, so the loop terminates (or trips the cap).
  const long max_swaps = cfg.max_swaps >= 0 ? cfg.max_swaps : 3 * rows * cols;
  if (out.coeff.size() > 0) {
    while (true) {
      Index bi = 0, bj = 0;
      const double emax = out.coeff.cwiseAbs().maxCoeff(&bi, &bj);
      if (!(emax > cfg.c)) break;
      if (out.swaps >= max_swaps)
        throw numerical_error("srr: swap cap exceeded", rank);
      std::vector<Index> p(out.pivots.begin(), out.pivots.end());
      std::vector<Index> c_(comp.begin(), comp.end());
      std::swap(p[static_cast<std::size_t>(bj)], c_[static_cast<std::size_t>(bi)]);
      std::sort(c_.begin(), c_.end());
      out.pivots = IndexSet(std::move(p));
      comp = IndexSet(std::move(c_));
      out.coeff = detail::interpolation_coeffs(m, out.pivots, comp);
      if (!all_finite(out.coeff))
        throw numerical_error("srr: singular pivot block during swaps", rank);
      ++out.swaps;
    }
  }
  return out;
}

/// Dense m x rank basis with unit rows at the pivots and coefficient rows
/// elsewhere; the factor U (or V) of a skeleton approximation.
template <class Scalar>
Matrix<Scalar> skeleton_basis(Index rows, const SrrResult<Scalar>& f) {
  Matrix<Scalar> u = Matrix<Scalar>::Zero(rows, f.rank);
  for (Index j = 0; j < f.rank; ++j) u(f.pivots[j], j) = Scalar(1);
  const IndexSet comp = f.pivots.complement(rows);
  for (Index i = 0; i < comp.size(); ++i) u.row(comp[i]) = f.coeff.row(i);
  return u;
}

}  // namespace han

#endif  // HAN_SRR_HPP
