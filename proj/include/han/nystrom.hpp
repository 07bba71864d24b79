#ifndef HAN_NYSTROM_HPP
#define HAN_NYSTROM_HPP

#include <han/low_rank.hpp>
#include <han/matrix_source.hpp>
#include <han/sampling.hpp>
#include <han/solve.hpp>
#include <han/srr.hpp>

namespace han {

namespace detail {

template <class Scalar>
void check_sample_size(const MatrixSource<Scalar>& src, Index s) {
  if (s < 1) throw invalid_input("nystrom: sample size must be positive");
  if (s > std::min(src.rows(), src.cols()))
    throw invalid_input("nystrom: sample size exceeds matrix dimensions");
}

}  // namespace detail

/// Plain CUR: uniformly random I and J of size s, core a rank-truncated
/// pseudoinverse of A(I,J).
template <class Scalar>
LowRankApprox<Scalar> nys_basic(const MatrixSource<Scalar>& src, Index s,
                                std::mt19937_64& rng, double rank_tol = 1e-15) {
  detail::check_sample_size(src, s);
  IndexSet is = sample_new(rng, src.rows(), IndexSet{}, s).indices;
  IndexSet js = sample_new(rng, src.cols(), IndexSet{}, s).indices;
  Matrix<Scalar> c = src.cols(js);
  Matrix<Scalar> r = src.rows(is);
  Matrix<Scalar> w = select_cols(r, js);  // A(I,J)
  return LowRankApprox<Scalar>::cur(std::move(is), std::move(js), std::move(c),
                                    pinv_cpqr(w, rank_tol), std::move(r));
}

/// One pivoting step: random columns, then a skinny rank-revealing
/// factorization to pick the skeleton rows.
template <class Scalar>
LowRankApprox<Scalar> nys_pivot(const MatrixSource<Scalar>& src, Index s,
                                const SrrConfig& cfg, std::mt19937_64& rng) {
  detail::check_sample_size(src, s);
  IndexSet js = sample_new(rng, src.cols(), IndexSet{}, s).indices;
  SrrResult<Scalar> f = srr(src.cols(js), cfg);
  return LowRankApprox<Scalar>::row_skeleton(f.pivots, skeleton_basis(src.rows(), f),
                                             src.rows(f.pivots));
}

template <class Scalar>
struct RefineResult {
  LowRankApprox<Scalar> approx;
  Index rounds = 0;  // alternating rounds actually executed
};

/// Iterated alternating refinement at a fixed sample size: each round picks
/// rows from the current columns, then columns from the current rows; exits
/// early once the row set repeats. The output is the row skeleton from the
/// last row pivot.
template <class Scalar>
RefineResult<Scalar> nys_refine(const MatrixSource<Scalar>& src, Index s,
                                Index steps, const SrrConfig& cfg,
                                std::mt19937_64& rng) {
  detail::check_sample_size(src, s);
  if (steps < 1) throw invalid_input("nys_refine: steps must be >= 1");
  IndexSet js = sample_new(rng, src.cols(), IndexSet{}, s).indices;
  IndexSet prev_rows;
  SrrResult<Scalar> row_fact;
  Index rounds = 0;
  for (Index t = 0; t < steps; ++t) {
    row_fact = srr(src.cols(js), cfg);
    ++rounds;
    if (t > 0 && row_fact.pivots.same_set(prev_rows)) break;
    prev_rows = row_fact.pivots;
    SrrResult<Scalar> col_fact = srr(Matrix<Scalar>(src.rows(row_fact.pivots).transpose()), cfg);
    js = col_fact.pivots;
  }
  auto approx = LowRankApprox<Scalar>::row_skeleton(
      row_fact.pivots, skeleton_basis(src.rows(), row_fact), src.rows(row_fact.pivots));
  return RefineResult<Scalar>{std::move(approx), rounds};
}

}  // namespace han

#endif  // HAN_NYSTROM_HPP
