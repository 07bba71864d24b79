#ifndef HAN_HAN_SCHEMES_HPP
#define HAN_HAN_SCHEMES_HPP

#include <han/low_rank.hpp>
#include <han/matrix_source.hpp>
#include <han/norms.hpp>
#include <han/sampling.hpp>
#include <han/srr.hpp>
#include <han/svd.hpp>

#include <chrono>
#include <cmath>
#include <optional>

namespace han {

struct HanConfig {
  /// Progressive sampling stepsize; shrinks automatically near saturation.
  Index b = 5;
  /// Relative-error threshold for the randomized stop rule.
  double tau = 1e-14;
  /// Cap on the total progressive sample size; 0 means uncapped.
  Index max_samples = 0;
  /// Target rank; 0 means none.
  Index max_rank = 0;
  /// Successive iterations with phi < tau required before stopping.
  int consecutive_hits = 2;
  SrrConfig srr{};
  std::uint64_t seed = 0;
  /// Schur sample columns with all entries below schur_zero_rel times the
  /// largest magnitude seen in the matrix count as numerically zero
  /// (converged); keeps roundoff from minting spurious pivots.
  double schur_zero_rel = 1e-13;
  /// Use the small S(K,L) block in phi when the Schur row count exceeds this.
  Index phi_small_block_threshold = 10000;

  void validate() const {
    if (b < 1) throw invalid_input("HanConfig: b must be >= 1");
    if (!(tau > 0.0 && tau < 1.0)) throw invalid_input("HanConfig: tau must be in (0,1)");
    if (consecutive_hits < 1)
      throw invalid_input("HanConfig: consecutive_hits must be >= 1");
    if (max_samples < 0 || max_rank < 0)
      throw invalid_input("HanConfig: negative cap");
  }
};

enum class HanStop {
  running,
  tau_reached,      // phi < tau on consecutive_hits successive iterations
  rank_deficient,   // pivoting returned rank < sample count: numerical rank reached
  max_rank,
  max_samples,
  rows_unchanged,   // row index set identical to the previous iteration
  exhausted,        // a full dimension is covered by the skeleton
  saturated,        // no fresh columns left to sample
};

inline const char* to_string(HanStop s) {
  switch (s) {
    case HanStop::running: return "running";
    case HanStop::tau_reached: return "tau";
    case HanStop::rank_deficient: return "rank-deficient";
    case HanStop::max_rank: return "max-rank";
    case HanStop::max_samples: return "max-samples";
    case HanStop::rows_unchanged: return "rows-unchanged";
    case HanStop::exhausted: return "exhausted";
    case HanStop::saturated: return "saturated";
  }
  return "?";
}

/// Per-iteration record. theta and phi estimate the squared Frobenius and
/// relative spectral error of the skeleton the iteration's estimation
/// sample was drawn against (NaN when no estimate was available).
struct HanIterationRecord {
  Index iteration = 0;  // 1-based
  Index total_samples = 0;
  Index rank_rows = 0;  // |I| at the end of the iteration
  Index rank_cols = 0;  // |J| at the end of the iteration
  double theta = std::numeric_limits<double>::quiet_NaN();
  double phi = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t kernel_evals = 0;  // cumulative for this run
  std::uint64_t elapsed_ns = 0;    // cumulative since scheme start
};

struct HanTrace {
  std::vector<HanIterationRecord> records;
  HanStop stop = HanStop::running;

  Index iterations() const { return static_cast<Index>(records.size()); }
  const HanIterationRecord& last() const { return records.back(); }
};

//
// Estimators (randomized accuracy control). s_cols holds sampled Schur
// columns S(:,L) = A(comp I, L) - E A(I, L) for a uniform b-sample L of
// the n-k columns outside the pivot set.
//

/// Unbiased estimator of the squared Frobenius norm of the residual:
/// theta = (n-k)/b |S(:,L)|_F^2.
template <class Scalar>
double estimate_theta(const Matrix<Scalar>& s_cols, Index n, Index k, Index b) {
  if (b < 1 || b != s_cols.cols())
    throw invalid_input("estimate_theta: b must match the sample column count");
  if (k >= n) throw invalid_input("estimate_theta: k must be below n");
  return static_cast<double>(n - k) / static_cast<double>(b) * s_cols.squaredNorm();
}

/// Relative spectral error estimate phi = sqrt((n-k)/b) |S(:,L)|_2 / |A11|_2.
template <class Scalar>
double estimate_phi(const Matrix<Scalar>& s_cols, const Matrix<Scalar>& a11, Index n,
                    Index k, Index b) {
  if (b < 1 || b != s_cols.cols())
    throw invalid_input("estimate_phi: b must match the sample column count");
  if (k >= n) throw invalid_input("estimate_phi: k must be below n");
  if (a11.size() == 0) throw invalid_input("estimate_phi: empty pivot block");
  const double denom = spectral_norm_dense(a11);
  if (denom == 0.0) throw numerical_error("estimate_phi: zero pivot block");
  const double num = s_cols.size() == 0 ? 0.0 : spectral_norm_dense(s_cols);
  return std::sqrt(static_cast<double>(n - k) / static_cast<double>(b)) * num / denom;
}

//
// Schur-complement subset update.
//

template <class Scalar>
struct SchurUpdate {
  IndexSet k;                // Schur pivot positions within comp(I)
  IndexSet l;                // sampled columns (in A numbering)
  Matrix<Scalar> e_hat;      // coefficients of the Schur factorization
  Matrix<Scalar> e_bar;      // E2 - e_hat E1
  IndexSet i_hat;            // new pivot rows, comp(I) composed with k
  Matrix<Scalar> s22_cols;   // S(K, L)
  Matrix<Scalar> schur_cols; // S(:, L), estimator input
  double block_amax = 0.0;   // largest |entry| in the fetched A columns
  bool no_update = false;    // sample numerically zero: skeleton unchanged
};

template <class Scalar>
struct SetUpdResult {
  IndexSet pivots;       // expanded row set (unchanged on no_update)
  Matrix<Scalar> coeff;  // matching coefficients
  SchurUpdate<Scalar> update;
};

namespace detail {

// Subset update over a possibly transposed view; expands (pivots, coeff)
// by pivoting sampled Schur-complement columns.
template <class Scalar>
SetUpdResult<Scalar> set_upd_view(const SourceView<Scalar>& a, const IndexSet& pivots,
                                  const Matrix<Scalar>& coeff, const IndexSet& j_hat,
                                  const SrrConfig& cfg, double zero_tol) {
  const Index m = a.rows();
  const Index k = pivots.size();
  if (coeff.rows() != m - k || coeff.cols() != k)
    throw invalid_input("set_upd: coefficient shape does not match the pivot set");
  if (j_hat.empty()) throw invalid_input("set_upd: empty sample");
  j_hat.check_bounds(a.cols(), "set_upd");

  SetUpdResult<Scalar> out;
  out.update.l = j_hat;

  Matrix<Scalar> cols = a.cols_block(j_hat);  // m x b
  out.update.block_amax = cols.size() == 0 ? 0.0 : cols.cwiseAbs().maxCoeff();
  IndexSet comp = pivots.complement(m);
  Matrix<Scalar> s_cols = select_rows(cols, comp);
  if (k > 0) s_cols.noalias() -= coeff * select_rows(cols, pivots);
  out.update.schur_cols = s_cols;

  const double smax = s_cols.size() == 0 ? 0.0 : s_cols.cwiseAbs().maxCoeff();
  auto keep_unchanged = [&]() {
    out.update.no_update = true;
    out.pivots = pivots;
    out.coeff = coeff;
    return out;
  };
  if (s_cols.rows() == 0 || smax <= zero_tol) return keep_unchanged();

  SrrResult<Scalar> f = srr(s_cols, cfg);
  if (f.rank == 0) return keep_unchanged();

  // Split E on the Schur pivot positions and eliminate.
  Matrix<Scalar> e1 = select_rows(coeff, f.pivots);
  IndexSet comp_k = f.pivots.complement(m - k);
  Matrix<Scalar> e2 = select_rows(coeff, comp_k);
  out.update.e_hat = f.coeff;
  out.update.e_bar = e2 - f.coeff * e1;
  out.update.s22_cols = select_rows(s_cols, f.pivots);
  out.update.k = f.pivots;

  std::vector<Index> fresh(static_cast<std::size_t>(f.rank));
  for (Index t = 0; t < f.rank; ++t)
    fresh[static_cast<std::size_t>(t)] = comp[f.pivots[t]];
  out.update.i_hat = IndexSet(std::move(fresh));

  out.pivots = pivots.concat(out.update.i_hat);
  out.coeff.resize(m - k - f.rank, k + f.rank);
  out.coeff.leftCols(k) = out.update.e_bar;
  out.coeff.rightCols(f.rank) = out.update.e_hat;
  return out;
}

}  // namespace detail

/// Expand a row skeleton (pivots, coeff) of `src` by sampling the Schur
/// complement at the fresh columns j_hat (which must avoid the columns the
/// skeleton was built from). zero_tol is an absolute threshold declaring
/// the sample numerically zero.
template <class Scalar>
SetUpdResult<Scalar> set_upd(const MatrixSource<Scalar>& src, const IndexSet& pivots,
                             const Matrix<Scalar>& coeff, const IndexSet& j_hat,
                             const SrrConfig& cfg = {}, double zero_tol = 0.0) {
  return detail::set_upd_view(SourceView<Scalar>(src), pivots, coeff, j_hat, cfg,
                              zero_tol);
}

//
// The schemes.
//

enum class HanScheme { basic, update, aggressive };

template <class Scalar>
struct HanRun {
  LowRankApprox<Scalar> approx;
  HanTrace trace;
};

namespace detail {

template <class Scalar>
Matrix<Scalar> assemble_basis(Index rows, const IndexSet& pivots,
                              const Matrix<Scalar>& coeff) {
  Matrix<Scalar> u = Matrix<Scalar>::Zero(rows, pivots.size());
  for (Index j = 0; j < pivots.size(); ++j) u(pivots[j], j) = Scalar(1);
  IndexSet comp = pivots.complement(rows);
  for (Index i = 0; i < comp.size(); ++i) u.row(comp[i]) = coeff.row(i);
  return u;
}

template <class Scalar>
class HanEngine {
 public:
  HanEngine(const MatrixSource<Scalar>& src, const HanConfig& cfg, HanScheme scheme)
      : src_(src), view_(src), cfg_(cfg), scheme_(scheme), rng_(cfg.seed) {
    cfg_.validate();
  }

  HanRun<Scalar> run(bool effective_post_pass) {
    const Index m = src_.rows(), n = src_.cols();
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t evals0 = src_.eval_count();

    for (Index iter = 1; stop_ == HanStop::running; ++iter) {
      double theta = std::numeric_limits<double>::quiet_NaN();
      double phi = std::numeric_limits<double>::quiet_NaN();

      // Progressive sampling; the stepsize shrinks near saturation.
      const Index b_i = std::min<Index>(cfg_.b, n - j_.size());
      SampleResult samp =
          b_i > 0 ? sample_new(rng_, n, j_, b_i) : SampleResult{IndexSet{}, true};
      if (samp.indices.empty()) {
        stop_ = HanStop::saturated;
        break;
      }
      const IndexSet& j_hat = samp.indices;
      total_samples_ += j_hat.size();
      const IndexSet j_tilde = j_.concat(j_hat);
      const Index k_cols_prev = j_.size();
      const IndexSet i_prev = i_;

      // --- row side ---
      bool deficient = false;
      if (scheme_ == HanScheme::update && iter > 1) {
        auto upd = set_upd_view(view_, i_, e_, j_hat, cfg_.srr, zero_tol());
        note_amax(upd.update.block_amax);
        std::tie(theta, phi) =
            estimate_from_schur(upd.update, n, k_cols_prev, j_hat.size());
        i_ = upd.pivots;
        e_ = upd.coeff;
        i_hat_ = upd.update.i_hat;
      } else {
        Matrix<Scalar> cols_jt = src_.cols(j_tilde);
        if (cols_jt.size() > 0) note_amax(cols_jt.cwiseAbs().maxCoeff());
        if (scheme_ == HanScheme::aggressive && iter > 1) {
          // Estimate against the previous skeleton using the fresh columns
          // (already fetched as the trailing block of A(:,J~)).
          Matrix<Scalar> a_jhat = cols_jt.rightCols(j_hat.size());
          IndexSet comp_prev = i_prev.complement(m);
          Matrix<Scalar> s_cols = select_rows(a_jhat, comp_prev);
          s_cols.noalias() -= e_ * select_rows(a_jhat, i_prev);
          Matrix<Scalar> a11 = select_rows(cols_jt.leftCols(k_cols_prev), i_prev);
          std::tie(theta, phi) = estimate_plain(s_cols, a11, n, k_cols_prev);
        }
        SrrResult<Scalar> rf = srr(cols_jt, cfg_.srr);
        // Dependent sampled columns signal that the numerical rank is
        // reached. Under aggressive updates the accumulated J set itself
        // can carry near-dependencies, so additionally require the rank to
        // have stalled before treating this as convergence.
        deficient = rf.rank < j_tilde.size() &&
                    (scheme_ != HanScheme::aggressive || rf.rank <= i_prev.size());
        i_ = rf.pivots;
        e_ = rf.coeff;
        i_hat_ = i_.minus(i_prev);
      }

      // --- column side ---
      if (i_.empty()) {
        j_ = IndexSet{};
        f_.resize(n, 0);
      } else if (scheme_ == HanScheme::basic || iter == 1) {
        Matrix<Scalar> rows_i = src_.rows(i_);
        if (rows_i.size() > 0) note_amax(rows_i.cwiseAbs().maxCoeff());
        SrrResult<Scalar> cf = srr(Matrix<Scalar>(rows_i.transpose()), cfg_.srr);
        j_ = cf.pivots;
        f_ = cf.coeff;
        if (scheme_ == HanScheme::basic && !j_.empty()) {
          // Fresh estimation sample; these columns never join J.
          SampleResult est = sample_new(rng_, n, j_, std::min<Index>(cfg_.b, n - j_.size()));
          if (!est.indices.empty()) {
            Matrix<Scalar> cols_est = src_.cols(est.indices);
            IndexSet comp = i_.complement(m);
            Matrix<Scalar> s_cols = select_rows(cols_est, comp);
            s_cols.noalias() -= e_ * select_rows(cols_est, i_);
            Matrix<Scalar> a11 = select_cols(rows_i, j_);
            std::tie(theta, phi) = estimate_plain(s_cols, a11, n, j_.size());
          }
        }
      } else if (!i_hat_.empty()) {
        auto upd = set_upd_view(view_.transposed(), j_, f_, i_hat_, cfg_.srr, zero_tol());
        note_amax(upd.update.block_amax);
        j_ = upd.pivots;
        f_ = upd.coeff;
      }

      record(iter, theta, phi, evals0, t0);

      // Stop rules, checked in precedence order.
      if (!std::isnan(phi) && phi < cfg_.tau)
        ++hits_;
      else
        hits_ = 0;
      if (hits_ >= cfg_.consecutive_hits)
        stop_ = HanStop::tau_reached;
      else if (deficient)
        stop_ = HanStop::rank_deficient;
      else if (cfg_.max_rank > 0 && output_rank() >= cfg_.max_rank)
        stop_ = HanStop::max_rank;
      else if (cfg_.max_samples > 0 && total_samples_ >= cfg_.max_samples)
        stop_ = HanStop::max_samples;
      else if (i_hat_.empty())
        stop_ = HanStop::rows_unchanged;
      else if (i_.size() >= m || j_.size() >= n)
        stop_ = HanStop::exhausted;
    }

    trace_.stop = stop_;
    return HanRun<Scalar>{assemble(effective_post_pass), std::move(trace_)};
  }

 private:
  double zero_tol() const { return cfg_.schur_zero_rel * amax_; }
  void note_amax(double v) { amax_ = std::max(amax_, v); }

  // Spectral norm of an estimator block; subspace iteration once the block
  // is large enough that the dense oracle would dominate the iteration cost.
  static double block_norm2(const Matrix<Scalar>& m) {
    if (m.size() == 0) return 0.0;
    if (std::min(m.rows(), m.cols()) <= 64) return spectral_norm_dense(m);
    return spectral_norm_block_est(operator_from_dense(m), 4, 30, 0x5eedull);
  }

  Index output_rank() const {
    return scheme_ == HanScheme::aggressive ? i_.size() : j_.size();
  }

  std::pair<double, double> estimate_plain(const Matrix<Scalar>& s_cols,
                                           const Matrix<Scalar>& a11, Index n,
                                           Index k) const {
    const Index b = s_cols.cols();
    if (b == 0 || k >= n || a11.size() == 0)
      return {std::numeric_limits<double>::quiet_NaN(),
              std::numeric_limits<double>::quiet_NaN()};
    const double theta = estimate_theta(s_cols, n, k, b);
    double phi = std::numeric_limits<double>::quiet_NaN();
    const double denom = block_norm2(a11);
    if (denom > 0.0)
      phi = std::sqrt(static_cast<double>(n - k) / static_cast<double>(b)) *
            block_norm2(s_cols) / denom;
    return {theta, phi};
  }

  std::pair<double, double> estimate_from_schur(const SchurUpdate<Scalar>& upd, Index n,
                                                Index k, Index b) {
    if (b == 0 || k >= n || i_.empty() || j_.empty())
      return {std::numeric_limits<double>::quiet_NaN(),
              std::numeric_limits<double>::quiet_NaN()};
    // Pivot block of the skeleton the sample was drawn against.
    Matrix<Scalar> a11 = src_.block(i_, j_);
    const bool small_block = upd.schur_cols.rows() > cfg_.phi_small_block_threshold &&
                             upd.s22_cols.size() > 0;
    const Matrix<Scalar>& s = small_block ? upd.s22_cols : upd.schur_cols;
    const double theta = estimate_theta(upd.schur_cols, n, k, b);
    double phi = std::numeric_limits<double>::quiet_NaN();
    const double denom = block_norm2(a11);
    if (denom > 0.0)
      phi = std::sqrt(static_cast<double>(n - k) / static_cast<double>(b)) *
            block_norm2(s) / denom;
    return {theta, phi};
  }

  void record(Index iter, double theta, double phi, std::uint64_t evals0,
              std::chrono::steady_clock::time_point t0) {
    HanIterationRecord r;
    r.iteration = iter;
    r.total_samples = total_samples_;
    r.rank_rows = i_.size();
    r.rank_cols = j_.size();
    r.theta = theta;
    r.phi = phi;
    r.kernel_evals = src_.eval_count() - evals0;
    r.elapsed_ns = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now() - t0)
            .count());
    trace_.records.push_back(r);
  }

  LowRankApprox<Scalar> assemble(bool effective_post_pass) {
    const Index m = src_.rows(), n = src_.cols();
    if (scheme_ == HanScheme::aggressive) {
      return LowRankApprox<Scalar>::row_skeleton(i_, assemble_basis(m, i_, e_),
                                                 src_.rows(i_));
    }
    Matrix<Scalar> cols = j_.empty() ? Matrix<Scalar>(m, 0) : src_.cols(j_);
    if (effective_post_pass && !j_.empty()) {
      SrrResult<Scalar> rf = srr(cols, cfg_.srr);
      return LowRankApprox<Scalar>::row_skeleton(
          rf.pivots, skeleton_basis(m, rf), src_.rows(rf.pivots));
    }
    return LowRankApprox<Scalar>::col_skeleton(j_, std::move(cols),
                                               assemble_basis(n, j_, f_));
  }

  const MatrixSource<Scalar>& src_;
  SourceView<Scalar> view_;
  HanConfig cfg_;
  HanScheme scheme_;
  std::mt19937_64 rng_;

  IndexSet i_, j_, i_hat_;
  Matrix<Scalar> e_, f_;
  Index total_samples_ = 0;
  int hits_ = 0;
  double amax_ = 0.0;
  HanStop stop_ = HanStop::running;
  HanTrace trace_;
};

}  // namespace detail

/// Basic scheme: full alternating row/column pivoting each iteration, with
/// a fresh estimation sample for the stop rule.
template <class Scalar>
HanRun<Scalar> han_b(const MatrixSource<Scalar>& src, const HanConfig& cfg = {}) {
  return detail::HanEngine<Scalar>(src, cfg, HanScheme::basic).run(false);
}

/// Fast subset updates on both sides; |I| and |J| advance by the stepsize.
/// With `effective_post_pass`, one extra row pivot over A(:,J) turns the
/// output into a row skeleton.
template <class Scalar>
HanRun<Scalar> han_u(const MatrixSource<Scalar>& src, const HanConfig& cfg = {},
                     bool effective_post_pass = false) {
  return detail::HanEngine<Scalar>(src, cfg, HanScheme::update)
      .run(effective_post_pass);
}

/// Aggressive scheme: full row pivoting, column side expanded by subset
/// updates driven by the row-set change, so ranks can advance much faster
/// than the sample count.
template <class Scalar>
HanRun<Scalar> han_a(const MatrixSource<Scalar>& src, const HanConfig& cfg = {}) {
  return detail::HanEngine<Scalar>(src, cfg, HanScheme::aggressive).run(false);
}

}  // namespace han

#endif  // HAN_HAN_SCHEMES_HPP
