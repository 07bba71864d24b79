#ifndef HAN_KERNELS_HPP
#define HAN_KERNELS_HPP

#include <han/types.hpp>

#include <cmath>
#include <optional>

namespace han {

/// Data points, one per row.
struct PointSet {
  Eigen::MatrixXd pts;

  PointSet() = default;
  explicit PointSet(Eigen::MatrixXd p) : pts(std::move(p)) {
    if (pts.rows() == 0 || pts.cols() == 0)
      throw invalid_input("PointSet: empty");
    if (!pts.allFinite()) throw invalid_input("PointSet: non-finite coordinate");
  }

  Index size() const { return pts.rows(); }
  Index dim() const { return pts.cols(); }
  Eigen::RowVectorXd point(Index i) const { return pts.row(i); }
};

enum class KernelKind {
  inv_diff,                // 1/(x-y)
  inv_diff_sq,             // 1/(x-y)^2
  inv_dist,                // 1/|x-y|
  sqrt_dist_plus1,         // sqrt(|x-y| + 1)
  inv_sqrt_distsq_plus1,   // 1/sqrt(|x-y|^2 + 1)
  exp_dist,                // exp(-|x-y|)
  gaussian,                // exp(-alpha |x-y|^2)
  log_dist,                // log|x-y|
  tan_dot,                 // tan(x.y + 1), real dot product in any dimension
  gaussian_sigma,          // exp(-|x-y|^2 / sigma^2)
  sqrt_scaled_plus1,       // sqrt(|x-y|^2 / sigma^2 + 1)
};

struct KernelSpec {
  KernelKind kind = KernelKind::inv_dist;
  double param = 0.0;  // alpha for gaussian, sigma for the *_sigma kinds

  KernelSpec() = default;
  KernelSpec(KernelKind k, double p = 0.0) : kind(k), param(p) {
    if (needs_param() && !(param > 0.0))
      throw invalid_input("KernelSpec: parameter must be positive for " + name());
  }

  bool needs_param() const {
    return kind == KernelKind::gaussian || kind == KernelKind::gaussian_sigma ||
           kind == KernelKind::sqrt_scaled_plus1;
  }

  /// Kernels undefined at coincident points.
  bool singular() const {
    return kind == KernelKind::inv_diff || kind == KernelKind::inv_diff_sq ||
           kind == KernelKind::inv_dist || kind == KernelKind::log_dist;
  }

  /// True when evaluations are complex-valued (2D points on the complex
  /// plane fed to a difference kernel).
  bool complex_valued(bool complex_plane) const {
    return complex_plane &&
           (kind == KernelKind::inv_diff || kind == KernelKind::inv_diff_sq);
  }

  std::string name() const {
    switch (kind) {
      case KernelKind::inv_diff: return "invdiff";
      case KernelKind::inv_diff_sq: return "invdiffsq";
      case KernelKind::inv_dist: return "invdist";
      case KernelKind::sqrt_dist_plus1: return "sqrtdist1";
      case KernelKind::inv_sqrt_distsq_plus1: return "invsqrtdistsq1";
      case KernelKind::exp_dist: return "expdist";
      case KernelKind::gaussian: return "gaussian";
      case KernelKind::log_dist: return "logdist";
      case KernelKind::tan_dot: return "tandot";
      case KernelKind::gaussian_sigma: return "gaussian-sigma";
      case KernelKind::sqrt_scaled_plus1: return "sqrtscaled1";
    }
    return "?";
  }

  static std::optional<KernelSpec> parse(const std::string& text) {
    std::string head = text;
    double p = 0.0;
    if (auto pos = text.find(':'); pos != std::string::npos) {
      head = text.substr(0, pos);
      try {
        p = std::stod(text.substr(pos + 1));
      } catch (...) {
        return std::nullopt;
      }
    }
    const std::pair<const char*, KernelKind> table[] = {
        {"invdiff", KernelKind::inv_diff},
        {"invdiffsq", KernelKind::inv_diff_sq},
        {"invdist", KernelKind::inv_dist},
        {"sqrtdist1", KernelKind::sqrt_dist_plus1},
        {"invsqrtdistsq1", KernelKind::inv_sqrt_distsq_plus1},
        {"expdist", KernelKind::exp_dist},
        {"gaussian", KernelKind::gaussian},
        {"logdist", KernelKind::log_dist},
        {"tandot", KernelKind::tan_dot},
        {"gaussian-sigma", KernelKind::gaussian_sigma},
        {"sqrtscaled1", KernelKind::sqrt_scaled_plus1},
    };
    for (auto& [n, k] : table)
      if (head == n) {
        try {
          return KernelSpec(k, p);
        } catch (const invalid_input&) {
          return std::nullopt;
        }
      }
    return std::nullopt;
  }
};

namespace detail {

template <class Scalar, class DX, class DY>
Scalar kernel_value(const KernelSpec& spec, const Eigen::MatrixBase<DX>& x,
                    const Eigen::MatrixBase<DY>& y, bool complex_plane) {
  const double r2 = (x - y).squaredNorm();
  switch (spec.kind) {
    case KernelKind::inv_diff:
    case KernelKind::inv_diff_sq: {
      if (r2 == 0.0)
        throw invalid_input("eval_kernel: coincident points for a singular kernel");
      if constexpr (is_complex_v<Scalar>) {
        if (!(complex_plane && x.size() == 2) && x.size() != 1)
          throw invalid_input("eval_kernel: difference kernel needs 1D or complex-plane 2D points");
        const Complex d = x.size() == 2 ? Complex(x[0] - y[0], x[1] - y[1])
                                        : Complex(x[0] - y[0], 0.0);
        return spec.kind == KernelKind::inv_diff ? Scalar(1.0) / d
                                                 : Scalar(1.0) / (d * d);
      } else {
        if (x.size() != 1)
          throw invalid_input("eval_kernel: real difference kernel needs 1D points");
        const double d = x[0] - y[0];
        return spec.kind == KernelKind::inv_diff ? 1.0 / d : 1.0 / (d * d);
      }
    }
    case KernelKind::inv_dist:
      if (r2 == 0.0)
        throw invalid_input("eval_kernel: coincident points for a singular kernel");
      return Scalar(1.0 / std::sqrt(r2));
    case KernelKind::sqrt_dist_plus1:
      return Scalar(std::sqrt(std::sqrt(r2) + 1.0));
    case KernelKind::inv_sqrt_distsq_plus1:
      return Scalar(1.0 / std::sqrt(r2 + 1.0));
    case KernelKind::exp_dist:
      return Scalar(std::exp(-std::sqrt(r2)));
    case KernelKind::gaussian:
      return Scalar(std::exp(-spec.param * r2));
    case KernelKind::log_dist:
      if (r2 == 0.0)
        throw invalid_input("eval_kernel: coincident points for a singular kernel");
      return Scalar(0.5 * std::log(r2));
    case KernelKind::tan_dot:
      return Scalar(std::tan(x.dot(y) + 1.0));
    case KernelKind::gaussian_sigma:
      return Scalar(std::exp(-r2 / (spec.param * spec.param)));
    case KernelKind::sqrt_scaled_plus1:
      return Scalar(std::sqrt(r2 / (spec.param * spec.param) + 1.0));
  }
  throw invalid_input("eval_kernel: unknown kernel");
}

}  // namespace detail

/// Evaluate kappa(x, y). With complex_plane set and 2D points, the
/// difference kernels treat x - y as a complex number; distance kernels
/// are unaffected (|x - y| is the modulus either way).
template <class Scalar>
Scalar eval_kernel(const KernelSpec& spec, const Eigen::RowVectorXd& x,
                   const Eigen::RowVectorXd& y, bool complex_plane = false) {
  if (x.size() != y.size()) throw invalid_input("eval_kernel: dimension mismatch");
  if constexpr (!is_complex_v<Scalar>) {
    if (spec.complex_valued(complex_plane))
      throw invalid_input("eval_kernel: kernel is complex-valued; use a complex scalar");
  }
  return detail::kernel_value<Scalar>(spec, x, y, complex_plane);
}

/// Smallest distance between any x-point and any y-point.
inline double min_cross_distance(const PointSet& x, const PointSet& y) {
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < x.size(); ++i) {
    const auto xi = x.pts.row(i);
    for (Index j = 0; j < y.size(); ++j) {
      const double d2 = (xi - y.pts.row(j)).squaredNorm();
      if (d2 < best) best = d2;
    }
  }
  return std::sqrt(best);
}

}  // namespace han

#endif  // HAN_KERNELS_HPP
