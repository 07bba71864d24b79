#ifndef HAN_TYPES_HPP
#define HAN_TYPES_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace han {

using Index = Eigen::Index;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;

template <class Scalar>
inline constexpr bool is_complex_v = Eigen::NumTraits<Scalar>::IsComplex != 0;

/// Thrown when inputs violate an operation's preconditions.
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a factorization or solve fails numerically.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what, Index detected_rank = -1)
      : std::runtime_error(what), rank(detected_rank) {}
  /// Rank detected before the failure, or -1 when not applicable.
  Index rank;
};

template <class Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

//
// Ordered, duplicate-free set of zero-based indices. The order is the
// discovery order of the producing algorithm (e.g. pivot order), which
// is significant and preserved by all operations here.
//
class IndexSet {
 public:
  IndexSet() = default;

  explicit IndexSet(std::vector<Index> indices) : idx_(std::move(indices)) {
    std::vector<Index> sorted = idx_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw invalid_input("IndexSet: duplicate index");
    if (!sorted.empty() && sorted.front() < 0)
      throw invalid_input("IndexSet: negative index");
  }

  static IndexSet iota(Index n) {
    std::vector<Index> v(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
    return IndexSet(std::move(v));
  }

  Index size() const { return static_cast<Index>(idx_.size()); }
  bool empty() const { return idx_.empty(); }
  Index operator[](Index i) const { return idx_[static_cast<std::size_t>(i)]; }
  const std::vector<Index>& indices() const { return idx_; }

  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }

  bool contains(Index i) const {
    return std::find(idx_.begin(), idx_.end(), i) != idx_.end();
  }

  void check_bounds(Index dim, const char* what) const {
    for (Index i : idx_)
      if (i < 0 || i >= dim)
        throw invalid_input(std::string(what) + ": index out of range");
  }

  /// Sorted complement within {0..universe-1}.
  IndexSet complement(Index universe) const {
    std::vector<char> in(static_cast<std::size_t>(universe), 0);
    for (Index i : idx_) {
      if (i < 0 || i >= universe)
        throw invalid_input("IndexSet::complement: index out of range");
      in[static_cast<std::size_t>(i)] = 1;
    }
    std::vector<Index> out;
    out.reserve(static_cast<std::size_t>(universe - size()));
    for (Index i = 0; i < universe; ++i)
      if (!in[static_cast<std::size_t>(i)]) out.push_back(i);
    return IndexSet(std::move(out));
  }

  /// Elements of *this not in other, preserving this order.
  IndexSet minus(const IndexSet& other) const {
    std::vector<Index> out;
    for (Index i : idx_)
      if (!other.contains(i)) out.push_back(i);
    return IndexSet(std::move(out));
  }

  /// Concatenation; throws if the sets overlap.
  IndexSet concat(const IndexSet& tail) const {
    std::vector<Index> out = idx_;
    out.insert(out.end(), tail.idx_.begin(), tail.idx_.end());
    return IndexSet(std::move(out));
  }

  /// Set equality, ignoring order.
  bool same_set(const IndexSet& other) const {
    if (size() != other.size()) return false;
    std::vector<Index> a = idx_, b = other.idx_;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
  }

  bool operator==(const IndexSet& other) const { return idx_ == other.idx_; }

 private:
  std::vector<Index> idx_;
};

/// Rows (or columns) of m selected by s, in s's order.
template <class Derived>
Matrix<typename Derived::Scalar> select_rows(const Eigen::MatrixBase<Derived>& m,
                                             const IndexSet& s) {
  Matrix<typename Derived::Scalar> out(s.size(), m.cols());
  for (Index i = 0; i < s.size(); ++i) out.row(i) = m.row(s[i]);
  return out;
}

template <class Derived>
Matrix<typename Derived::Scalar> select_cols(const Eigen::MatrixBase<Derived>& m,
                                             const IndexSet& s) {
  Matrix<typename Derived::Scalar> out(m.rows(), s.size());
  for (Index j = 0; j < s.size(); ++j) out.col(j) = m.col(s[j]);
  return out;
}

/// Unbiased draw from {0..bound-1} via rejection; independent of the
/// standard library's distribution implementations for reproducibility.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw invalid_input("uniform_below: bound must be positive");
  const std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % bound + 1) % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (rem != 0 && v > std::numeric_limits<std::uint64_t>::max() - rem);
  return v % bound;
}

/// Standard normal via Box-Muller on uniform_below draws (reproducible).
inline double standard_normal(std::mt19937_64& rng) {
  // 53-bit mantissa uniforms in (0,1].
  const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1p-53;
  const double u2 = static_cast<double>(rng() >> 11) * 0x1p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

template <class Scalar>
Scalar random_unit_scalar(std::mt19937_64& rng) {
  if constexpr (is_complex_v<Scalar>) {
    return Scalar(standard_normal(rng), standard_normal(rng));
  } else {
    return standard_normal(rng);
  }
}

template <class Scalar>
Matrix<Scalar> random_gaussian(Index rows, Index cols, std::mt19937_64& rng) {
  Matrix<Scalar> m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = random_unit_scalar<Scalar>(rng);
  return m;
}

}  // namespace han

#endif  // HAN_TYPES_HPP
