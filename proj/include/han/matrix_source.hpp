#ifndef HAN_MATRIX_SOURCE_HPP
#define HAN_MATRIX_SOURCE_HPP

#include <han/kernels.hpp>
#include <han/types.hpp>

#include <atomic>
#include <memory>
#include <variant>

namespace han {

inline constexpr std::size_t kDefaultMaterializeCap = std::size_t(1) << 26;

//
// Lazy m x n matrix accessed by entry, row block, or column block, so the
// sampling schemes touch only O((m+n) r) entries. Backings: an explicit
// dense matrix, a kernel evaluated over two point sets, or the upper-right
// corner block of a circulant given by its first-column table.
//
// Every entry access bumps a shared atomic counter; complexity claims in
// the tests are phrased in terms of this counter.
//
template <class Scalar>
class MatrixSource {
 public:
  static MatrixSource dense(Matrix<Scalar> a) {
    if (a.size() == 0) throw invalid_input("MatrixSource: empty dense backing");
    if (!all_finite(a)) throw invalid_input("MatrixSource: non-finite entry");
    MatrixSource s;
    s.rows_ = a.rows();
    s.cols_ = a.cols();
    s.backing_ = DenseB{std::move(a)};
    return s;
  }

  static MatrixSource kernel(KernelSpec spec, PointSet x, PointSet y,
                             bool complex_plane = false) {
    if (x.dim() != y.dim()) throw invalid_input("MatrixSource: dimension mismatch");
    if constexpr (!is_complex_v<Scalar>) {
      if (spec.complex_valued(complex_plane))
        throw invalid_input("MatrixSource: complex-valued kernel needs a complex scalar");
    }
    if (spec.kind == KernelKind::inv_diff || spec.kind == KernelKind::inv_diff_sq) {
      const bool ok_dims = x.dim() == 1 || (x.dim() == 2 && complex_plane);
      if (!ok_dims)
        throw invalid_input(
            "MatrixSource: difference kernel needs 1D points or 2D with the complex-plane flag");
    }
    if (spec.singular() && min_cross_distance(x, y) <= 0.0)
      throw invalid_input("MatrixSource: coincident cross points for a singular kernel");
    MatrixSource s;
    s.rows_ = x.size();
    s.cols_ = y.size();
    s.backing_ = KernelB{std::move(spec), std::move(x), std::move(y), complex_plane};
    return s;
  }

  /// n x n upper-right corner of the 2n x 2n circulant whose first column
  /// is `first_col`: entry(i,j) = first_col[(i - (j + n)) mod 2n].
  static MatrixSource circulant_corner(Vector<Scalar> first_col) {
    if (first_col.size() < 4 || first_col.size() % 2 != 0)
      throw invalid_input("MatrixSource: first column must have even length >= 4");
    if (!all_finite(first_col)) throw invalid_input("MatrixSource: non-finite entry");
    MatrixSource s;
    s.rows_ = s.cols_ = first_col.size() / 2;
    s.backing_ = CircB{std::move(first_col)};
    return s;
  }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  Scalar entry(Index i, Index j) const {
    check(i, j);
    evals_->fetch_add(1, std::memory_order_relaxed);
    return raw(i, j);
  }

  /// A(I, :), rows in I's order.
  Matrix<Scalar> rows(const IndexSet& is) const {
    is.check_bounds(rows_, "MatrixSource::rows");
    Matrix<Scalar> out(is.size(), cols_);
    for (Index i = 0; i < is.size(); ++i)
      for (Index j = 0; j < cols_; ++j) out(i, j) = raw(is[i], j);
    evals_->fetch_add(static_cast<std::uint64_t>(is.size()) *
                          static_cast<std::uint64_t>(cols_),
                      std::memory_order_relaxed);
    return out;
  }

  /// A(:, J), columns in J's order.
  Matrix<Scalar> cols(const IndexSet& js) const {
    js.check_bounds(cols_, "MatrixSource::cols");
    Matrix<Scalar> out(rows_, js.size());
    for (Index j = 0; j < js.size(); ++j)
      for (Index i = 0; i < rows_; ++i) out(i, j) = raw(i, js[j]);
    evals_->fetch_add(static_cast<std::uint64_t>(js.size()) *
                          static_cast<std::uint64_t>(rows_),
                      std::memory_order_relaxed);
    return out;
  }

  /// A(I, J).
  Matrix<Scalar> block(const IndexSet& is, const IndexSet& js) const {
    is.check_bounds(rows_, "MatrixSource::block");
    js.check_bounds(cols_, "MatrixSource::block");
    Matrix<Scalar> out(is.size(), js.size());
    for (Index j = 0; j < js.size(); ++j)
      for (Index i = 0; i < is.size(); ++i) out(i, j) = raw(is[i], js[j]);
    evals_->fetch_add(static_cast<std::uint64_t>(is.size()) *
                          static_cast<std::uint64_t>(js.size()),
                      std::memory_order_relaxed);
    return out;
  }

  /// Full dense matrix; test/oracle use only.
  Matrix<Scalar> materialize(std::size_t cap = kDefaultMaterializeCap) const {
    if (static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_) > cap)
      throw invalid_input("MatrixSource::materialize: cap exceeded");
    return rows(IndexSet::iota(rows_));
  }

  std::uint64_t eval_count() const { return evals_->load(std::memory_order_relaxed); }
  void reset_eval_count() const { evals_->store(0, std::memory_order_relaxed); }

 private:
  struct DenseB {
    Matrix<Scalar> a;
  };
  struct KernelB {
    KernelSpec spec;
    PointSet x, y;
    bool complex_plane;
  };
  struct CircB {
    Vector<Scalar> first_col;
  };

  MatrixSource() : evals_(std::make_shared<std::atomic<std::uint64_t>>(0)) {}

  void check(Index i, Index j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
      throw invalid_input("MatrixSource: index out of range");
  }

  Scalar raw(Index i, Index j) const {
    if (const auto* d = std::get_if<DenseB>(&backing_)) return d->a(i, j);
    if (const auto* k = std::get_if<KernelB>(&backing_))
      return detail::kernel_value<Scalar>(k->spec, k->x.pts.row(i), k->y.pts.row(j),
                                          k->complex_plane);
    const auto& c = std::get<CircB>(backing_);
    const Index n2 = c.first_col.size();
    Index d = (i - (j + rows_)) % n2;
    if (d < 0) d += n2;
    return c.first_col(d);
  }

  Index rows_ = 0, cols_ = 0;
  std::variant<DenseB, KernelB, CircB> backing_;
  std::shared_ptr<std::atomic<std::uint64_t>> evals_;
};

/// Row/column access with an optional transpose, so algorithms written for
/// row skeletons run unchanged on the transposed problem.
template <class Scalar>
class SourceView {
 public:
  explicit SourceView(const MatrixSource<Scalar>& src, bool transposed = false)
      : src_(&src), t_(transposed) {}

  Index rows() const { return t_ ? src_->cols() : src_->rows(); }
  Index cols() const { return t_ ? src_->rows() : src_->cols(); }

  Matrix<Scalar> rows_block(const IndexSet& is) const {
    if (t_) return src_->cols(is).transpose();
    return src_->rows(is);
  }

  Matrix<Scalar> cols_block(const IndexSet& js) const {
    if (t_) return src_->rows(js).transpose();
    return src_->cols(js);
  }

  Matrix<Scalar> block(const IndexSet& is, const IndexSet& js) const {
    if (t_) return src_->block(js, is).transpose();
    return src_->block(is, js);
  }

  SourceView transposed() const { return SourceView(*src_, !t_); }
  const MatrixSource<Scalar>& source() const { return *src_; }

 private:
  const MatrixSource<Scalar>* src_;
  bool t_;
};

}  // namespace han

#endif  // HAN_MATRIX_SOURCE_HPP
