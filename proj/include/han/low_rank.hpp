#ifndef HAN_LOW_RANK_HPP
#define HAN_LOW_RANK_HPP

#include <han/types.hpp>

#include <variant>

namespace han {

//
// Low-rank approximations built from actual rows/columns of the target:
//
//   row skeleton     A ~ U A(I,:)        U carries unit rows at I
//   column skeleton  A ~ A(:,J) V^T      V carries unit rows at J
//   CUR              A ~ A(:,J) W A(I,:) W a pseudoinverse of A(I,J)
//
// The skeleton blocks are stored, so a value is self-contained.
//
template <class Scalar>
class LowRankApprox {
 public:
  enum class Form { row_skeleton, col_skeleton, cur };

  struct RowSkeleton {
    IndexSet pivots;        // I
    Matrix<Scalar> basis;   // U, m x k
    Matrix<Scalar> rows;    // A(I,:), k x n
  };
  struct ColSkeleton {
    IndexSet pivots;        // J
    Matrix<Scalar> cols;    // A(:,J), m x k
    Matrix<Scalar> basis;   // V, n x k
  };
  struct Cur {
    IndexSet row_pivots;    // I
    IndexSet col_pivots;    // J
    Matrix<Scalar> cols;    // A(:,J), m x s
    Matrix<Scalar> core;    // pseudoinverse of A(I,J), s x s
    Matrix<Scalar> rows;    // A(I,:), s x n
  };

  static LowRankApprox row_skeleton(IndexSet pivots, Matrix<Scalar> basis,
                                    Matrix<Scalar> rows) {
    if (basis.cols() != pivots.size() || rows.rows() != pivots.size())
      throw invalid_input("LowRankApprox: inconsistent row skeleton");
    LowRankApprox a;
    a.m_ = basis.rows();
    a.n_ = rows.cols();
    a.rank_ = pivots.size();
    a.form_ = RowSkeleton{std::move(pivots), std::move(basis), std::move(rows)};
    return a;
  }

  static LowRankApprox col_skeleton(IndexSet pivots, Matrix<Scalar> cols,
                                    Matrix<Scalar> basis) {
    if (basis.cols() != pivots.size() || cols.cols() != pivots.size())
      throw invalid_input("LowRankApprox: inconsistent column skeleton");
    LowRankApprox a;
    a.m_ = cols.rows();
    a.n_ = basis.rows();
    a.rank_ = pivots.size();
    a.form_ = ColSkeleton{std::move(pivots), std::move(cols), std::move(basis)};
    return a;
  }

  static LowRankApprox cur(IndexSet row_pivots, IndexSet col_pivots,
                           Matrix<Scalar> cols, Matrix<Scalar> core,
                           Matrix<Scalar> rows) {
    if (cols.cols() != col_pivots.size() || rows.rows() != row_pivots.size() ||
        core.rows() != col_pivots.size() || core.cols() != row_pivots.size())
      throw invalid_input("LowRankApprox: inconsistent CUR blocks");
    LowRankApprox a;
    a.m_ = cols.rows();
    a.n_ = rows.cols();
    a.rank_ = std::min(row_pivots.size(), col_pivots.size());
    a.form_ = Cur{std::move(row_pivots), std::move(col_pivots), std::move(cols),
                  std::move(core), std::move(rows)};
    return a;
  }

  Index rows() const { return m_; }
  Index cols() const { return n_; }
  Index rank() const { return rank_; }

  Form form() const {
    if (std::holds_alternative<RowSkeleton>(form_)) return Form::row_skeleton;
    if (std::holds_alternative<ColSkeleton>(form_)) return Form::col_skeleton;
    return Form::cur;
  }

  const RowSkeleton& as_row_skeleton() const { return std::get<RowSkeleton>(form_); }
  const ColSkeleton& as_col_skeleton() const { return std::get<ColSkeleton>(form_); }
  const Cur& as_cur() const { return std::get<Cur>(form_); }

  /// Row index set (empty for pure column skeletons) in pivot order.
  IndexSet row_set() const {
    if (const auto* r = std::get_if<RowSkeleton>(&form_)) return r->pivots;
    if (const auto* c = std::get_if<Cur>(&form_)) return c->row_pivots;
    return IndexSet{};
  }

  IndexSet col_set() const {
    if (const auto* c = std::get_if<ColSkeleton>(&form_)) return c->pivots;
    if (const auto* c = std::get_if<Cur>(&form_)) return c->col_pivots;
    return IndexSet{};
  }

  Matrix<Scalar> apply(const Matrix<Scalar>& x) const {
    if (x.rows() != n_) throw invalid_input("LowRankApprox::apply: dimension mismatch");
    if (const auto* r = std::get_if<RowSkeleton>(&form_))
      return r->basis * (r->rows * x);
    if (const auto* c = std::get_if<ColSkeleton>(&form_))
      return c->cols * (c->basis.transpose() * x);
    const auto& u = std::get<Cur>(form_);
    return u.cols * (u.core * (u.rows * x));
  }

  Matrix<Scalar> apply_adjoint(const Matrix<Scalar>& x) const {
    if (x.rows() != m_)
      throw invalid_input("LowRankApprox::apply_adjoint: dimension mismatch");
    if (const auto* r = std::get_if<RowSkeleton>(&form_))
      return r->rows.adjoint() * (r->basis.adjoint() * x);
    if (const auto* c = std::get_if<ColSkeleton>(&form_))
      return c->basis.conjugate() * (c->cols.adjoint() * x);
    const auto& u = std::get<Cur>(form_);
    return u.rows.adjoint() * (u.core.adjoint() * (u.cols.adjoint() * x));
  }

  Matrix<Scalar> to_dense() const {
    if (const auto* r = std::get_if<RowSkeleton>(&form_)) return r->basis * r->rows;
    if (const auto* c = std::get_if<ColSkeleton>(&form_))
      return c->cols * c->basis.transpose();
    const auto& u = std::get<Cur>(form_);
    return u.cols * u.core * u.rows;
  }

 private:
  LowRankApprox() = default;
  Index m_ = 0, n_ = 0, rank_ = 0;
  std::variant<RowSkeleton, ColSkeleton, Cur> form_;
};

}  // namespace han

#endif  // HAN_LOW_RANK_HPP
