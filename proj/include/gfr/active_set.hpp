#pragma once

#include <gfr/types.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <string>
#include <vector>

namespace gfr {

/// Relative threshold on ||Q_M X_j||^2 / ||X_j||^2 below which a column is
/// treated as lying in the span of the current model.
inline constexpr double kDegeneracyTol = 1e-10;

template <typename Scalar>
struct CandidateGain {
    Index index = 0;
    Scalar gain = 0;  // |X_j' Q_M y|^2 / ||Q_M X_j||^2
    bool degenerate = false;
};

/**
 * Incremental projection state for a nested sequence of least-squares models.
 *
 * Holds an orthonormal basis of span{X_M}, the residual Q_M y, and every
 * candidate column residualized against the basis (Q_M X_j). Adding a block
 * of b columns costs one O(n p b) pass over the residualized columns; the
 * per-candidate SSR reduction is then an O(1) lookup.
 *
 * Columns in the model are "consumed": their residualized copies are no
 * longer maintained and their cached norms read as zero.
 */
template <typename Scalar = double>
class ActiveSetState {
public:
    using MatrixType = Matrix<Scalar>;
    using VectorType = Vector<Scalar>;

    Index n() const { return residual_.size(); }
    Index p() const { return resid_columns_.cols(); }
    Index rank() const { return rank_; }

    const IndexList& selected() const { return selected_; }
    bool is_selected(Index j) const { return consumed_[static_cast<std::size_t>(j)]; }

    /// n x rank matrix with orthonormal columns spanning the selected columns.
    auto basis() const { return basis_.leftCols(rank_); }

    const VectorType& residual() const { return residual_; }
    const MatrixType& resid_columns() const { return resid_columns_; }
    const VectorType& resid_norms_sq() const { return resid_norms_sq_; }
    const VectorType& column_norms_sq() const { return column_norms_sq_; }
    /// Cached X_j' Q_M y (equal to (Q_M X_j)' Q_M y).
    const VectorType& resid_inner() const { return resid_inner_; }
    Scalar ssr() const { return ssr_; }

    template <typename DerivedX, typename DerivedY>
    friend ActiveSetState<typename DerivedX::Scalar> init_state(const Eigen::MatrixBase<DerivedX>& X,
                                                                const Eigen::MatrixBase<DerivedY>& y);

    template <typename S>
    friend std::vector<S> add_columns(ActiveSetState<S>& state, const IndexList& indices);

private:
    IndexList selected_;
    std::vector<bool> consumed_;
    MatrixType basis_;
    Index rank_ = 0;
    VectorType residual_;
    MatrixType resid_columns_;
    VectorType resid_norms_sq_;
    VectorType column_norms_sq_;
    VectorType resid_inner_;
    Scalar ssr_ = 0;
};

/// Null-model state: residual = y, resid_columns = X.
template <typename DerivedX, typename DerivedY>
ActiveSetState<typename DerivedX::Scalar> init_state(const Eigen::MatrixBase<DerivedX>& X,
                                                     const Eigen::MatrixBase<DerivedY>& y)
{
    using Scalar = typename DerivedX::Scalar;
    if (X.rows() < 1 || X.cols() < 1)
        throw InvalidInput("design matrix must have at least one row and one column");
    if (y.size() != X.rows())
        throw InvalidInput("response length " + std::to_string(y.size()) + " does not match design rows " +
                           std::to_string(X.rows()));
    if (!X.allFinite() || !y.allFinite())
        throw InvalidInput("design matrix and response must be finite");

    ActiveSetState<Scalar> state;
    const Index n = X.rows();
    const Index p = X.cols();
    state.consumed_.assign(static_cast<std::size_t>(p), false);
    state.basis_.resize(n, n);
    state.residual_ = y;
    state.resid_columns_ = X;
    state.column_norms_sq_ = X.colwise().squaredNorm().transpose();
    state.resid_norms_sq_ = state.column_norms_sq_;
    state.resid_inner_.noalias() = X.transpose() * y;
    state.ssr_ = y.squaredNorm();
    return state;
}

template <typename Scalar>
bool is_degenerate_norm(Scalar resid_norm_sq, Scalar column_norm_sq)
{
    return !(resid_norm_sq > static_cast<Scalar>(kDegeneracyTol) * column_norm_sq);
}

/// SSR reduction from adding column j alone to the current model.
template <typename Scalar>
CandidateGain<Scalar> candidate_gain(const ActiveSetState<Scalar>& state, Index j)
{
    if (j < 0 || j >= state.p())
        throw InvalidInput("column index " + std::to_string(j) + " out of range");
    if (state.is_selected(j))
        throw InvalidInput("column " + std::to_string(j) + " is already in the model");

    CandidateGain<Scalar> out;
    out.index = j;
    const Scalar d = state.resid_norms_sq()(j);
    if (is_degenerate_norm(d, state.column_norms_sq()(j))) {
        out.degenerate = true;
        return out;
    }
    const Scalar c = state.resid_inner()(j);
    out.gain = c * c / d;
    return out;
}

/**
 * Appends `indices` to the model in order.
 *
 * Each residualized column is orthogonalized against the vectors accepted
 * earlier in the same call (modified Gram-Schmidt), then once more against
 * the whole basis. Columns whose residual is degenerate join the selected
 * list without contributing a basis vector.
 *
 * Returns the SSR reduction realized by each index, in the order given.
 */
template <typename Scalar>
std::vector<Scalar> add_columns(ActiveSetState<Scalar>& state, const IndexList& indices)
{
    using VectorType = Vector<Scalar>;
    const Index n = state.n();
    const Index p = state.p();

    for (std::size_t t = 0; t < indices.size(); ++t) {
        const Index j = indices[t];
        if (j < 0 || j >= p)
            throw InvalidInput("column index " + std::to_string(j) + " out of range");
        if (state.is_selected(j) || std::find(indices.begin(), indices.begin() + t, j) != indices.begin() + t)
            throw InvalidInput("column " + std::to_string(j) + " is already in the model");
    }
    if (static_cast<Index>(state.selected_.size() + indices.size()) > n)
        throw InvalidInput("model size would exceed the number of observations");

    std::vector<Scalar> realized(indices.size(), Scalar(0));
    const Index block_start = state.rank_;
    VectorType w(n);

    for (std::size_t t = 0; t < indices.size(); ++t) {
        const Index j = indices[t];
        state.selected_.push_back(j);
        state.consumed_[static_cast<std::size_t>(j)] = true;

        w = state.resid_columns_.col(j);
        for (Index b = block_start; b < state.rank_; ++b)
            w -= state.basis_.col(b).dot(w) * state.basis_.col(b);
        if (is_degenerate_norm(w.squaredNorm(), state.column_norms_sq_(j)) || state.rank_ == n)
            continue;
        // reorthogonalization
        for (Index b = 0; b < state.rank_; ++b)
            w -= state.basis_.col(b).dot(w) * state.basis_.col(b);
        w.normalize();

        state.basis_.col(state.rank_) = w;
        ++state.rank_;
        const Scalar coef = w.dot(state.residual_);
        realized[t] = coef * coef;
        state.residual_ -= coef * w;
    }

    const auto block = state.basis_.middleCols(block_start, state.rank_ - block_start);
    VectorType proj(block.cols());
    for (Index j = 0; j < p; ++j) {
        if (state.consumed_[static_cast<std::size_t>(j)]) {
            state.resid_norms_sq_(j) = 0;
            state.resid_inner_(j) = 0;
            continue;
        }
        auto col = state.resid_columns_.col(j);
        if (block.cols() > 0) {
            proj.noalias() = block.transpose() * col;
            col.noalias() -= block * proj;
        }
        state.resid_norms_sq_(j) = col.squaredNorm();
        state.resid_inner_(j) = col.dot(state.residual_);
    }

    state.ssr_ = state.residual_.squaredNorm();
    return realized;
}

template <typename Scalar>
Scalar sum_squared_residuals(const ActiveSetState<Scalar>& state)
{
    return state.ssr();
}

}  // namespace gfr
