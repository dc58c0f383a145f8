#pragma once

#include <gfr/active_set.hpp>
#include <gfr/types.hpp>

#include <Eigen/Core>
#include <Eigen/QR>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gfr {

enum class Method { SIS, ISIS, FR, GFR };

inline std::string_view to_string(Method m)
{
    switch (m) {
    case Method::SIS: return "sis";
    case Method::ISIS: return "isis";
    case Method::FR: return "fr";
    case Method::GFR: return "gfr";
    }
    return "?";
}

inline Method parse_method(std::string_view s)
{
    if (s == "sis" || s == "SIS") return Method::SIS;
    if (s == "isis" || s == "ISIS") return Method::ISIS;
    if (s == "fr" || s == "FR") return Method::FR;
    if (s == "gfr" || s == "GFR") return Method::GFR;
    throw InvalidInput("unknown method '" + std::string(s) + "'");
}

template <typename Scalar = double>
struct StepRecord {
    IndexList chosen;  // descending score, ties by ascending index
    Scalar ssr_after = 0;
    /// Score used to rank each chosen index: the SSR reduction against the
    /// previous model for FR/GFR, the marginal |X_j' r| for SIS/ISIS.
    std::vector<Scalar> gains;
    /// SSR reduction realized by each index during sequential orthogonalization.
    std::vector<Scalar> realized_gains;
    double elapsed = 0;  // wall seconds spent on this step
};

template <typename Scalar = double>
struct ScreeningPath {
    Method method = Method::GFR;
    Index J = 1;
    Index n = 0;
    Index p = 0;
    Scalar initial_ssr = 0;  // ||y||^2
    std::vector<StepRecord<Scalar>> steps;

    std::size_t num_steps() const { return steps.size(); }

    /// |M^(k)|; k = 0 is the null model.
    Index model_size(std::size_t k) const
    {
        Index s = 0;
        for (std::size_t i = 0; i < k; ++i)
            s += static_cast<Index>(steps[i].chosen.size());
        return s;
    }

    /// M^(k) in selection order.
    IndexList model_at(std::size_t k) const
    {
        IndexList out;
        for (std::size_t i = 0; i < k && i < steps.size(); ++i)
            out.insert(out.end(), steps[i].chosen.begin(), steps[i].chosen.end());
        return out;
    }

    Scalar ssr_at(std::size_t k) const { return k == 0 ? initial_ssr : steps[k - 1].ssr_after; }
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename Scalar>
struct ScoredIndex {
    Scalar score;
    Index index;
};

/// Strict weak order: larger score first, then smaller index.
template <typename Scalar>
bool ranks_before(const ScoredIndex<Scalar>& a, const ScoredIndex<Scalar>& b)
{
    if (a.score != b.score)
        return a.score > b.score;
    return a.index < b.index;
}

template <typename Scalar>
std::vector<ScoredIndex<Scalar>> top_k(std::vector<ScoredIndex<Scalar>> items, std::size_t k)
{
    k = std::min(k, items.size());
    std::partial_sort(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(k), items.end(),
                      ranks_before<Scalar>);
    items.resize(k);
    return items;
}

}  // namespace detail

/**
 * Greedy forward regression path.
 *
 * Step k adds the J unselected, non-degenerate columns with the largest SSR
 * reduction relative to M^(k-1) (all J scored against the same model).
 * Stops once |M| >= n - J + 1, after max_steps steps (default floor(n/J)),
 * when the SSR falls below 1e-12 ||y||^2, or when no usable candidate is
 * left. J = 1 is classical forward regression.
 */
template <typename DerivedX, typename DerivedY>
ScreeningPath<typename DerivedX::Scalar> gfr_path(const Eigen::MatrixBase<DerivedX>& X,
                                                  const Eigen::MatrixBase<DerivedY>& y, Index J,
                                                  std::optional<Index> max_steps = std::nullopt)
{
    using Scalar = typename DerivedX::Scalar;
    if (X.rows() < 1 || X.cols() < 1)
        throw InvalidInput("empty design matrix");
    const Index n = X.rows();
    const Index p = X.cols();
    if (J < 1 || J > n)
        throw InvalidInput("J must satisfy 1 <= J <= n (J=" + std::to_string(J) + ", n=" + std::to_string(n) + ")");
    const Index limit = max_steps.value_or(n / J);
    if (limit < 0)
        throw InvalidInput("max_steps must be non-negative");

    ScreeningPath<Scalar> path;
    path.method = Method::GFR;
    path.J = J;
    path.n = n;
    path.p = p;

    auto t0 = detail::Clock::now();
    ActiveSetState<Scalar> state = init_state(X, y);
    path.initial_ssr = state.ssr();
    const Scalar ssr_floor = Scalar(1e-12) * path.initial_ssr;

    std::vector<detail::ScoredIndex<Scalar>> candidates;
    candidates.reserve(static_cast<std::size_t>(p));
    for (Index k = 0; k < limit; ++k) {
        const Index size = static_cast<Index>(state.selected().size());
        if (size >= n - J + 1 || state.ssr() <= ssr_floor)
            break;

        candidates.clear();
        for (Index j = 0; j < p; ++j) {
            if (state.is_selected(j))
                continue;
            const auto g = candidate_gain(state, j);
            if (!g.degenerate)
                candidates.push_back({g.gain, j});
        }
        if (candidates.empty())
            break;

        const auto picked = detail::top_k(std::move(candidates), static_cast<std::size_t>(std::min(J, n - size)));
        StepRecord<Scalar> step;
        for (const auto& c : picked) {
            step.chosen.push_back(c.index);
            step.gains.push_back(c.score);
        }
        step.realized_gains = add_columns(state, step.chosen);
        step.ssr_after = state.ssr();
        step.elapsed = detail::seconds_since(t0);
        t0 = detail::Clock::now();
        path.steps.push_back(std::move(step));
    }
    return path;
}

template <typename DerivedX, typename DerivedY>
ScreeningPath<typename DerivedX::Scalar> fr_path(const Eigen::MatrixBase<DerivedX>& X,
                                                 const Eigen::MatrixBase<DerivedY>& y,
                                                 std::optional<Index> max_steps = std::nullopt)
{
    auto path = gfr_path(X, y, 1, max_steps);
    path.method = Method::FR;
    return path;
}

/// All columns ordered by |X_j' y| descending, ties by ascending index.
template <typename DerivedX, typename DerivedY>
IndexList sis_rank(const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y)
{
    if (y.size() != X.rows())
        throw InvalidInput("response length does not match design rows");
    using Scalar = typename DerivedX::Scalar;
    const Vector<Scalar> score = (X.transpose() * y).cwiseAbs();
    IndexList order(static_cast<std::size_t>(X.cols()));
    std::iota(order.begin(), order.end(), Index(0));
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return score(a) > score(b); });
    return order;
}

/// floor(n / log n), the customary independence-screening model size.
inline Index default_sis_size(Index n)
{
    if (n < 2)
        throw InvalidInput("default screening size needs n >= 2");
    return static_cast<Index>(std::floor(static_cast<double>(n) / std::log(static_cast<double>(n))));
}

/// floor(log n - 1), at least one.
inline Index default_isis_steps(Index n)
{
    if (n < 2)
        throw InvalidInput("default ISIS schedule needs n >= 2");
    return std::max<Index>(1, static_cast<Index>(std::floor(std::log(static_cast<double>(n)) - 1.0)));
}

template <typename DerivedX, typename DerivedY>
IndexList sis_select(const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y,
                     std::optional<Index> d = std::nullopt)
{
    const Index size = d.value_or(default_sis_size(X.rows()));
    if (size < 1 || size > X.cols())
        throw InvalidInput("SIS size must satisfy 1 <= d <= p");
    IndexList rank = sis_rank(X, y);
    rank.resize(static_cast<std::size_t>(size));
    return rank;
}

/// ||Q_M y||^2 by a minimum-norm least-squares fit on the listed columns.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar refit_ssr(const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y,
                                    const IndexList& columns)
{
    using Scalar = typename DerivedX::Scalar;
    if (columns.empty())
        return y.squaredNorm();
    Matrix<Scalar> sub(X.rows(), static_cast<Index>(columns.size()));
    for (std::size_t i = 0; i < columns.size(); ++i)
        sub.col(static_cast<Index>(i)) = X.col(columns[i]);
    const Vector<Scalar> coef = sub.completeOrthogonalDecomposition().solve(y);
    return (y - sub * coef).squaredNorm();
}

/// Independence screening as a one-step path of size d.
template <typename DerivedX, typename DerivedY>
ScreeningPath<typename DerivedX::Scalar> sis_path(const Eigen::MatrixBase<DerivedX>& X,
                                                  const Eigen::MatrixBase<DerivedY>& y,
                                                  std::optional<Index> d = std::nullopt)
{
    using Scalar = typename DerivedX::Scalar;
    const auto t0 = detail::Clock::now();
    ScreeningPath<Scalar> path;
    path.method = Method::SIS;
    path.n = X.rows();
    path.p = X.cols();
    path.initial_ssr = y.squaredNorm();

    StepRecord<Scalar> step;
    step.chosen = sis_select(X, y, d);
    path.J = static_cast<Index>(step.chosen.size());
    const Vector<Scalar> score = (X.transpose() * y).cwiseAbs();
    for (Index j : step.chosen)
        step.gains.push_back(score(j));
    if (path.J <= path.n) {
        ActiveSetState<Scalar> state = init_state(X, y);
        step.realized_gains = add_columns(state, step.chosen);
        step.ssr_after = state.ssr();
    } else {
        step.ssr_after = refit_ssr(X, y, step.chosen);
    }
    step.elapsed = detail::seconds_since(t0);
    path.steps.push_back(std::move(step));
    return path;
}

/**
 * Iterative independence screening with residual re-ranking.
 *
 * Stage 1 is SIS on y. Every later stage fits least squares on everything
 * selected so far and adds the per_step unselected columns with the largest
 * |X_j' r|, r being the current residual.
 */
template <typename DerivedX, typename DerivedY>
ScreeningPath<typename DerivedX::Scalar> isis_path(const Eigen::MatrixBase<DerivedX>& X,
                                                   const Eigen::MatrixBase<DerivedY>& y,
                                                   std::optional<Index> steps = std::nullopt,
                                                   std::optional<Index> per_step = std::nullopt)
{
    using Scalar = typename DerivedX::Scalar;
    const Index n = X.rows();
    const Index p = X.cols();
    const Index num_steps = steps.value_or(default_isis_steps(n));
    const Index size = per_step.value_or(default_sis_size(n));
    if (num_steps < 1 || size < 1)
        throw InvalidInput("ISIS steps and per-step size must be positive");
    if (num_steps * size > p)
        throw InvalidInput("ISIS would select more variables than there are columns");
    if (num_steps * size > n)
        throw InvalidInput("ISIS would select more variables than there are observations");

    auto t0 = detail::Clock::now();
    ScreeningPath<Scalar> path;
    path.method = Method::ISIS;
    path.J = size;
    path.n = n;
    path.p = p;
    ActiveSetState<Scalar> state = init_state(X, y);
    path.initial_ssr = state.ssr();

    std::vector<detail::ScoredIndex<Scalar>> candidates;
    for (Index k = 0; k < num_steps; ++k) {
        const Vector<Scalar> score = (X.transpose() * state.residual()).cwiseAbs();
        candidates.clear();
        for (Index j = 0; j < p; ++j)
            if (!state.is_selected(j))
                candidates.push_back({score(j), j});
        const auto picked = detail::top_k(candidates, static_cast<std::size_t>(size));

        StepRecord<Scalar> step;
        for (const auto& c : picked) {
            step.chosen.push_back(c.index);
            step.gains.push_back(c.score);
        }
        step.realized_gains = add_columns(state, step.chosen);
        step.ssr_after = state.ssr();
        step.elapsed = detail::seconds_since(t0);
        t0 = detail::Clock::now();
        path.steps.push_back(std::move(step));
    }
    return path;
}

/// Dispatch on method; J applies to GFR only (FR forces 1), d to SIS.
struct PathOptions {
    Index J = 1;
    std::optional<Index> max_steps;
    std::optional<Index> sis_size;
    std::optional<Index> isis_steps;
    std::optional<Index> isis_per_step;
};

template <typename DerivedX, typename DerivedY>
ScreeningPath<typename DerivedX::Scalar> screening_path(const Eigen::MatrixBase<DerivedX>& X,
                                                        const Eigen::MatrixBase<DerivedY>& y, Method method,
                                                        const PathOptions& opt = {})
{
    switch (method) {
    case Method::SIS: return sis_path(X, y, opt.sis_size);
    case Method::ISIS: return isis_path(X, y, opt.isis_steps, opt.isis_per_step);
    case Method::FR: return fr_path(X, y, opt.max_steps);
    case Method::GFR: return gfr_path(X, y, opt.J, opt.max_steps);
    }
    throw InvalidInput("unknown method");
}

}  // namespace gfr
