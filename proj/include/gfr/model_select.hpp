#pragma once

#include <gfr/screening.hpp>
#include <gfr/types.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace gfr {

/// Relative floor applied to SSR before taking its log.
inline constexpr double kSsrFloor = 1e-12;

template <typename Scalar = double>
struct BicTrace {
    std::vector<Scalar> values;  // BIC(k), k = 0..K
    std::size_t k_hat = 0;       // first local minimum: BIC(k_hat + 1) >= BIC(k_hat)
    std::size_t k_global = 0;    // smallest global minimizer over the whole trace
    IndexList selected_model;    // M^(k_hat)
};

/**
 * BIC(k) = n log(max(SSR_k, 1e-12 ||y||^2)) + |M^(k)| log n, natural logs.
 *
 * The penalty uses the actual cumulative model size, which equals kJ for
 * every full GFR step.
 *
 * Along a path run to saturation SSR falls to the floor, so the global
 * minimizer sits at the end of the path. The selected model is therefore the
 * first k after which BIC stops decreasing, i.e. the point where a forward
 * run monitoring BIC halts.
 */
template <typename Scalar>
BicTrace<Scalar> bic_trace(const ScreeningPath<Scalar>& path, Scalar y_norm_sq, Scalar gamma = 0)
{
    if (!(gamma >= 0))
        throw InvalidInput("BIC: gamma must be non-negative");
    if (!(y_norm_sq > 0))
        throw NumericalDegeneracy("degenerate response: ||y||^2 = 0");
    if (path.n < 2)
        throw InvalidInput("BIC needs n >= 2");

    const Scalar n = static_cast<Scalar>(path.n);
    const Scalar log_n = std::log(n) + 2 * gamma * std::log(static_cast<Scalar>(path.p));
    const Scalar floor = static_cast<Scalar>(kSsrFloor) * y_norm_sq;

    BicTrace<Scalar> out;
    out.values.reserve(path.num_steps() + 1);
    out.values.push_back(n * std::log(std::max(y_norm_sq, floor)));
    Index size = 0;
    for (const auto& step : path.steps) {
        size += static_cast<Index>(step.chosen.size());
        out.values.push_back(n * std::log(std::max(step.ssr_after, floor)) + static_cast<Scalar>(size) * log_n);
    }
    out.k_global =
        static_cast<std::size_t>(std::min_element(out.values.begin(), out.values.end()) - out.values.begin());
    while (out.k_hat + 1 < out.values.size() && out.values[out.k_hat + 1] < out.values[out.k_hat])
        ++out.k_hat;
    out.selected_model = path.model_at(out.k_hat);
    return out;
}

}  // namespace gfr
