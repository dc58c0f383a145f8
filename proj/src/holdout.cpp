#include <gfr/holdout.hpp>

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace gfr {

PmseResult holdout_pmse(const MatrixXd& X, const VectorXd& y, const IndexList& columns, double test_fraction,
                        Index splits, std::uint64_t seed)
{
    const Index n = X.rows();
    if (y.size() != n)
        throw InvalidInput("response length does not match design rows");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw InvalidInput("holdout fraction must lie strictly between 0 and 1");
    if (splits < 1)
        throw InvalidInput("number of splits must be positive");
    if (n < 2)
        throw InvalidInput("holdout needs at least two observations");
    const Index n_test = std::clamp<Index>(static_cast<Index>(std::lround(test_fraction * static_cast<double>(n))), 1,
                                           n - 1);
    const Index n_train = n - n_test;
    const Index k = static_cast<Index>(columns.size());

    std::mt19937_64 rng(seed);
    std::vector<Index> order(static_cast<std::size_t>(n));
    PmseResult out;
    for (Index s = 0; s < splits; ++s) {
        std::iota(order.begin(), order.end(), Index(0));
        std::shuffle(order.begin(), order.end(), rng);

        MatrixXd Xtr(n_train, k);
        VectorXd ytr(n_train);
        for (Index i = 0; i < n_train; ++i) {
            const Index r = order[static_cast<std::size_t>(i)];
            for (Index c = 0; c < k; ++c)
                Xtr(i, c) = X(r, columns[static_cast<std::size_t>(c)]);
            ytr(i) = y(r);
        }
        const Eigen::RowVectorXd x_mean = Xtr.colwise().mean();
        const double y_mean = ytr.mean();
        Xtr.rowwise() -= x_mean;
        ytr.array() -= y_mean;
        VectorXd coef = VectorXd::Zero(k);
        if (k > 0)
            coef = Xtr.completeOrthogonalDecomposition().solve(ytr);

        double sse = 0.0;
        for (Index i = n_train; i < n; ++i) {
            const Index r = order[static_cast<std::size_t>(i)];
            double pred = y_mean;
            for (Index c = 0; c < k; ++c)
                pred += (X(r, columns[static_cast<std::size_t>(c)]) - x_mean(c)) * coef(c);
            sse += (y(r) - pred) * (y(r) - pred);
        }
        out.per_split.push_back(sse / static_cast<double>(n_test));
    }
    out.mean = std::accumulate(out.per_split.begin(), out.per_split.end(), 0.0) / static_cast<double>(splits);
    return out;
}

}  // namespace gfr
