#pragma once

#include <gfr/types.hpp>

#include <cstdint>
#include <vector>

namespace gfr {

struct PmseResult {
    double mean = 0;
    std::vector<double> per_split;
};

/// Random train/test splits with a test share of `test_fraction` (rounded,
/// at least one test and one training row). Each split refits least squares
/// with an intercept on the training rows of the given columns and records
/// the mean squared prediction error on the test rows.
PmseResult holdout_pmse(const MatrixXd& X, const VectorXd& y, const IndexList& columns, double test_fraction,
                        Index splits, std::uint64_t seed);

}  // namespace gfr
