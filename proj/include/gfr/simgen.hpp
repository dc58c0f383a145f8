#pragma once

#include <gfr/types.hpp>

#include <cstdint>
#include <random>
#include <string_view>

namespace gfr {

/// The three benchmark designs.
///  Ex1: 2x2 block-diagonal covariance (1, -0.4; -0.4, 1), beta = (2,3,2,3,2,3,2,3,0,...).
///  Ex2: AR(1) covariance 0.5^|i-j|, beta_1 = 3, beta_4 = 1.5, beta_7 = 2.
///  Ex3: equicorrelated (0.6) block with a special X4 (corr sqrt(0.5) with the
///       block) and an independent X5; y = 5X1 + 5X2 + 5X3 - 15 sqrt(0.5) X4 + X5.
enum class Example { Ex1 = 1, Ex2 = 2, Ex3 = 3 };

Example parse_example(std::string_view s);
int example_number(Example e);

struct SimulationSpec {
    Example example = Example::Ex1;
    Index n = 150;
    Index p = 500;
    double r2 = 0.9;
    std::uint64_t seed = 0;
    Index replications = 100;
};

/// Throws InvalidInput unless 0 < r2 < 1, n >= 2, p covers the support
/// (and p is even for Ex1), replications >= 1.
void validate(const SimulationSpec& spec);

/// Size of the true support of each example: 8, 3, 5.
Index true_model_size(Example e);

struct TrueModel {
    VectorXd beta;
    IndexList support;  // zero-based, ascending
    double sigma = 0;
    double sigma_xb_sq = 0;  // beta' Sigma beta
};

/// Population covariance Sigma(i, j) of the example's predictors (zero-based).
double covariance_entry(Example e, Index i, Index j);

TrueModel make_example(const SimulationSpec& spec);

struct SimulatedData {
    MatrixXd X;
    VectorXd y;
};

/// Deterministic 64-bit seed for replication `replication` of a run seeded `seed`.
std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t replication);

/// Draws n rows of predictors from the example's Gaussian law.
MatrixXd sample_design(Example e, Index n, Index p, std::mt19937_64& rng);

SimulatedData sample_dataset(const TrueModel& model, const SimulationSpec& spec, Index replication);

}  // namespace gfr
