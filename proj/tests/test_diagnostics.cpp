#include <gfr/diagnostics.hpp>

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using gfr::Index;
using gfr::IndexList;
using gfr::MatrixXd;
using gfr::VectorXd;

MatrixXd scaled_orthonormal(Index n, Index p, std::mt19937_64& rng)
{
    const MatrixXd G = oracle::gaussian(n, p, rng);
    Eigen::HouseholderQR<MatrixXd> qr(G);
    return MatrixXd(qr.householderQ()).leftCols(p) * std::sqrt(static_cast<double>(n));
}

TEST(Diagnostics, Binomial)
{
    EXPECT_EQ(gfr::binomial(8, 3), 56u);
    EXPECT_EQ(gfr::binomial(5, 0), 1u);
    EXPECT_EQ(gfr::binomial(3, 5), 0u);
    EXPECT_EQ(gfr::binomial(60, 30), 118264581564861424u);
    EXPECT_EQ(gfr::binomial(1000, 500), std::numeric_limits<std::uint64_t>::max());
}

TEST(Diagnostics, OrthonormalDesignIsIsometric)
{
    std::mt19937_64 rng(1);
    const MatrixXd X = scaled_orthonormal(20, 6, rng);
    for (Index s = 1; s <= 6; ++s) {
        const auto r = gfr::restricted_eigenvalues(X, s);
        EXPECT_NEAR(r.phi, 1.0, 1e-10);
        EXPECT_NEAR(r.Phi, 1.0, 1e-10);
        EXPECT_NEAR(gfr::restricted_isometry(r), 0.0, 1e-10);
    }
    EXPECT_NEAR(gfr::restricted_correlation(X, 2, 3).theta, 0.0, 1e-10);
}

TEST(Diagnostics, DuplicatedColumn)
{
    std::mt19937_64 rng(2);
    MatrixXd X = oracle::gaussian(20, 5, rng);
    X.col(4) = X.col(1);
    EXPECT_NEAR(gfr::restricted_eigenvalues(X, 2).phi, 0.0, 1e-12);
    X.colwise().normalize();
    X *= std::sqrt(20.0);
    EXPECT_NEAR(gfr::restricted_correlation(X, 1, 1).theta, 1.0, 1e-12);
}

TEST(Diagnostics, MatchesIndependentEnumeration)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        const MatrixXd X = oracle::gaussian(20, 8, rng);
        for (Index s = 1; s <= 3; ++s) {
            const auto r = gfr::restricted_eigenvalues(X, s);
            const auto e = oracle::restricted_extremes(X, s);
            EXPECT_NEAR(r.phi, e.phi, 1e-10);
            EXPECT_NEAR(r.Phi, e.Phi, 1e-10);
        }
        EXPECT_EQ(oracle::restricted_extremes(X, 3).supports, 92u);
        for (Index s1 = 1; s1 <= 3; ++s1)
            for (Index s2 = 1; s2 <= 3; ++s2)
                EXPECT_NEAR(gfr::restricted_correlation(X, s1, s2).theta, oracle::restricted_theta(X, s1, s2), 1e-10);
    }
}

TEST(Diagnostics, ExtremeSingletonsAreColumnNorms)
{
    std::mt19937_64 rng(4);
    MatrixXd X = oracle::gaussian(15, 7, rng);
    X.col(2) *= 3.0;
    const VectorXd norms = X.colwise().squaredNorm().transpose() / 15.0;
    const auto r = gfr::restricted_eigenvalues(X, 1);
    EXPECT_NEAR(r.phi, norms.minCoeff(), 1e-12);
    EXPECT_NEAR(r.Phi, norms.maxCoeff(), 1e-12);
}

TEST(Diagnostics, ThetaOneOneIsLargestOffDiagonal)
{
    std::mt19937_64 rng(5);
    const MatrixXd X = oracle::gaussian(12, 6, rng);
    const MatrixXd G = X.transpose() * X / 12.0;
    double best = 0;
    for (Index i = 0; i < 6; ++i)
        for (Index j = 0; j < 6; ++j)
            if (i != j)
                best = std::max(best, std::abs(G(i, j)));
    EXPECT_NEAR(gfr::restricted_correlation(X, 1, 1).theta, best, 1e-12);
}

TEST(Diagnostics, MonotoneInSparsityAndBoundedByIsometry)
{
    std::mt19937_64 rng(6);
    const MatrixXd X = oracle::gaussian(20, 8, rng);
    for (Index s = 1; s < 8; ++s) {
        const auto a = gfr::restricted_eigenvalues(X, s);
        const auto b = gfr::restricted_eigenvalues(X, s + 1);
        EXPECT_LE(b.phi, a.phi + 1e-12);
        EXPECT_GE(b.Phi, a.Phi - 1e-12);
        EXPECT_LE(a.phi, a.Phi);
        EXPECT_GE(a.phi, 0.0);
    }
    for (Index s1 = 1; s1 <= 3; ++s1)
        for (Index s2 = 1; s2 <= 3; ++s2)
            EXPECT_LE(gfr::restricted_correlation(X, s1, s2).theta, gfr::restricted_isometry(X, s1 + s2) + 1e-12);
}

TEST(Diagnostics, LemmaProjectedGramBound)
{
    std::mt19937_64 rng(7);
    const MatrixXd X = oracle::gaussian(20, 8, rng);
    std::uniform_int_distribution<int> coin(0, 2);
    for (int draw = 0; draw < 50; ++draw) {
        IndexList M1, M2;
        for (Index j = 0; j < 8; ++j) {
            const int c = coin(rng);
            if (c == 1 && M1.size() < 3)
                M1.push_back(j);
            else if (c == 2 && M2.size() < 3)
                M2.push_back(j);
        }
        if (M1.empty())
            M1.push_back(M2.empty() || M2[0] != 0 ? 0 : 7);
        const MatrixXd X1 = oracle::columns(X, M1);
        MatrixXd R = X1;
        if (!M2.empty()) {
            const MatrixXd X2 = oracle::columns(X, M2);
            R = X1 - X2 * X2.completeOrthogonalDecomposition().solve(X1);
        }
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(X1.transpose() * R);
        const double phi = gfr::restricted_eigenvalues(X, static_cast<Index>(M1.size() + M2.size())).phi;
        EXPECT_GE(es.eigenvalues().minCoeff(), 20.0 * phi - 1e-9);
    }
}

TEST(Diagnostics, BudgetGuard)
{
    std::mt19937_64 rng(8);
    const MatrixXd X = oracle::gaussian(5, 40, rng);
    EXPECT_THROW(gfr::restricted_eigenvalues(X, 10), gfr::BudgetExceeded);
    EXPECT_THROW(gfr::restricted_correlation(X, 5, 5), gfr::BudgetExceeded);
    EXPECT_NO_THROW(gfr::restricted_eigenvalues(X, 3));
    EXPECT_THROW(gfr::restricted_eigenvalues(X, 0), gfr::InvalidInput);
}

TEST(Diagnostics, FirstConditionOnOrthonormalDesign)
{
    std::mt19937_64 rng(9);
    const MatrixXd X = scaled_orthonormal(20, 6, rng);
    VectorXd beta = VectorXd::Zero(6);
    beta(0) = 10;
    beta(1) = -10;
    const VectorXd y = X * beta;
    const auto c = gfr::check_theorem1_condition(X, y, 10.0, 2, 1, 1);
    // rhs = 2 ||y||^2 / (n beta_min^2) = 2 * 200 n / (100 n) = 4 > K0 = 1.
    EXPECT_NEAR(c.rhs, 4.0, 1e-9);
    EXPECT_FALSE(c.holds);
    const auto big = gfr::check_theorem1_condition(X, y, 100.0, 2, 1, 1);
    EXPECT_TRUE(big.holds);
    EXPECT_GT(big.margin, 1.0);
    const auto tiny = gfr::check_theorem1_condition(X, y, 0.0, 2, 1, 3);
    EXPECT_FALSE(tiny.holds);
    EXPECT_TRUE(std::isinf(tiny.rhs));
}

TEST(Diagnostics, FirstConditionComposesFromSpectra)
{
    std::mt19937_64 rng(10);
    const MatrixXd X = oracle::gaussian(20, 8, rng);
    const VectorXd y = oracle::gaussian(20, rng);
    const auto c = gfr::check_theorem1_condition(X, y, 0.7, 2, 1, 2);
    const auto e4 = oracle::restricted_extremes(X, 4);
    const auto e1 = oracle::restricted_extremes(X, 1);
    const double rhs = 2 * y.squaredNorm() * e1.Phi * e1.Phi / (20 * std::pow(e4.phi, 3) * 1 * 0.49);
    EXPECT_NEAR(c.rhs, rhs, 1e-9 * rhs);
    EXPECT_EQ(c.lhs, 2.0);
    EXPECT_EQ(c.holds, 2.0 > rhs);
}

TEST(Diagnostics, FirstConditionDegenerate)
{
    std::mt19937_64 rng(11);
    MatrixXd X = oracle::gaussian(10, 4, rng);
    X.col(3) = X.col(0);
    EXPECT_THROW(gfr::check_theorem1_condition(X, oracle::gaussian(10, rng), 1.0, 2, 1, 1), gfr::NumericalDegeneracy);
}

TEST(Diagnostics, SecondConditionOrthonormalHolds)
{
    std::mt19937_64 rng(12);
    const MatrixXd X = scaled_orthonormal(20, 6, rng);
    const auto c = gfr::check_theorem2_condition(X, 2, 2, 0.1);
    EXPECT_TRUE(c.full.holds);
    EXPECT_NEAR(c.full.lhs, 1.0, 1e-9);
    EXPECT_NEAR(c.full.rhs, 0.0, 1e-12);
    EXPECT_TRUE(c.simplified.holds);
}

TEST(Diagnostics, SecondConditionFailsWithNearDuplicates)
{
    std::mt19937_64 rng(13);
    MatrixXd X = oracle::gaussian(20, 6, rng);
    X.col(5) = X.col(0) + 0.05 * X.col(4);
    const auto c = gfr::check_theorem2_condition(X, 1, 1, 0.1);
    EXPECT_FALSE(c.full.holds);
    EXPECT_FALSE(c.simplified.holds);
}

TEST(Diagnostics, SecondConditionComposesFromOracles)
{
    std::mt19937_64 rng(14);
    const MatrixXd X = oracle::gaussian(20, 8, rng);
    const Index p0 = 2, J = 1;
    const double eta = 0.2;
    const auto c = gfr::check_theorem2_condition(X, p0, J, eta);
    const double phi = oracle::restricted_extremes(X, p0 * J).phi;
    const double Phi1 = oracle::restricted_extremes(X, 1).Phi;
    const double ta = oracle::restricted_theta(X, J, p0);
    const double tb = oracle::restricted_theta(X, J, (p0 - 1) * J);
    const double tc = oracle::restricted_theta(X, (p0 - 1) * J, p0);
    const double lhs = std::pow(phi, 3) * J / (Phi1 * p0);
    const double rhs = (1 + eta) * std::pow(ta + tb * tc / phi, 2);
    EXPECT_NEAR(c.full.lhs, lhs, 1e-10);
    EXPECT_NEAR(c.full.rhs, rhs, 1e-10);
    EXPECT_EQ(c.full.holds, lhs >= rhs);
}

}  // namespace
