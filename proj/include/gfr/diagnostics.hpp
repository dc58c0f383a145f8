#pragma once

#include <gfr/types.hpp>

#include <cstdint>

namespace gfr {

/// Maximum number of supports (or support pairs) any one exhaustive
/// enumeration may visit.
inline constexpr std::uint64_t kEnumerationBudget = 1'000'000;

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// phi(s) and Phi(s): extreme eigenvalues of X_M' X_M / n over |M| <= s.
struct RestrictedSpectrum {
    Index s = 0;
    double phi = 0;
    double Phi = 0;
    Index n = 0;
    Index p = 0;
};

/// theta_{s1,s2}: largest singular value of X_M1' X_M2 / n over disjoint
/// supports with |M1| <= s1, |M2| <= s2.
struct RestrictedCorrelation {
    Index s1 = 0;
    Index s2 = 0;
    double theta = 0;
};

/// Exact over all supports; by interlacing only |M| = min(s, p) is visited.
RestrictedSpectrum restricted_eigenvalues(const MatrixXd& X, Index s);

RestrictedCorrelation restricted_correlation(const MatrixXd& X, Index s1, Index s2);

/// delta_s = max(Phi(s) - 1, 1 - phi(s)).
double restricted_isometry(const RestrictedSpectrum& spectrum);
double restricted_isometry(const MatrixXd& X, Index s);

struct ConditionCheck {
    bool holds = false;
    double lhs = 0;
    double rhs = 0;
    double margin = 0;  // lhs / rhs; > 1 exactly when the inequality holds strictly
};

/// K0 > 2 ||y||^2 Phi(J) Phi(1) / (n phi(p0 K0 J)^3 J beta_min^2).
/// lhs = K0, rhs = the bound. Throws NumericalDegeneracy if phi(p0 K0 J) = 0.
ConditionCheck check_theorem1_condition(const MatrixXd& X, const VectorXd& y, double beta_min, Index p0, Index J,
                                        Index K0);

struct Theorem2Check {
    ConditionCheck full;
    /// Sufficient form through restricted isometry constants:
    /// (d_{p0+J}(1 + d_{p0 J}) + d_{p0 J}^2)^2 / (1 - d_{p0 J})^5 <= J / (p0 (1 + eta)(1 + d_1)).
    /// Here lhs/rhs are the right/left sides so that margin > 1 still means "holds".
    ConditionCheck simplified;
};

/// phi(p0 J)^3 J / (Phi(1) p0) >= (1 + eta)(theta_{J,p0} + theta_{J,(p0-1)J} theta_{(p0-1)J,p0} / phi(p0 J))^2.
Theorem2Check check_theorem2_condition(const MatrixXd& X, Index p0, Index J, double eta);

}  // namespace gfr
