#include <gfr/diagnostics.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace gfr {

namespace {

/// Advances `c` (ascending, drawn from 0..n-1) to the next k-combination in
/// lexicographic order. Returns false after the last one.
bool next_combination(std::vector<Index>& c, Index n)
{
    const Index k = static_cast<Index>(c.size());
    Index i = k - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i)
        --i;
    if (i < 0)
        return false;
    ++c[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j)
        c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
    return true;
}

std::vector<Index> first_combination(Index k)
{
    std::vector<Index> c(static_cast<std::size_t>(k));
    std::iota(c.begin(), c.end(), Index(0));
    return c;
}

void check_budget(std::uint64_t count, const std::string& what)
{
    if (count > kEnumerationBudget)
        throw BudgetExceeded(what + " needs " + std::to_string(count) + " supports, over the budget of " +
                             std::to_string(kEnumerationBudget));
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b)
{
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
        return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

MatrixXd normalized_gram(const MatrixXd& X)
{
    MatrixXd G = X.transpose() * X;
    G /= static_cast<double>(X.rows());
    return G;
}

MatrixXd gram_block(const MatrixXd& G, const std::vector<Index>& rows, const std::vector<Index>& cols)
{
    MatrixXd B(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < cols.size(); ++b)
            B(static_cast<Index>(a), static_cast<Index>(b)) = G(rows[a], cols[b]);
    return B;
}

double largest_singular_value(const MatrixXd& B)
{
    if (B.size() == 0)
        return 0.0;
    if (B.rows() == 1 || B.cols() == 1)
        return B.norm();
    Eigen::JacobiSVD<MatrixXd> svd(B);
    return svd.singularValues()(0);
}

}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // r * (n - k + i) / i stays integral at every step
        const std::uint64_t num = n - k + i;
        const std::uint64_t g = std::gcd(r, i);
        const std::uint64_t r1 = r / g;
        const std::uint64_t i1 = i / g;
        const std::uint64_t num1 = num / i1;
        const std::uint64_t next = saturating_mul(r1, num1);
        if (next == std::numeric_limits<std::uint64_t>::max())
            return next;
        r = next;
    }
    return r;
}

RestrictedSpectrum restricted_eigenvalues(const MatrixXd& X, Index s)
{
    if (X.rows() < 1 || X.cols() < 1)
        throw InvalidInput("empty design matrix");
    if (s < 1)
        throw InvalidInput("sparsity level must be positive");
    const Index p = X.cols();
    const Index k = std::min(s, p);
    check_budget(binomial(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(k)), "restricted eigenvalues");

    const MatrixXd G = normalized_gram(X);
    RestrictedSpectrum out;
    out.s = s;
    out.n = X.rows();
    out.p = p;
    out.phi = std::numeric_limits<double>::infinity();
    out.Phi = 0.0;

    std::vector<Index> support = first_combination(k);
    Eigen::SelfAdjointEigenSolver<MatrixXd> solver;
    do {
        const MatrixXd sub = gram_block(G, support, support);
        solver.compute(sub, Eigen::EigenvaluesOnly);
        out.phi = std::min(out.phi, solver.eigenvalues()(0));
        out.Phi = std::max(out.Phi, solver.eigenvalues()(k - 1));
    } while (next_combination(support, p));
    out.phi = std::max(out.phi, 0.0);
    return out;
}

RestrictedCorrelation restricted_correlation(const MatrixXd& X, Index s1, Index s2)
{
    if (X.rows() < 1 || X.cols() < 1)
        throw InvalidInput("empty design matrix");
    if (s1 < 0 || s2 < 0)
        throw InvalidInput("support sizes must be non-negative");
    RestrictedCorrelation out;
    out.s1 = s1;
    out.s2 = s2;
    const Index p = X.cols();
    if (s1 == 0 || s2 == 0 || p < 2)
        return out;

    // The operator norm of a submatrix never exceeds that of the full block,
    // so only maximal disjoint pairs need visiting. When s1 + s2 <= p these
    // are exactly the pairs of sizes (s1, s2); otherwise M2 fills what M1 leaves.
    std::vector<std::pair<Index, Index>> shapes;
    if (s1 + s2 <= p) {
        shapes.emplace_back(s1, s2);
    } else {
        for (Index a = 1; a <= std::min(s1, p - 1); ++a)
            shapes.emplace_back(a, std::min(s2, p - a));
    }
    std::uint64_t count = 0;
    for (const auto& [a, b] : shapes) {
        const auto pairs = saturating_mul(binomial(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(a)),
                                          binomial(static_cast<std::uint64_t>(p - a), static_cast<std::uint64_t>(b)));
        count = pairs > kEnumerationBudget ? pairs : count + pairs;
        check_budget(count, "restricted correlation");
    }

    const MatrixXd G = normalized_gram(X);
    std::vector<Index> rest;
    for (const auto& [a, b] : shapes) {
        std::vector<Index> m1 = first_combination(a);
        do {
            rest.clear();
            for (Index j = 0, t = 0; j < p; ++j) {
                if (t < a && m1[static_cast<std::size_t>(t)] == j)
                    ++t;
                else
                    rest.push_back(j);
            }
            const Index r = static_cast<Index>(rest.size());
            std::vector<Index> pick = first_combination(b);
            std::vector<Index> m2(static_cast<std::size_t>(b));
            do {
                for (Index t = 0; t < b; ++t)
                    m2[static_cast<std::size_t>(t)] = rest[static_cast<std::size_t>(pick[static_cast<std::size_t>(t)])];
                out.theta = std::max(out.theta, largest_singular_value(gram_block(G, m1, m2)));
            } while (next_combination(pick, r));
        } while (next_combination(m1, p));
    }
    return out;
}

double restricted_isometry(const RestrictedSpectrum& spectrum)
{
    return std::max(spectrum.Phi - 1.0, 1.0 - spectrum.phi);
}

double restricted_isometry(const MatrixXd& X, Index s)
{
    return restricted_isometry(restricted_eigenvalues(X, s));
}

namespace {

void check_sizes(Index p0, Index J)
{
    if (p0 < 1 || J < 1)
        throw InvalidInput("p0 and J must be positive");
}

double ratio(double lhs, double rhs)
{
    if (rhs == 0.0)
        return lhs > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
    return lhs / rhs;
}

}  // namespace

ConditionCheck check_theorem1_condition(const MatrixXd& X, const VectorXd& y, double beta_min, Index p0, Index J,
                                        Index K0)
{
    check_sizes(p0, J);
    if (K0 < 1)
        throw InvalidInput("K0 must be positive");
    if (y.size() != X.rows())
        throw InvalidInput("response length does not match design rows");
    if (!(beta_min >= 0.0))
        throw InvalidInput("beta_min must be non-negative");

    const double phi = restricted_eigenvalues(X, p0 * K0 * J).phi;
    const double Phi_J = restricted_eigenvalues(X, J).Phi;
    const double Phi_1 = restricted_eigenvalues(X, 1).Phi;
    if (!(phi > 0.0))
        throw NumericalDegeneracy("phi(p0 K0 J) = 0: the restricted eigenvalue assumption is violated");

    ConditionCheck out;
    out.lhs = static_cast<double>(K0);
    const double n = static_cast<double>(X.rows());
    const double denom = n * phi * phi * phi * static_cast<double>(J) * beta_min * beta_min;
    out.rhs = denom > 0.0 ? 2.0 * y.squaredNorm() * Phi_J * Phi_1 / denom : std::numeric_limits<double>::infinity();
    out.holds = out.lhs > out.rhs;
    out.margin = std::isinf(out.rhs) ? 0.0 : ratio(out.lhs, out.rhs);
    return out;
}

Theorem2Check check_theorem2_condition(const MatrixXd& X, Index p0, Index J, double eta)
{
    check_sizes(p0, J);
    if (!(eta > 0.0))
        throw InvalidInput("eta must be positive");

    const RestrictedSpectrum spec_p0J = restricted_eigenvalues(X, p0 * J);
    const RestrictedSpectrum spec_1 = restricted_eigenvalues(X, 1);
    const double phi = spec_p0J.phi;
    if (!(phi > 0.0))
        throw NumericalDegeneracy("phi(p0 J) = 0: the restricted eigenvalue assumption is violated");

    const double theta_a = restricted_correlation(X, J, p0).theta;
    const double theta_b = restricted_correlation(X, J, (p0 - 1) * J).theta;
    const double theta_c = restricted_correlation(X, (p0 - 1) * J, p0).theta;

    Theorem2Check out;
    const double Jd = static_cast<double>(J);
    const double p0d = static_cast<double>(p0);
    out.full.lhs = phi * phi * phi * Jd / (spec_1.Phi * p0d);
    const double inner = theta_a + theta_b * theta_c / phi;
    out.full.rhs = (1.0 + eta) * inner * inner;
    out.full.holds = out.full.lhs >= out.full.rhs;
    out.full.margin = ratio(out.full.lhs, out.full.rhs);

    const double d_1 = restricted_isometry(spec_1);
    const double d_p0J = restricted_isometry(spec_p0J);
    const double d_p0pJ = restricted_isometry(X, p0 + J);
    out.simplified.lhs = Jd / (p0d * (1.0 + eta) * (1.0 + d_1));
    if (d_p0J < 1.0) {
        const double num = d_p0pJ * (1.0 + d_p0J) + d_p0J * d_p0J;
        out.simplified.rhs = num * num / std::pow(1.0 - d_p0J, 5);
    } else {
        out.simplified.rhs = std::numeric_limits<double>::infinity();
    }
    out.simplified.holds = out.simplified.rhs <= out.simplified.lhs;
    out.simplified.margin = std::isinf(out.simplified.rhs) ? 0.0 : ratio(out.simplified.lhs, out.simplified.rhs);
    return out;
}

}  // namespace gfr
