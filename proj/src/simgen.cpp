#include <gfr/simgen.hpp>

#include <cmath>
#include <cstdlib>
#include <string>

namespace gfr {

namespace {

// Example 3 mixing weights; X4 = a W + b Z4 gives Corr(X4, X_j) = a sqrt(0.6) = sqrt(0.5).
const double kEx3Common = std::sqrt(0.6);
const double kEx3Own = std::sqrt(0.4);
const double kEx3X4Common = std::sqrt(5.0 / 6.0);
const double kEx3X4Own = std::sqrt(1.0 / 6.0);

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

Example parse_example(std::string_view s)
{
    if (s == "1" || s == "ex1") return Example::Ex1;
    if (s == "2" || s == "ex2") return Example::Ex2;
    if (s == "3" || s == "ex3") return Example::Ex3;
    throw InvalidInput("unknown example '" + std::string(s) + "' (expected 1, 2 or 3)");
}

int example_number(Example e)
{
    return static_cast<int>(e);
}

Index true_model_size(Example e)
{
    switch (e) {
    case Example::Ex1: return 8;
    case Example::Ex2: return 3;
    case Example::Ex3: return 5;
    }
    throw InvalidInput("unknown example");
}

void validate(const SimulationSpec& spec)
{
    if (!(spec.r2 > 0.0 && spec.r2 < 1.0))
        throw InvalidInput("r2 must lie strictly between 0 and 1");
    if (spec.n < 2)
        throw InvalidInput("n must be at least 2");
    if (spec.replications < 1)
        throw InvalidInput("replications must be at least 1");
    const Index min_p = spec.example == Example::Ex2 ? 7 : true_model_size(spec.example);
    if (spec.p < min_p)
        throw InvalidInput("p = " + std::to_string(spec.p) + " is too small for example " +
                           std::to_string(example_number(spec.example)));
    if (spec.example == Example::Ex1 && spec.p % 2 != 0)
        throw InvalidInput("example 1 uses 2x2 covariance blocks and needs an even p");
}

double covariance_entry(Example e, Index i, Index j)
{
    if (i == j)
        return 1.0;
    switch (e) {
    case Example::Ex1:
        return i / 2 == j / 2 ? -0.4 : 0.0;
    case Example::Ex2:
        return std::pow(0.5, static_cast<double>(std::abs(i - j)));
    case Example::Ex3: {
        if (i == 4 || j == 4)
            return 0.0;
        if (i == 3 || j == 3)
            return std::sqrt(0.5);
        return 0.6;
    }
    }
    return 0.0;
}

TrueModel make_example(const SimulationSpec& spec)
{
    validate(spec);
    TrueModel model;
    model.beta = VectorXd::Zero(spec.p);
    switch (spec.example) {
    case Example::Ex1:
        for (Index j = 0; j < 8; ++j)
            model.beta(j) = j % 2 == 0 ? 2.0 : 3.0;
        break;
    case Example::Ex2:
        model.beta(0) = 3.0;
        model.beta(3) = 1.5;
        model.beta(6) = 2.0;
        break;
    case Example::Ex3:
        model.beta(0) = 5.0;
        model.beta(1) = 5.0;
        model.beta(2) = 5.0;
        model.beta(3) = -15.0 * std::sqrt(0.5);
        model.beta(4) = 1.0;
        break;
    }
    for (Index j = 0; j < spec.p; ++j)
        if (model.beta(j) != 0.0)
            model.support.push_back(j);

    double v = 0.0;
    for (Index a : model.support)
        for (Index b : model.support)
            v += model.beta(a) * covariance_entry(spec.example, a, b) * model.beta(b);
    model.sigma_xb_sq = v;
    model.sigma = std::sqrt(v * (1.0 - spec.r2) / spec.r2);
    return model;
}

std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t replication)
{
    return splitmix64(splitmix64(seed) ^ splitmix64(replication + 0x632be59bd9b4e019ULL));
}

MatrixXd sample_design(Example e, Index n, Index p, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    MatrixXd X(n, p);
    switch (e) {
    case Example::Ex1: {
        const double c = -0.4;
        const double s = std::sqrt(1.0 - c * c);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < p; j += 2) {
                const double z1 = normal(rng);
                const double z2 = normal(rng);
                X(i, j) = z1;
                X(i, j + 1) = c * z1 + s * z2;
            }
        break;
    }
    case Example::Ex2: {
        const double s = std::sqrt(0.75);
        for (Index i = 0; i < n; ++i) {
            X(i, 0) = normal(rng);
            for (Index j = 1; j < p; ++j)
                X(i, j) = 0.5 * X(i, j - 1) + s * normal(rng);
        }
        break;
    }
    case Example::Ex3: {
        for (Index i = 0; i < n; ++i) {
            const double w = normal(rng);
            for (Index j = 0; j < p; ++j) {
                const double z = normal(rng);
                if (j == 3)
                    X(i, j) = kEx3X4Common * w + kEx3X4Own * z;
                else if (j == 4)
                    X(i, j) = z;
                else
                    X(i, j) = kEx3Common * w + kEx3Own * z;
            }
        }
        break;
    }
    }
    return X;
}

SimulatedData sample_dataset(const TrueModel& model, const SimulationSpec& spec, Index replication)
{
    validate(spec);
    if (model.beta.size() != spec.p)
        throw InvalidInput("true model does not match the simulation spec");
    std::mt19937_64 rng(replication_seed(spec.seed, static_cast<std::uint64_t>(replication)));
    SimulatedData data;
    data.X = sample_design(spec.example, spec.n, spec.p, rng);
    std::normal_distribution<double> noise(0.0, model.sigma);
    data.y.resize(spec.n);
    for (Index i = 0; i < spec.n; ++i) {
        double xb = 0.0;
        for (Index j : model.support)
            xb += data.X(i, j) * model.beta(j);
        data.y(i) = xb + noise(rng);
    }
    return data;
}

}  // namespace gfr
