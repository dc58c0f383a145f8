#pragma once

#include <gfr/metrics.hpp>
#include <gfr/screening.hpp>
#include <gfr/types.hpp>

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gfr {

inline constexpr int kSchemaVersion = 1;

/// Echo of the `screen` invocation.
struct ScreenConfig {
    std::string data;
    std::string response;
    Method method = Method::GFR;
    Index J = 1;
    std::optional<Index> d;
    std::optional<Index> isis_steps;
    std::optional<Index> isis_per_step;
    std::optional<Index> max_steps;
    std::string select = "none";
    double bic_gamma = 1.0;
    bool standardize = false;
    std::optional<double> holdout;
    std::optional<Index> splits;
    std::optional<std::uint64_t> split_seed;
    Index n = 0;
    Index p = 0;
    Index rows_rejected = 0;

    bool operator==(const ScreenConfig&) const = default;
};

struct PathStepReport {
    Index step = 0;
    std::vector<std::string> chosen;
    double ssr = 0;
    std::vector<double> gains;
    double elapsed_s = 0;

    bool operator==(const PathStepReport&) const = default;
};

struct BicSummary {
    std::vector<double> values;
    Index k_hat = 0;
    Index k_global = 0;

    bool operator==(const BicSummary&) const = default;
};

struct PmseSummary {
    double mean = 0;
    Index splits = 0;
    std::vector<double> per_split;

    bool operator==(const PmseSummary&) const = default;
};

struct RunReport {
    int schema_version = kSchemaVersion;
    ScreenConfig config;
    std::vector<PathStepReport> path;
    std::optional<BicSummary> bic;
    std::vector<std::string> selected;
    std::optional<PmseSummary> pmse;

    bool operator==(const RunReport&) const = default;
};

/// Path steps with indices replaced by column names.
std::vector<PathStepReport> describe_path(const ScreeningPath<double>& path, const std::vector<std::string>& names);

void to_json(nlohmann::json& j, const ScreenConfig& c);
void from_json(const nlohmann::json& j, ScreenConfig& c);
void to_json(nlohmann::json& j, const PathStepReport& s);
void from_json(const nlohmann::json& j, PathStepReport& s);
void to_json(nlohmann::json& j, const BicSummary& b);
void from_json(const nlohmann::json& j, BicSummary& b);
void to_json(nlohmann::json& j, const PmseSummary& p);
void from_json(const nlohmann::json& j, PmseSummary& p);
void to_json(nlohmann::json& j, const RunReport& r);
void from_json(const nlohmann::json& j, RunReport& r);

/// Wall-clock values live under "timing" so they can be dropped when
/// comparing runs.
nlohmann::json metrics_to_json(const MetricsReport& r);

std::string format_run_table(const RunReport& r);
std::string format_run_csv(const RunReport& r);

/// One row in the column layout of the published tables for the scenario:
///   (i)   p  R2  CP  Time
///   (ii)  Method  p  R2  CP  AMS  iter  Time1  Time2
///   (iii) Method  p  R2  CP  AFP  AFN  AMS  Time3
std::string format_metrics_table(const MetricsReport& r);
std::string format_metrics_csv(const MetricsReport& r);

}  // namespace gfr
