#pragma once

#include <gfr/screening.hpp>
#include <gfr/simgen.hpp>
#include <gfr/types.hpp>

#include <optional>
#include <string_view>
#include <vector>

namespace gfr {

enum class Scenario { I = 1, II = 2, III = 3 };

Scenario parse_scenario(std::string_view s);
std::string_view to_string(Scenario s);

struct ReplicationOutcome {
    IndexList selected;  // final model of the scenario
    std::optional<Index> steps_to_full_coverage;
    Index size_at_coverage = 0;  // |M^(k)| at first coverage (0 if never)
    bool covered = false;
    Index fp = 0;
    Index fn = 0;
    Index model_size = 0;
    Index steps_run = 0;
    double time_total = 0;
    double time_to_coverage = 0;  // time of the full run when coverage never happens
    double time_to_bic = 0;
};

/// Means over replications. cp/afp/afn/ams describe each scenario's final
/// model; iter and ams_at_coverage average over covered replications only.
struct MetricsReport {
    Scenario scenario = Scenario::I;
    Method method = Method::GFR;
    Index J = 1;
    SimulationSpec spec;

    double cp = 0;
    double afp = 0;
    double afn = 0;
    double ams = 0;
    double iter = 0;
    double ams_at_coverage = 0;
    Index covered_count = 0;

    double time = 0;   // scenario (i)
    double time1 = 0;  // full path
    double time2 = 0;  // to first coverage
    double time3 = 0;  // to the BIC minimum
    double bic_gamma = 1.0;
};

struct RunOptions {
    /// OpenMP threads for the replication loop; 0 keeps the runtime default.
    int threads = 0;
    /// Weight of the 2 log p term in the scenario (iii) BIC penalty.
    double bic_gamma = 1.0;
};

/// Scores one selected set against the true support.
ReplicationOutcome score_selection(const IndexList& selected, const IndexList& support);

/// Runs one replication of the given scenario.
ReplicationOutcome run_replication(const SimulationSpec& spec, const TrueModel& model, Scenario scenario, Method method,
                                   Index J, Index replication, double bic_gamma = 1.0);

MetricsReport aggregate(const std::vector<ReplicationOutcome>& outcomes, Scenario scenario, Method method, Index J,
                        const SimulationSpec& spec);

MetricsReport run_scenario(const SimulationSpec& spec, Scenario scenario, Method method, Index J,
                           const RunOptions& options = {});

/// Exactly p0 FR/GFR steps; CP of M^(p0).
MetricsReport run_scenario_i(const SimulationSpec& spec, Method method, Index J, const RunOptions& options = {});
/// Full FR/GFR path; coverage statistics along the way.
MetricsReport run_scenario_ii(const SimulationSpec& spec, Method method, Index J, const RunOptions& options = {});
/// BIC-selected FR/GFR model, or the default SIS / ISIS model.
MetricsReport run_scenario_iii(const SimulationSpec& spec, Method method, Index J, const RunOptions& options = {});

}  // namespace gfr
