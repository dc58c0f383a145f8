#include <gfr/metrics.hpp>

#include <gfr/model_select.hpp>

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <exception>
#include <string>

namespace gfr {

Scenario parse_scenario(std::string_view s)
{
    if (s == "i" || s == "1") return Scenario::I;
    if (s == "ii" || s == "2") return Scenario::II;
    if (s == "iii" || s == "3") return Scenario::III;
    throw InvalidInput("unknown scenario '" + std::string(s) + "' (expected i, ii or iii)");
}

std::string_view to_string(Scenario s)
{
    switch (s) {
    case Scenario::I: return "i";
    case Scenario::II: return "ii";
    case Scenario::III: return "iii";
    }
    return "?";
}

namespace {

bool contains_all(const IndexList& model, const IndexList& support)
{
    return std::all_of(support.begin(), support.end(), [&](Index t) {
        return std::find(model.begin(), model.end(), t) != model.end();
    });
}

double elapsed_through(const ScreeningPath<double>& path, std::size_t k)
{
    double t = 0;
    for (std::size_t i = 0; i < k; ++i)
        t += path.steps[i].elapsed;
    return t;
}

void check_method(Scenario scenario, Method method)
{
    if (scenario != Scenario::III && (method == Method::SIS || method == Method::ISIS))
        throw InvalidInput("scenarios i and ii run FR or GFR only");
}

}  // namespace

ReplicationOutcome score_selection(const IndexList& selected, const IndexList& support)
{
    ReplicationOutcome out;
    out.selected = selected;
    out.model_size = static_cast<Index>(selected.size());
    for (Index j : selected)
        if (std::find(support.begin(), support.end(), j) == support.end())
            ++out.fp;
    for (Index t : support)
        if (std::find(selected.begin(), selected.end(), t) == selected.end())
            ++out.fn;
    out.covered = out.fn == 0;
    return out;
}

ReplicationOutcome run_replication(const SimulationSpec& spec, const TrueModel& model, Scenario scenario, Method method,
                                   Index J, Index replication, double bic_gamma)
{
    check_method(scenario, method);
    const SimulatedData data = sample_dataset(model, spec, replication);
    const Index effective_j = method == Method::FR ? 1 : J;
    const Index p0 = static_cast<Index>(model.support.size());

    PathOptions opt;
    opt.J = effective_j;
    if (scenario == Scenario::I)
        opt.max_steps = p0;

    const auto t0 = std::chrono::steady_clock::now();
    const ScreeningPath<double> path = screening_path(data.X, data.y, method, opt);
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    ReplicationOutcome out;
    std::size_t k_final = path.num_steps();
    if (scenario == Scenario::III && (method == Method::FR || method == Method::GFR))
        k_final = bic_trace(path, path.initial_ssr, bic_gamma).k_hat;

    out = score_selection(path.model_at(k_final), model.support);
    out.steps_run = static_cast<Index>(path.num_steps());
    out.time_total = total;
    out.time_to_bic = elapsed_through(path, k_final);
    if (method == Method::SIS || method == Method::ISIS)
        out.time_to_bic = total;

    out.time_to_coverage = total;
    for (std::size_t k = 1; k <= path.num_steps(); ++k) {
        if (contains_all(path.model_at(k), model.support)) {
            out.steps_to_full_coverage = static_cast<Index>(k);
            out.size_at_coverage = path.model_size(k);
            out.time_to_coverage = elapsed_through(path, k);
            break;
        }
    }
    return out;
}

MetricsReport aggregate(const std::vector<ReplicationOutcome>& outcomes, Scenario scenario, Method method, Index J,
                        const SimulationSpec& spec)
{
    MetricsReport r;
    r.scenario = scenario;
    r.method = method;
    r.J = method == Method::FR ? 1 : J;
    r.spec = spec;
    if (outcomes.empty())
        return r;

    Index covered = 0, fp = 0, fn = 0, size = 0, cov_steps = 0, cov_size = 0;
    double t_total = 0, t_cov = 0, t_bic = 0;
    for (const auto& o : outcomes) {
        covered += o.covered ? 1 : 0;
        fp += o.fp;
        fn += o.fn;
        size += o.model_size;
        if (o.steps_to_full_coverage) {
            ++r.covered_count;
            cov_steps += *o.steps_to_full_coverage;
            cov_size += o.size_at_coverage;
        }
        t_total += o.time_total;
        t_cov += o.time_to_coverage;
        t_bic += o.time_to_bic;
    }
    const double reps = static_cast<double>(outcomes.size());
    r.cp = static_cast<double>(covered) / reps;
    r.afp = static_cast<double>(fp) / reps;
    r.afn = static_cast<double>(fn) / reps;
    r.ams = static_cast<double>(size) / reps;
    if (r.covered_count > 0) {
        r.iter = static_cast<double>(cov_steps) / static_cast<double>(r.covered_count);
        r.ams_at_coverage = static_cast<double>(cov_size) / static_cast<double>(r.covered_count);
    }
    r.time = t_total / reps;
    r.time1 = t_total / reps;
    r.time2 = t_cov / reps;
    r.time3 = t_bic / reps;
    return r;
}

MetricsReport run_scenario(const SimulationSpec& spec, Scenario scenario, Method method, Index J,
                           const RunOptions& options)
{
    check_method(scenario, method);
    const TrueModel model = make_example(spec);
    if (method == Method::GFR && (J < 1 || J > spec.n))
        throw InvalidInput("J must satisfy 1 <= J <= n");

    const Index reps = spec.replications;
    std::vector<ReplicationOutcome> outcomes(static_cast<std::size_t>(reps));
    std::exception_ptr failure;
    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (Index r = 0; r < reps; ++r) {
        try {
            outcomes[static_cast<std::size_t>(r)] = run_replication(spec, model, scenario, method, J, r, options.bic_gamma);
        } catch (...) {
#pragma omp critical(gfr_replication_failure)
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    MetricsReport report = aggregate(outcomes, scenario, method, J, spec);
    report.bic_gamma = options.bic_gamma;
    return report;
}

MetricsReport run_scenario_i(const SimulationSpec& spec, Method method, Index J, const RunOptions& options)
{
    return run_scenario(spec, Scenario::I, method, J, options);
}

MetricsReport run_scenario_ii(const SimulationSpec& spec, Method method, Index J, const RunOptions& options)
{
    return run_scenario(spec, Scenario::II, method, J, options);
}

MetricsReport run_scenario_iii(const SimulationSpec& spec, Method method, Index J, const RunOptions& options)
{
    return run_scenario(spec, Scenario::III, method, J, options);
}

}  // namespace gfr
