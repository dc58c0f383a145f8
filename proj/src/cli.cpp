#include <gfr/cli.hpp>

#include <gfr/dataset.hpp>
#include <gfr/diagnostics.hpp>
#include <gfr/holdout.hpp>
#include <gfr/metrics.hpp>
#include <gfr/model_select.hpp>
#include <gfr/report.hpp>
#include <gfr/screening.hpp>
#include <gfr/simgen.hpp>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace gfr::cli {

using nlohmann::json;

namespace {

struct ScreenArgs {
    std::string data;
    std::string response;
    std::string method = "gfr";
    Index J = 1;
    std::optional<Index> d;
    std::optional<Index> isis_steps;
    std::optional<Index> isis_per_step;
    std::optional<Index> max_steps;
    std::string select = "none";
    double bic_gamma = 1.0;
    bool standardize = false;
    std::optional<double> holdout;
    Index splits = 20;
    std::optional<std::uint64_t> split_seed;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out;
    std::string format = "json";
};

struct SimulateArgs {
    std::string example = "1";
    Index n = 150;
    Index p = 500;
    double r2 = 0.9;
    Index reps = 100;
    std::uint64_t seed = 0;
    std::string method = "gfr";
    Index J = 1;
    std::string scenario = "iii";
    double bic_gamma = 1.0;
    int threads = 0;
    std::string out;
    std::string format = "table";
};

struct DiagnoseArgs {
    std::string data;
    std::string response;
    std::vector<Index> s{1, 2, 3};
    std::optional<Index> s1;
    std::optional<Index> s2;
    std::optional<Index> p0;
    Index J = 1;
    std::optional<Index> K0;
    std::optional<double> beta_min;
    double eta = 0.1;
    bool standardize = false;
    int threads = 0;
    std::string out;
    std::string format = "json";
};

struct GenerateArgs {
    std::string example = "1";
    Index n = 150;
    Index p = 500;
    double r2 = 0.9;
    std::uint64_t seed = 0;
    Index replication = 0;
    std::string out;
};

void apply_threads(int threads)
{
    if (threads < 0)
        throw InvalidInput("--threads must be non-negative");
    if (threads > 0)
        omp_set_num_threads(threads);
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path);
    if (!f)
        throw InvalidInput("cannot write '" + path + "'");
    f << text;
}

/// `--out` always receives JSON; stdout gets the `--format` rendering unless
/// only `--out` was asked for.
void emit(const std::string& out_path, bool format_given, const std::string& json_text, const std::string& rendered,
          std::ostream& out)
{
    if (!out_path.empty())
        write_file(out_path, json_text);
    if (out_path.empty() || format_given)
        out << rendered;
}

int cmd_screen(const ScreenArgs& a, bool format_given, std::ostream& out, std::ostream& err)
{
    apply_threads(a.threads);
    Dataset data = read_csv(std::filesystem::path(a.data), a.response);
    if (data.rows_rejected > 0)
        err << "dropped " << data.rows_rejected << " row(s) with missing cells\n";
    if (a.standardize)
        standardize(data);
    if (!(data.y.squaredNorm() > 0.0))
        throw NumericalDegeneracy("degenerate response: ||y||^2 = 0");

    const Method method = parse_method(a.method);
    PathOptions opt;
    opt.J = method == Method::FR ? 1 : a.J;
    opt.max_steps = a.max_steps;
    opt.sis_size = a.d;
    opt.isis_steps = a.isis_steps;
    opt.isis_per_step = a.isis_per_step;
    const ScreeningPath<double> path = screening_path(data.X, data.y, method, opt);
    if ((method == Method::FR || method == Method::GFR) && path.steps.empty())
        throw NumericalDegeneracy("no non-degenerate candidate column");

    RunReport report;
    ScreenConfig& c = report.config;
    c.data = a.data;
    c.response = a.response;
    c.method = method;
    c.J = path.J;
    c.d = a.d;
    c.isis_steps = a.isis_steps;
    c.isis_per_step = a.isis_per_step;
    c.max_steps = a.max_steps;
    c.select = a.select;
    c.bic_gamma = a.bic_gamma;
    c.standardize = a.standardize;
    c.n = data.X.rows();
    c.p = data.X.cols();
    c.rows_rejected = data.rows_rejected;
    report.path = describe_path(path, data.names);

    IndexList chosen = path.model_at(path.num_steps());
    if (a.select == "bic") {
        const BicTrace<double> trace = bic_trace(path, path.initial_ssr, a.bic_gamma);
        report.bic = BicSummary{trace.values, static_cast<Index>(trace.k_hat), static_cast<Index>(trace.k_global)};
        chosen = trace.selected_model;
    }
    for (Index j : chosen)
        report.selected.push_back(data.names[static_cast<std::size_t>(j)]);

    if (a.holdout) {
        const std::uint64_t split_seed = a.split_seed.value_or(a.seed);
        c.holdout = a.holdout;
        c.splits = a.splits;
        c.split_seed = split_seed;
        const PmseResult pmse = holdout_pmse(data.X, data.y, chosen, *a.holdout, a.splits, split_seed);
        report.pmse = PmseSummary{pmse.mean, a.splits, pmse.per_split};
    }

    const std::string json_text = json(report).dump(2) + "\n";
    std::string rendered = json_text;
    if (a.format == "table")
        rendered = format_run_table(report);
    else if (a.format == "csv")
        rendered = format_run_csv(report);
    emit(a.out, format_given, json_text, rendered, out);
    return kOk;
}

int cmd_simulate(const SimulateArgs& a, bool format_given, std::ostream& out)
{
    SimulationSpec spec;
    spec.example = parse_example(a.example);
    spec.n = a.n;
    spec.p = a.p;
    spec.r2 = a.r2;
    spec.replications = a.reps;
    spec.seed = a.seed;
    validate(spec);
    apply_threads(a.threads);

    RunOptions options;
    options.threads = a.threads;
    options.bic_gamma = a.bic_gamma;
    const MetricsReport report =
        run_scenario(spec, parse_scenario(a.scenario), parse_method(a.method), a.J, options);

    const std::string json_text = metrics_to_json(report).dump(2) + "\n";
    std::string rendered = format_metrics_table(report);
    if (a.format == "json")
        rendered = json_text;
    else if (a.format == "csv")
        rendered = format_metrics_csv(report);
    emit(a.out, format_given, json_text, rendered, out);
    return kOk;
}

json check_to_json(const ConditionCheck& c)
{
    auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    return json{{"holds", c.holds}, {"lhs", finite_or_null(c.lhs)}, {"rhs", finite_or_null(c.rhs)},
                {"margin", finite_or_null(c.margin)}};
}

int cmd_diagnose(const DiagnoseArgs& a, bool format_given, std::ostream& out)
{
    apply_threads(a.threads);
    Dataset data = read_csv(std::filesystem::path(a.data), a.response);
    if (a.standardize)
        standardize(data);

    json report = {{"schema_version", kSchemaVersion},
                   {"config", {{"data", a.data}, {"response", a.response}, {"n", data.X.rows()}, {"p", data.X.cols()}}}};
    json spectrum = json::array();
    for (Index s : a.s) {
        const RestrictedSpectrum rs = restricted_eigenvalues(data.X, s);
        spectrum.push_back({{"s", s}, {"phi", rs.phi}, {"Phi", rs.Phi}, {"delta", restricted_isometry(rs)}});
    }
    report["spectrum"] = spectrum;

    if (a.s1 || a.s2) {
        const RestrictedCorrelation rc = restricted_correlation(data.X, a.s1.value_or(1), a.s2.value_or(1));
        report["correlation"] = {{"s1", rc.s1}, {"s2", rc.s2}, {"theta", rc.theta}};
    }
    if (a.p0 && a.K0 && a.beta_min) {
        if (data.y.size() == 0)
            throw InvalidInput("the first condition needs --response");
        const ConditionCheck c1 = check_theorem1_condition(data.X, data.y, *a.beta_min, *a.p0, a.J, *a.K0);
        report["theorem1"] = check_to_json(c1);
        report["theorem1"]["k0"] = *a.K0;
    }
    if (a.p0) {
        const Theorem2Check c2 = check_theorem2_condition(data.X, *a.p0, a.J, a.eta);
        report["theorem2"] = {{"full", check_to_json(c2.full)}, {"simplified", check_to_json(c2.simplified)},
                              {"eta", a.eta}};
    }

    const std::string json_text = report.dump(2) + "\n";
    std::string rendered = json_text;
    if (a.format == "table") {
        std::ostringstream os;
        os << std::setw(6) << "s" << std::setw(14) << "phi(s)" << std::setw(14) << "Phi(s)" << std::setw(14)
           << "delta_s" << '\n';
        for (const auto& row : report["spectrum"])
            os << std::setw(6) << row["s"].get<Index>() << std::setw(14) << row["phi"].get<double>() << std::setw(14)
               << row["Phi"].get<double>() << std::setw(14) << row["delta"].get<double>() << '\n';
        if (report.contains("correlation"))
            os << "theta(" << report["correlation"]["s1"] << "," << report["correlation"]["s2"]
               << ") = " << report["correlation"]["theta"].get<double>() << '\n';
        if (report.contains("theorem1"))
            os << "first condition holds: " << std::boolalpha << report["theorem1"]["holds"].get<bool>() << '\n';
        if (report.contains("theorem2"))
            os << "second condition holds: " << std::boolalpha
               << report["theorem2"]["full"]["holds"].get<bool>() << " (simplified: "
               << report["theorem2"]["simplified"]["holds"].get<bool>() << ")\n";
        rendered = os.str();
    }
    emit(a.out, format_given, json_text, rendered, out);
    return kOk;
}

int cmd_generate(const GenerateArgs& a, std::ostream& out)
{
    SimulationSpec spec;
    spec.example = parse_example(a.example);
    spec.n = a.n;
    spec.p = a.p;
    spec.r2 = a.r2;
    spec.seed = a.seed;
    spec.replications = a.replication + 1;
    const TrueModel model = make_example(spec);
    const SimulatedData sim = sample_dataset(model, spec, a.replication);
    if (a.out.empty()) {
        write_csv(out, sim.X, sim.y, default_names(spec.p));
    } else {
        std::ofstream f(a.out);
        if (!f)
            throw InvalidInput("cannot write '" + a.out + "'");
        write_csv(f, sim.X, sim.y, default_names(spec.p));
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Greedy forward regression variable screening"};
    app.require_subcommand(1);
    const auto formats = CLI::IsMember({"json", "table", "csv"});

    ScreenArgs sa;
    auto* screen = app.add_subcommand("screen", "Screen predictors of a CSV dataset");
    screen->add_option("--data", sa.data, "CSV file with a header row")->required();
    screen->add_option("--response", sa.response, "Response column name")->required();
    screen->add_option("--method", sa.method, "sis, isis, fr or gfr")->check(CLI::IsMember({"sis", "isis", "fr", "gfr"}));
    screen->add_option("--j", sa.J, "Variables added per GFR step");
    screen->add_option("--d", sa.d, "SIS model size (default floor(n/log n))");
    screen->add_option("--isis-steps", sa.isis_steps, "ISIS stages (default floor(log n - 1))");
    screen->add_option("--isis-per-step", sa.isis_per_step, "Variables per ISIS stage (default floor(n/log n))");
    screen->add_option("--max-steps", sa.max_steps, "Cap on FR/GFR steps (default floor(n/J))");
    screen->add_option("--select", sa.select, "none or bic")->check(CLI::IsMember({"none", "bic"}));
    screen->add_option("--bic-gamma", sa.bic_gamma, "Weight of the 2 log p term in the BIC penalty (0: plain BIC)");
    screen->add_flag("--standardize", sa.standardize, "Center and scale every column (divisor n)");
    screen->add_option("--holdout", sa.holdout, "Test fraction for PMSE splits");
    screen->add_option("--splits", sa.splits, "Number of PMSE splits");
    screen->add_option("--split-seed", sa.split_seed, "Seed for PMSE splits (default --seed)");
    screen->add_option("--seed", sa.seed, "Base seed");
    screen->add_option("--threads", sa.threads, "Worker threads (default: all cores)");
    screen->add_option("--out", sa.out, "Write the JSON report here");
    auto* screen_format = screen->add_option("--format", sa.format, "json, table or csv")->check(formats);

    SimulateArgs ma;
    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo benchmark scenario");
    simulate->add_option("--example", ma.example, "1, 2 or 3");
    simulate->add_option("--n", ma.n, "Sample size");
    simulate->add_option("--p", ma.p, "Number of predictors");
    simulate->add_option("--r2", ma.r2, "Target R^2");
    simulate->add_option("--reps", ma.reps, "Replications");
    simulate->add_option("--seed", ma.seed, "Base seed");
    simulate->add_option("--method", ma.method, "sis, isis, fr or gfr")->check(CLI::IsMember({"sis", "isis", "fr", "gfr"}));
    simulate->add_option("--j", ma.J, "Variables added per GFR step");
    simulate->add_option("--scenario", ma.scenario, "i, ii or iii")->check(CLI::IsMember({"i", "ii", "iii"}));
    simulate->add_option("--bic-gamma", ma.bic_gamma, "Weight of the 2 log p term in the BIC penalty (0: plain BIC)");
    simulate->add_option("--threads", ma.threads, "Worker threads (default: all cores)");
    simulate->add_option("--out", ma.out, "Write the JSON report here");
    auto* simulate_format = simulate->add_option("--format", ma.format, "json, table or csv")->check(formats);

    DiagnoseArgs da;
    auto* diagnose = app.add_subcommand("diagnose", "Restricted eigenvalues, correlations and condition checks");
    diagnose->add_option("--data", da.data, "CSV design matrix")->required();
    diagnose->add_option("--response", da.response, "Response column (excluded from the design)");
    diagnose->add_option("--s", da.s, "Sparsity levels for phi/Phi")->expected(1, -1);
    diagnose->add_option("--s1", da.s1, "First block size for theta");
    diagnose->add_option("--s2", da.s2, "Second block size for theta");
    diagnose->add_option("--p0", da.p0, "True model size");
    diagnose->add_option("--j", da.J, "Variables per step");
    diagnose->add_option("--k0", da.K0, "Step multiplier for the first condition");
    diagnose->add_option("--beta-min", da.beta_min, "Smallest nonzero |beta|");
    diagnose->add_option("--eta", da.eta, "Slack for the second condition");
    diagnose->add_flag("--standardize", da.standardize, "Center and scale every column (divisor n)");
    diagnose->add_option("--threads", da.threads, "Worker threads");
    diagnose->add_option("--out", da.out, "Write the JSON report here");
    auto* diagnose_format = diagnose->add_option("--format", da.format, "json or table")->check(formats);

    GenerateArgs ga;
    auto* generate = app.add_subcommand("generate", "Export one simulated dataset as CSV");
    generate->add_option("--example", ga.example, "1, 2 or 3");
    generate->add_option("--n", ga.n, "Sample size");
    generate->add_option("--p", ga.p, "Number of predictors");
    generate->add_option("--r2", ga.r2, "Target R^2");
    generate->add_option("--seed", ga.seed, "Base seed");
    generate->add_option("--replication", ga.replication, "Replication index");
    generate->add_option("--out", ga.out, "CSV path (default stdout)");

    std::vector<const char*> argv;
    for (const auto& s : args)
        argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (screen->parsed())
            return cmd_screen(sa, screen_format->count() > 0, out, err);
        if (simulate->parsed())
            return cmd_simulate(ma, simulate_format->count() > 0, out);
        if (diagnose->parsed())
            return cmd_diagnose(da, diagnose_format->count() > 0, out);
        if (generate->parsed())
            return cmd_generate(ga, out);
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const NumericalDegeneracy& e) {
        err << "error: " << e.what() << '\n';
        return kDegenerate;
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kBudgetExceeded;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}

}  // namespace gfr::cli
