#include <gfr/report.hpp>

#include <iomanip>
#include <sstream>

namespace gfr {

using nlohmann::json;

namespace {

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v)
{
    j[key] = v ? json(*v) : json(nullptr);
}

template <typename T>
void get_optional(const json& j, const char* key, std::optional<T>& v)
{
    if (j.contains(key) && !j.at(key).is_null())
        v = j.at(key).get<T>();
    else
        v.reset();
}

std::string method_label(Method m, Index J)
{
    switch (m) {
    case Method::FR: return "FR";
    case Method::GFR: return "GFR(J=" + std::to_string(J) + ")";
    case Method::SIS: return "SIS";
    case Method::ISIS: return "ISIS";
    }
    return "?";
}

std::string percent(double r2)
{
    std::ostringstream os;
    os << std::setprecision(3) << r2 * 100.0 << '%';
    return os.str();
}

}  // namespace

std::vector<PathStepReport> describe_path(const ScreeningPath<double>& path, const std::vector<std::string>& names)
{
    std::vector<PathStepReport> out;
    for (std::size_t k = 0; k < path.steps.size(); ++k) {
        const auto& s = path.steps[k];
        PathStepReport r;
        r.step = static_cast<Index>(k + 1);
        for (Index j : s.chosen)
            r.chosen.push_back(names.at(static_cast<std::size_t>(j)));
        r.ssr = s.ssr_after;
        r.gains = s.gains;
        r.elapsed_s = s.elapsed;
        out.push_back(std::move(r));
    }
    return out;
}

void to_json(json& j, const ScreenConfig& c)
{
    j = json{{"data", c.data},
             {"response", c.response},
             {"method", std::string(to_string(c.method))},
             {"j", c.J},
             {"select", c.select},
             {"bic_gamma", c.bic_gamma},
             {"standardize", c.standardize},
             {"n", c.n},
             {"p", c.p},
             {"rows_rejected", c.rows_rejected}};
    put_optional(j, "d", c.d);
    put_optional(j, "isis_steps", c.isis_steps);
    put_optional(j, "isis_per_step", c.isis_per_step);
    put_optional(j, "max_steps", c.max_steps);
    put_optional(j, "holdout", c.holdout);
    put_optional(j, "splits", c.splits);
    put_optional(j, "split_seed", c.split_seed);
}

void from_json(const json& j, ScreenConfig& c)
{
    j.at("data").get_to(c.data);
    j.at("response").get_to(c.response);
    c.method = parse_method(j.at("method").get<std::string>());
    j.at("j").get_to(c.J);
    j.at("select").get_to(c.select);
    j.at("bic_gamma").get_to(c.bic_gamma);
    j.at("standardize").get_to(c.standardize);
    j.at("n").get_to(c.n);
    j.at("p").get_to(c.p);
    j.at("rows_rejected").get_to(c.rows_rejected);
    get_optional(j, "d", c.d);
    get_optional(j, "isis_steps", c.isis_steps);
    get_optional(j, "isis_per_step", c.isis_per_step);
    get_optional(j, "max_steps", c.max_steps);
    get_optional(j, "holdout", c.holdout);
    get_optional(j, "splits", c.splits);
    get_optional(j, "split_seed", c.split_seed);
}

void to_json(json& j, const PathStepReport& s)
{
    j = json{{"step", s.step}, {"chosen", s.chosen}, {"ssr", s.ssr}, {"gains", s.gains}, {"elapsed_s", s.elapsed_s}};
}

void from_json(const json& j, PathStepReport& s)
{
    j.at("step").get_to(s.step);
    j.at("chosen").get_to(s.chosen);
    j.at("ssr").get_to(s.ssr);
    j.at("gains").get_to(s.gains);
    j.at("elapsed_s").get_to(s.elapsed_s);
}

void to_json(json& j, const BicSummary& b)
{
    j = json{{"values", b.values}, {"k_hat", b.k_hat}, {"k_global", b.k_global}};
}

void from_json(const json& j, BicSummary& b)
{
    j.at("values").get_to(b.values);
    j.at("k_hat").get_to(b.k_hat);
    j.at("k_global").get_to(b.k_global);
}

void to_json(json& j, const PmseSummary& p)
{
    j = json{{"mean", p.mean}, {"splits", p.splits}, {"per_split", p.per_split}};
}

void from_json(const json& j, PmseSummary& p)
{
    j.at("mean").get_to(p.mean);
    j.at("splits").get_to(p.splits);
    j.at("per_split").get_to(p.per_split);
}

void to_json(json& j, const RunReport& r)
{
    j = json{{"schema_version", r.schema_version}, {"config", r.config}, {"path", r.path}, {"selected", r.selected}};
    if (r.bic)
        j["bic"] = *r.bic;
    if (r.pmse)
        j["pmse"] = *r.pmse;
}

void from_json(const json& j, RunReport& r)
{
    j.at("schema_version").get_to(r.schema_version);
    if (r.schema_version != kSchemaVersion)
        throw InvalidInput("unsupported report schema_version " + std::to_string(r.schema_version));
    j.at("config").get_to(r.config);
    j.at("path").get_to(r.path);
    j.at("selected").get_to(r.selected);
    get_optional(j, "bic", r.bic);
    get_optional(j, "pmse", r.pmse);
}

json metrics_to_json(const MetricsReport& r)
{
    json config = {{"example", example_number(r.spec.example)},
                   {"n", r.spec.n},
                   {"p", r.spec.p},
                   {"r2", r.spec.r2},
                   {"reps", r.spec.replications},
                   {"seed", r.spec.seed},
                   {"method", std::string(to_string(r.method))},
                   {"j", r.J},
                   {"scenario", std::string(to_string(r.scenario))},
                   {"bic_gamma", r.bic_gamma}};
    json metrics = {{"cp", r.cp},
                    {"afp", r.afp},
                    {"afn", r.afn},
                    {"ams", r.ams},
                    {"iter", r.iter},
                    {"ams_at_coverage", r.ams_at_coverage},
                    {"covered", r.covered_count}};
    json timing;
    switch (r.scenario) {
    case Scenario::I: timing = {{"time", r.time}}; break;
    case Scenario::II: timing = {{"time1", r.time1}, {"time2", r.time2}}; break;
    case Scenario::III: timing = {{"time3", r.time3}}; break;
    }
    return json{{"schema_version", kSchemaVersion}, {"config", config}, {"metrics", metrics}, {"timing", timing}};
}

std::string format_run_table(const RunReport& r)
{
    std::ostringstream os;
    os << "method " << to_string(r.config.method) << "  J " << r.config.J << "  n " << r.config.n << "  p "
       << r.config.p << '\n';
    os << std::setw(5) << "step" << std::setw(16) << "ssr";
    if (r.bic)
        os << std::setw(14) << "BIC";
    os << "  chosen\n";
    if (r.bic)
        os << std::setw(5) << 0 << std::setw(16) << "" << std::setw(14) << std::fixed << std::setprecision(4)
           << r.bic->values.front() << '\n';
    for (const auto& s : r.path) {
        os << std::setw(5) << s.step << std::setw(16) << std::setprecision(6) << std::scientific << s.ssr;
        if (r.bic)
            os << std::setw(14) << std::fixed << std::setprecision(4)
               << r.bic->values.at(static_cast<std::size_t>(s.step));
        os << "  ";
        for (std::size_t i = 0; i < s.chosen.size(); ++i)
            os << (i ? "," : "") << s.chosen[i];
        os << '\n';
    }
    if (r.bic)
        os << "BIC stops decreasing at step " << r.bic->k_hat << '\n';
    os << "selected (" << r.selected.size() << "):";
    for (const auto& name : r.selected)
        os << ' ' << name;
    os << '\n';
    if (r.pmse)
        os << "PMSE " << std::fixed << std::setprecision(6) << r.pmse->mean << " over " << r.pmse->splits
           << " splits\n";
    return os.str();
}

std::string format_run_csv(const RunReport& r)
{
    std::ostringstream os;
    os << std::setprecision(17);
    os << "step,variable,gain,ssr_after\n";
    for (const auto& s : r.path)
        for (std::size_t i = 0; i < s.chosen.size(); ++i)
            os << s.step << ',' << s.chosen[i] << ',' << s.gains[i] << ',' << s.ssr << '\n';
    return os.str();
}

std::string format_metrics_table(const MetricsReport& r)
{
    std::ostringstream os;
    os << std::fixed;
    auto col = [](int w) { return std::setw(w); };
    const std::string label = method_label(r.method, r.J);
    switch (r.scenario) {
    case Scenario::I:
        os << col(12) << "Method" << col(7) << "p" << col(7) << "R2" << col(9) << "CP" << col(11) << "Time (s)" << '\n';
        os << col(12) << label << col(7) << r.spec.p << col(7) << percent(r.spec.r2) << col(9) << std::setprecision(4)
           << r.cp << col(11) << r.time << '\n';
        break;
    case Scenario::II:
        os << col(12) << "Method" << col(7) << "p" << col(7) << "R2" << col(9) << "CP" << col(10) << "AMS" << col(10)
           << "iter" << col(12) << "Time1 (s)" << col(12) << "Time2 (s)" << '\n';
        os << col(12) << label << col(7) << r.spec.p << col(7) << percent(r.spec.r2) << std::setprecision(4) << col(9)
           << r.cp << col(10) << r.ams_at_coverage << col(10) << r.iter << col(12) << r.time1 << col(12)
           << r.time2 << '\n';
        break;
    case Scenario::III:
        os << col(12) << "Method" << col(7) << "p" << col(7) << "R2" << col(9) << "CP" << col(10) << "AFP" << col(10)
           << "AFN" << col(10) << "AMS" << col(12) << "Time3 (s)" << '\n';
        os << col(12) << label << col(7) << r.spec.p << col(7) << percent(r.spec.r2) << std::setprecision(4) << col(9)
           << r.cp << col(10) << r.afp << col(10) << r.afn << col(10) << r.ams << col(12) << r.time3 << '\n';
        break;
    }
    return os.str();
}

std::string format_metrics_csv(const MetricsReport& r)
{
    std::ostringstream os;
    os << std::setprecision(17);
    os << "example,scenario,method,j,n,p,r2,reps,seed,cp,afp,afn,ams,iter,ams_at_coverage,time,time1,time2,time3\n";
    os << example_number(r.spec.example) << ',' << to_string(r.scenario) << ',' << to_string(r.method) << ',' << r.J
       << ',' << r.spec.n << ',' << r.spec.p << ',' << r.spec.r2 << ',' << r.spec.replications << ',' << r.spec.seed
       << ',' << r.cp << ',' << r.afp << ',' << r.afn << ',' << r.ams << ',' << r.iter << ',' << r.ams_at_coverage
       << ',' << r.time << ',' << r.time1 << ',' << r.time2 << ',' << r.time3 << '\n';
    return os.str();
}

}  // namespace gfr
