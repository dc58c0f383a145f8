#include <gfr/dataset.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string_view>

namespace gfr {

namespace {

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

bool is_missing(std::string_view cell)
{
    return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan";
}

double parse_cell(std::string_view cell, std::size_t line_no, std::size_t col)
{
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v))
        throw InvalidInput("non-numeric cell '" + std::string(cell) + "' at line " + std::to_string(line_no) +
                           ", column " + std::to_string(col + 1));
    return v;
}

}  // namespace

Dataset read_csv(std::istream& in, const std::string& response)
{
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        throw InvalidInput("empty CSV input");
    ++line_no;

    std::vector<std::string> header;
    for (auto f : split_fields(line))
        header.emplace_back(trim(f));
    std::size_t response_col = header.size();
    for (std::size_t c = 0; c < header.size() && !response.empty(); ++c)
        if (header[c] == response)
            response_col = c;
    if (!response.empty() && response_col == header.size())
        throw InvalidInput("response column '" + response + "' not found in header");
    if (header.size() < (response.empty() ? 1u : 2u))
        throw InvalidInput("CSV needs at least one predictor column besides the response");

    Dataset data;
    data.response_name = response;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (c != response_col)
            data.names.push_back(header[c]);

    std::vector<double> values;
    std::vector<double> ys;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        const auto fields = split_fields(line);
        if (fields.size() != header.size())
            throw InvalidInput("line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                               " fields, expected " + std::to_string(header.size()));
        bool missing = false;
        for (auto f : fields)
            missing = missing || is_missing(trim(f));
        if (missing) {
            ++data.rows_rejected;
            continue;
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const double v = parse_cell(trim(fields[c]), line_no, c);
            if (c == response_col)
                ys.push_back(v);
            else
                values.push_back(v);
        }
    }
    const Index p = static_cast<Index>(data.names.size());
    const Index n = p > 0 ? static_cast<Index>(values.size()) / p : 0;
    if (n == 0)
        throw InvalidInput("CSV has no complete data rows");

    data.X.resize(n, p);
    data.y = Eigen::Map<const VectorXd>(ys.data(), static_cast<Index>(ys.size()));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < p; ++j)
            data.X(i, j) = values[static_cast<std::size_t>(i * p + j)];
    return data;
}

Dataset read_csv(const std::filesystem::path& path, const std::string& response)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("cannot open '" + path.string() + "'");
    return read_csv(in, response);
}

void write_csv(std::ostream& out, const MatrixXd& X, const VectorXd& y, const std::vector<std::string>& names,
               const std::string& response)
{
    if (static_cast<Index>(names.size()) != X.cols() || y.size() != X.rows())
        throw InvalidInput("CSV export: names, design and response disagree in size");
    out << response;
    for (const auto& name : names)
        out << ',' << name;
    out << '\n';
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    for (Index i = 0; i < X.rows(); ++i) {
        out << y(i);
        for (Index j = 0; j < X.cols(); ++j)
            out << ',' << X(i, j);
        out << '\n';
    }
    out.precision(old_precision);
}

std::vector<std::string> default_names(Index p)
{
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(p));
    for (Index j = 0; j < p; ++j)
        names.push_back("x" + std::to_string(j + 1));
    return names;
}

void standardize(Dataset& data)
{
    const double n = static_cast<double>(data.X.rows());
    auto scale = [n](auto&& col) {
        const double mean = col.mean();
        col.array() -= mean;
        const double sd = std::sqrt(col.squaredNorm() / n);
        if (sd > 0.0)
            col /= sd;
        else
            col.setZero();
    };
    for (Index j = 0; j < data.X.cols(); ++j)
        scale(data.X.col(j));
    if (data.y.size() > 0)
        scale(data.y);
    data.standardized = true;
}

}  // namespace gfr
