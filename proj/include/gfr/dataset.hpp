#pragma once

#include <gfr/types.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace gfr {

/// Predictors and a continuous response read from a header-first CSV file.
struct Dataset {
    std::vector<std::string> names;  // predictor column names, in file order
    std::string response_name;
    MatrixXd X;
    VectorXd y;
    bool standardized = false;
    Index rows_rejected = 0;  // rows dropped for missing cells
};

/// Comma-separated, header row required, '.' decimal point. Empty, "NA" and
/// "NaN" cells count as missing and drop the row; any other unparsable cell
/// is an error. An empty `response` reads every column as a predictor and
/// leaves y empty.
Dataset read_csv(std::istream& in, const std::string& response);
Dataset read_csv(const std::filesystem::path& path, const std::string& response);

/// Writes `y` as column `response` followed by the predictors.
void write_csv(std::ostream& out, const MatrixXd& X, const VectorXd& y, const std::vector<std::string>& names,
               const std::string& response = "y");

/// Default predictor names x1..xp.
std::vector<std::string> default_names(Index p);

/// Centers every column of X and y and scales to unit standard deviation
/// (divisor n). Constant columns are centered and left at zero.
void standardize(Dataset& data);

}  // namespace gfr
