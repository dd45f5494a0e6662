#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <string>

#include "spca/model.hpp"

namespace spca::io {

/// Text CSV: header `x_1,...,x_p`, one observation per row, values printed
/// with 17 significant digits so they round-trip exactly.
void write_csv(std::ostream& out, const Eigen::MatrixXd& x);
/// Reads CSV rows; a first line that does not parse as numbers is taken as a
/// header. Throws IoError with the offending line number.
Eigen::MatrixXd read_csv(std::istream& in);

/// Binary: magic "SPCA1", u32 rows, u32 cols, then rows * cols little-endian
/// f64 values in row-major order.
void write_binary(std::ostream& out, const Eigen::MatrixXd& x);
Eigen::MatrixXd read_binary(std::istream& in);

/// Format chosen by extension: ".bin" is binary, anything else CSV.
void save_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& x);
Eigen::MatrixXd load_matrix(const std::filesystem::path& path);

/// Truth sidecar: one line per spike, `q,beta,i:v_i,...` with 1-based spike
/// number q and 1-based coordinate i (matching column x_i), nonzero entries
/// only. A first line `# p=<p>` records the dimension.
void write_truth(std::ostream& out, const ModelParams& model);
ModelParams read_truth(std::istream& in);

/// "<dataset>.truth" next to the dataset file.
std::filesystem::path truth_path_for(const std::filesystem::path& dataset);

}  // namespace spca::io
