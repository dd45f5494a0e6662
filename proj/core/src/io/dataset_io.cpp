#include "spca/io/dataset_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "spca/error.hpp"
#include "spca/io/config.hpp"

namespace spca::io {

namespace {

constexpr std::array<char, 5> kMagic = {'S', 'P', 'C', 'A', '1'};

std::string format_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.put(static_cast<char>((v >> (8 * b)) & 0xFFu));
}

void put_u64(std::ostream& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.put(static_cast<char>((v >> (8 * b)) & 0xFFu));
}

std::uint64_t get_le(std::istream& in, int bytes) {
  std::uint64_t v = 0;
  for (int b = 0; b < bytes; ++b) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw IoError("binary dataset is truncated");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * b);
  }
  return v;
}

}  // namespace

void write_csv(std::ostream& out, const Eigen::MatrixXd& x) {
  for (Eigen::Index j = 0; j < x.cols(); ++j) out << (j == 0 ? "" : ",") << "x_" << (j + 1);
  out << '\n';
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) out << (j == 0 ? "" : ",") << format_exact(x(i, j));
    out << '\n';
  }
}

Eigen::MatrixXd read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t cols = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    std::vector<double> values;
    bool numeric = true;
    for (const auto& f : fields) {
      const auto v = parse_double(trim(f));
      if (!v || !std::isfinite(*v)) {
        numeric = false;
        break;
      }
      values.push_back(*v);
    }
    if (!numeric) {
      if (rows.empty() && cols == 0) {
        cols = fields.size();  // header line
        continue;
      }
      throw IoError("line " + std::to_string(line_no) + ": non-numeric CSV field");
    }
    if (cols == 0) cols = values.size();
    if (values.size() != cols) {
      throw IoError("line " + std::to_string(line_no) + ": expected " + std::to_string(cols) + " fields");
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw IoError("CSV dataset has no data rows");
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return x;
}

void write_binary(std::ostream& out, const Eigen::MatrixXd& x) {
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, static_cast<std::uint32_t>(x.rows()));
  put_u32(out, static_cast<std::uint32_t>(x.cols()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) put_u64(out, std::bit_cast<std::uint64_t>(x(i, j)));
  }
}

Eigen::MatrixXd read_binary(std::istream& in) {
  std::array<char, 5> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw IoError("not an SPCA1 binary dataset");
  const auto rows = static_cast<Eigen::Index>(get_le(in, 4));
  const auto cols = static_cast<Eigen::Index>(get_le(in, 4));
  if (rows == 0 || cols == 0) throw IoError("binary dataset has zero rows or columns");
  Eigen::MatrixXd x(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = std::bit_cast<double>(get_le(in, 8));
  }
  return x;
}

void save_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& x) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  if (path.extension() == ".bin") {
    write_binary(out, x);
  } else {
    write_csv(out, x);
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Eigen::MatrixXd load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset " + path.string());
  return path.extension() == ".bin" ? read_binary(in) : read_csv(in);
}

void write_truth(std::ostream& out, const ModelParams& model) {
  out << "# p=" << model.p << '\n';
  for (std::size_t q = 0; q < model.r(); ++q) {
    out << (q + 1) << ',' << format_exact(model.betas[q]);
    for (const auto i : model.support(q)) {
      out << ',' << (i + 1) << ':' << format_exact(model.spikes[q](static_cast<Eigen::Index>(i)));
    }
    out << '\n';
  }
}

ModelParams read_truth(std::istream& in) {
  ModelParams model;
  std::string line;
  std::size_t line_no = 0;
  bool have_p = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto where = "truth line " + std::to_string(line_no) + ": ";
    if (t[0] == '#') {
      if (t.rfind("# p=", 0) == 0) {
        const auto p = parse_u64(t.substr(4));
        if (!p || *p == 0) throw IoError(where + "bad dimension");
        model.p = static_cast<std::size_t>(*p);
        have_p = true;
      }
      continue;
    }
    if (!have_p) throw IoError(where + "missing '# p=<p>' header");
    const auto fields = split(t, ',');
    if (fields.size() < 3) throw IoError(where + "expected q,beta,i:v_i,...");
    const auto q = parse_u64(trim(fields[0]));
    const auto beta = parse_double(trim(fields[1]));
    if (!q || *q != model.r() + 1 || !beta) throw IoError(where + "bad spike number or beta");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.p));
    for (std::size_t f = 2; f < fields.size(); ++f) {
      const auto colon = fields[f].find(':');
      if (colon == std::string::npos) throw IoError(where + "entry without ':'");
      const auto i = parse_u64(trim(fields[f].substr(0, colon)));
      const auto value = parse_double(trim(fields[f].substr(colon + 1)));
      if (!i || *i == 0 || *i > model.p || !value) throw IoError(where + "bad entry '" + fields[f] + "'");
      v(static_cast<Eigen::Index>(*i - 1)) = *value;
    }
    model.betas.push_back(*beta);
    model.spikes.push_back(std::move(v));
  }
  if (!have_p) throw IoError("truth file has no '# p=<p>' header");
  try {
    model.validate();
  } catch (const Error& e) {
    throw IoError(std::string("truth file describes an invalid model: ") + e.what());
  }
  return model;
}

std::filesystem::path truth_path_for(const std::filesystem::path& dataset) {
  auto p = dataset;
  p += ".truth";
  return p;
}

}  // namespace spca::io
