#include "wassci/csv.hpp"

#include <cstdlib>
#include <fstream>
#include <vector>

#include "wassci/errors.hpp"

namespace wassci {

namespace {

std::vector<double> parse_row(const std::string& text, int line_no) {
  std::vector<double> values;
  std::size_t pos = 0;
  int column = 1;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string field = text.substr(pos, comma - pos);
    // trim
    const auto first = field.find_first_not_of(" \t\r");
    if (first == std::string::npos)
      throw ParseError("empty field", line_no, column);
    const auto last = field.find_last_not_of(" \t\r");
    field = field.substr(first, last - first + 1);

    const char* begin = field.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
      throw ParseError("cannot parse number '" + field + "'", line_no, column);
    values.push_back(value);
    pos = comma + 1;
    ++column;
    if (comma == text.size()) break;
  }
  return values;
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

Eigen::MatrixXd load_matrix_csv(const std::string& path, bool skip_header) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file '" + path + "'", 0, 0);

  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  bool header_pending = skip_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::vector<double> row = parse_row(line, line_no);
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("row has " + std::to_string(row.size()) +
                           " fields, expected " +
                           std::to_string(rows.front().size()),
                       line_no, 1);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("file '" + path + "' has no data rows", line_no, 1);

  Eigen::MatrixXd mat(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j)
      mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return mat;
}

Eigen::MatrixXd load_covariance_csv(const std::string& path, int k,
                                    bool skip_header) {
  const Eigen::MatrixXd raw = load_matrix_csv(path, skip_header);
  if (raw.size() != static_cast<Eigen::Index>(k) * k)
    throw DimensionMismatch("covariance file '" + path + "' holds " +
                            std::to_string(raw.size()) + " numbers, expected " +
                            std::to_string(static_cast<long long>(k) * k));
  Eigen::MatrixXd cov(k, k);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < raw.rows(); ++i)
    for (Eigen::Index j = 0; j < raw.cols(); ++j) {
      cov(idx / k, idx % k) = raw(i, j);
      ++idx;
    }
  return cov;
}

}  // namespace wassci
