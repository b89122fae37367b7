#pragma once

#include <Eigen/Dense>
#include <string>

namespace wassci {

/// Loads a rectangular numeric CSV (comma-separated, optional header line).
/// Blank lines are skipped. Throws ParseError with 1-based line/column on
/// malformed input and on ragged rows.
Eigen::MatrixXd load_matrix_csv(const std::string& path, bool skip_header);

/// Loads a k x k covariance stored as k^2 numbers in row-major CSV (either
/// one k x k grid or any rectangular layout with k^2 entries in reading
/// order).
Eigen::MatrixXd load_covariance_csv(const std::string& path, int k,
                                    bool skip_header);

}  // namespace wassci
