#ifndef LDLREC_CSV_HPP
#define LDLREC_CSV_HPP

#include <Eigen/Core>

#include <string>

namespace ldlrec {

// Headerless numeric CSV: comma separated, '.' decimal point, LF or CRLF
// line endings. Trailing blank lines are ignored; ragged rows are an error.
Eigen::MatrixXd read_csv_matrix(const std::string& path);

// Parses the same format from an in-memory string (used by tests).
Eigen::MatrixXd parse_csv_matrix(const std::string& text, const std::string& origin = "<string>");

// Writes with enough digits to round-trip doubles exactly.
void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m);

// 0/1 entries written without a decimal point (mask files).
void write_csv_binary_matrix(const std::string& path, const Eigen::MatrixXd& m);

}  // namespace ldlrec

#endif
