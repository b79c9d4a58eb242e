#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

namespace gnet {

/// Sample matrix (n rows, m columns) with its augmented scaled Gram
/// matrix precomputed once, so every local regression on this data
/// resolves to submatrix reads. Immutable after construction.
class DataMatrix {
 public:
  /// Validates n >= 1, 1 <= m <= 64, all entries finite.
  explicit DataMatrix(Eigen::MatrixXd values);

  long n() const { return static_cast<long>(values_.rows()); }
  int m() const { return static_cast<int>(values_.cols()); }
  double operator()(long row, int col) const { return values_(row, col); }
  const Eigen::MatrixXd& values() const { return values_; }

  /// (m+1) x (m+1) matrix (1/n) [1|X]' [1|X]; row and column 0 belong to
  /// the intercept, column j+1 to variable j.
  const Eigen::MatrixXd& augmented_gram() const { return gram_; }

 private:
  Eigen::MatrixXd values_;
  Eigen::MatrixXd gram_;
};

/// Reads the CSV interchange format: header x1,...,xm then one row of
/// finite reals per sample. Throws ParseError on any malformation.
DataMatrix read_data_csv(std::istream& in);
DataMatrix read_data_csv_file(const std::string& path);

/// Writes the same format with 17 significant digits (value-preserving).
void write_data_csv(const DataMatrix& data, std::ostream& out);
void write_data_csv_file(const DataMatrix& data, const std::string& path);

}  // namespace gnet
