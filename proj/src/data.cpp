#include "gnet/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gnet/errors.hpp"
#include "gnet/fmtutil.hpp"

namespace gnet {

namespace {

constexpr int kMaxColumns = 64;

std::vector<std::string> split_csv_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_field(const std::string& field, long row) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError("row " + std::to_string(row) + ": cannot parse '" + field + "' as a real");
  }
  if (!std::isfinite(value)) {
    throw ParseError("row " + std::to_string(row) + ": non-finite value");
  }
  return value;
}

}  // namespace

DataMatrix::DataMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  const long n = static_cast<long>(values_.rows());
  const int m = static_cast<int>(values_.cols());
  if (n < 1) throw InvalidArgument("data needs at least one sample");
  if (m < 1) throw InvalidArgument("data needs at least one variable");
  if (m > kMaxColumns) throw TooLarge("data supports at most 64 variables");
  for (long r = 0; r < n; ++r) {
    for (int c = 0; c < m; ++c) {
      if (!std::isfinite(values_(r, c))) {
        throw InvalidArgument("data contains a non-finite entry");
      }
    }
  }
  // Fixed accumulation order keeps downstream fits bit-reproducible.
  gram_ = Eigen::MatrixXd(m + 1, m + 1);
  gram_(0, 0) = 1.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (int a = 0; a < m; ++a) {
    double sum = 0.0;
    for (long r = 0; r < n; ++r) sum += values_(r, a);
    gram_(0, a + 1) = gram_(a + 1, 0) = sum * inv_n;
  }
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      double sum = 0.0;
      for (long r = 0; r < n; ++r) sum += values_(r, a) * values_(r, b);
      gram_(a + 1, b + 1) = gram_(b + 1, a + 1) = sum * inv_n;
    }
  }
}

DataMatrix read_data_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header row");
  const std::vector<std::string> header = split_csv_line(line);
  const int m = static_cast<int>(header.size());
  if (m > kMaxColumns) throw TooLarge("data supports at most 64 variables");
  for (int c = 0; c < m; ++c) {
    if (header[static_cast<std::size_t>(c)] != "x" + std::to_string(c + 1)) {
      throw ParseError("header must read x1,...,xm; column " + std::to_string(c + 1) +
                       " is '" + header[static_cast<std::size_t>(c)] + "'");
    }
  }
  std::vector<double> flat;
  long n = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != m) {
      throw ParseError("row " + std::to_string(n + 1) + ": expected " + std::to_string(m) +
                       " fields, got " + std::to_string(fields.size()));
    }
    for (const std::string& f : fields) flat.push_back(parse_field(f, n + 1));
    ++n;
  }
  if (n == 0) throw ParseError("no data rows");
  Eigen::MatrixXd values(n, m);
  for (long r = 0; r < n; ++r) {
    for (int c = 0; c < m; ++c) {
      values(r, c) = flat[static_cast<std::size_t>(r) * static_cast<std::size_t>(m) +
                          static_cast<std::size_t>(c)];
    }
  }
  return DataMatrix(std::move(values));
}

DataMatrix read_data_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open data file: " + path);
  try {
    return read_data_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_data_csv(const DataMatrix& data, std::ostream& out) {
  const int m = data.m();
  for (int c = 0; c < m; ++c) {
    out << (c ? ",x" : "x") << (c + 1);
  }
  out << '\n';
  for (long r = 0; r < data.n(); ++r) {
    for (int c = 0; c < m; ++c) {
      if (c) out << ',';
      out << g17(data(r, c));
    }
    out << '\n';
  }
}

void write_data_csv_file(const DataMatrix& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for writing: " + path);
  write_data_csv(data, out);
  if (!out) throw ParseError("write failed: " + path);
}

}  // namespace gnet
