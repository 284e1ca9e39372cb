#include "cssp/matrix_io.hpp"

#include "cssp/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace cssp {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

bool parse_double(const std::string& tok, double& out) {
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

bool parse_index(const std::string& tok, long long& out) {
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

Matrix load_matrix_market(std::istream& in, std::size_t max_cells) {
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) {
    throw ParseError("empty MatrixMarket file", 1);
  }
  ++lineno;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") {
    throw ParseError("missing %%MatrixMarket banner", lineno);
  }
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix" || format != "coordinate") {
    throw ParseError("only 'matrix coordinate' MatrixMarket files are supported", lineno);
  }
  const bool pattern = field == "pattern";
  if (!pattern && field != "real" && field != "integer") {
    throw ParseError("unsupported field '" + field + "'", lineno);
  }
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general") {
    throw ParseError("unsupported symmetry '" + symmetry + "'", lineno);
  }

  long long rows = 0, cols = 0, nnz = 0;
  bool have_sizes = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') {
      continue;
    }
    std::istringstream sizes(line);
    std::string a, b, c;
    if (!(sizes >> a >> b >> c) || !parse_index(a, rows) || !parse_index(b, cols) ||
        !parse_index(c, nnz)) {
      throw ParseError("malformed size line", lineno);
    }
    have_sizes = true;
    break;
  }
  if (!have_sizes) {
    throw ParseError("missing size line", lineno);
  }
  if (rows < 1 || cols < 1 || nnz < 0) {
    throw ParseError("invalid dimensions", lineno);
  }
  if (static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) > max_cells) {
    throw TooLargeError("densified size " + std::to_string(rows) + "x" +
                        std::to_string(cols) + " exceeds the cell budget of " +
                        std::to_string(max_cells));
  }

  Matrix a = Matrix::Zero(rows, cols);
  long long seen = 0;
  while (seen < nnz) {
    if (!std::getline(in, line)) {
      throw ParseError("expected " + std::to_string(nnz) + " entries, got " +
                           std::to_string(seen),
                       lineno);
    }
    ++lineno;
    if (line.empty() || line[0] == '%') {
      continue;
    }
    std::istringstream entry(line);
    std::string si, sj, sv;
    long long i = 0, j = 0;
    double value = 1.0;
    if (!(entry >> si >> sj) || !parse_index(si, i) || !parse_index(sj, j)) {
      throw ParseError("malformed entry", lineno);
    }
    if (!pattern) {
      if (!(entry >> sv) || !parse_double(sv, value)) {
        throw ParseError("malformed value", lineno);
      }
    }
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw ParseError("entry index out of range", lineno);
    }
    a(i - 1, j - 1) = value;
    if (symmetric && i != j) {
      if (j > rows || i > cols) {
        throw ParseError("symmetric mirror out of range", lineno);
      }
      a(j - 1, i - 1) = value;
    }
    ++seen;
  }
  return a;
}

Matrix load_csv(std::istream& in, std::size_t max_cells) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  std::size_t cells = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::vector<double> row;
    std::stringstream fields(line);
    std::string tok;
    while (std::getline(fields, tok, ',')) {
      const auto first = tok.find_first_not_of(" \t");
      const auto last = tok.find_last_not_of(" \t");
      if (first == std::string::npos) {
        throw ParseError("empty CSV field", lineno);
      }
      double value = 0.0;
      if (!parse_double(tok.substr(first, last - first + 1), value)) {
        throw ParseError("malformed CSV number '" + tok + "'", lineno);
      }
      row.push_back(value);
    }
    if (row.empty()) {
      throw ParseError("empty CSV row", lineno);
    }
    if (width == 0) {
      width = row.size();
    } else if (row.size() != width) {
      throw ParseError("ragged CSV row: expected " + std::to_string(width) +
                           " fields, got " + std::to_string(row.size()),
                       lineno);
    }
    cells += row.size();
    if (cells > max_cells) {
      throw TooLargeError("CSV size exceeds the cell budget of " +
                          std::to_string(max_cells));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw ParseError("empty CSV file", lineno == 0 ? 1 : lineno);
  }
  Matrix a(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      a(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return a;
}

} // namespace

MatrixFormat parse_format(const std::string& name) {
  const std::string f = lower(name);
  if (f == "matrixmarket" || f == "mtx" || f == "mm") {
    return MatrixFormat::matrixmarket;
  }
  if (f == "csv") {
    return MatrixFormat::csv;
  }
  throw InvalidArgumentError("unknown matrix format '" + name + "'");
}

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

Matrix load_matrix(std::istream& in, MatrixFormat format, std::size_t max_cells) {
  Matrix a = format == MatrixFormat::matrixmarket ? load_matrix_market(in, max_cells)
                                                  : load_csv(in, max_cells);
  if (!a.allFinite()) {
    throw ParseError("matrix contains non-finite entries");
  }
  return a;
}

Matrix load_matrix(const std::string& path, MatrixFormat format, std::size_t max_cells) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path + "'");
  }
  return load_matrix(in, format, max_cells);
}

void save_matrix(std::ostream& out, const Matrix& a, MatrixFormat format) {
  if (format == MatrixFormat::matrixmarket) {
    Index nnz = 0;
    for (Index j = 0; j < a.cols(); ++j) {
      for (Index i = 0; i < a.rows(); ++i) {
        if (a(i, j) != 0.0) {
          ++nnz;
        }
      }
    }
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.rows() << ' ' << a.cols() << ' ' << nnz << '\n';
    for (Index j = 0; j < a.cols(); ++j) {
      for (Index i = 0; i < a.rows(); ++i) {
        if (a(i, j) != 0.0) {
          out << (i + 1) << ' ' << (j + 1) << ' ' << format_double(a(i, j)) << '\n';
        }
      }
    }
  } else {
    for (Index i = 0; i < a.rows(); ++i) {
      for (Index j = 0; j < a.cols(); ++j) {
        if (j > 0) {
          out << ',';
        }
        out << format_double(a(i, j));
      }
      out << '\n';
    }
  }
}

void save_matrix(const std::string& path, const Matrix& a, MatrixFormat format) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot write '" + path + "'");
  }
  save_matrix(out, a, format);
}

} // namespace cssp
