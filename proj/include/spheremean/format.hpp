#pragma once

// Deterministic text output: shortest round-trip doubles, CSV with header row and LF endings.

#include <charconv>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "spheremean/field.hpp"
#include "spheremean/field_io.hpp"

namespace spheremean {

/// Shortest representation that reads back to the same double (at most 17 significant digits).
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<std::string_view> columns) {
    bool first = true;
    for (auto c : columns) {
      if (!first) text_ += ',';
      text_ += c;
      first = false;
    }
    text_ += '\n';
  }

  CsvWriter& row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      if (!first) text_ += ',';
      text_ += format_double(v);
      first = false;
    }
    text_ += '\n';
    return *this;
  }

  CsvWriter& row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) text_ += ',';
      text_ += format_double(values[i]);
    }
    text_ += '\n';
    return *this;
  }

  const std::string& str() const noexcept { return text_; }
  void save(const std::filesystem::path& path) const { detail::write_atomically(path, text_); }

 private:
  std::string text_;
};

/// 1-D slice along `axis` (0-based) through index 0 of the other axes: columns x, re, im.
inline CsvWriter slice_csv(const Field& f, int axis = 0) {
  if (axis < 0 || axis >= f.grid.n()) throw ConfigurationError("slice axis out of range");
  CsvWriter csv{"x", "re", "im"};
  std::array<std::size_t, 3> idx{0, 0, 0};
  for (std::size_t i = 0; i < f.grid.shape()[axis]; ++i) {
    idx[axis] = i;
    const cplx v = f.values[f.grid.ravel(idx)];
    const double x = f.space == Space::physical ? f.grid.coordinate(axis, i) : f.grid.frequency(axis, i);
    csv.row({x, v.real(), v.imag()});
  }
  return csv;
}

}  // namespace spheremean
