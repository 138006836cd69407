#include "anchorplan/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "anchorplan/error.hpp"

namespace anchorplan {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

namespace {

std::string trim(const std::string& s) {
  auto b = std::find_if(s.begin(), s.end(), [](unsigned char c) { return !std::isspace(c); });
  auto e = std::find_if(s.rbegin(), s.rend(), [](unsigned char c) { return !std::isspace(c); }).base();
  return b < e ? std::string(b, e) : std::string();
}

double parse_field(const std::string& text, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": not a number: '" + text + "'");
  }
  return v;
}

}  // namespace

std::vector<SeriesPoint> read_error_series_csv(std::istream& in) {
  std::vector<SeriesPoint> out;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) continue;
    if (!header) {
      if (t != "delta_p,variance_m2") {
        fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected header 'delta_p,variance_m2'");
      }
      header = true;
      continue;
    }
    const auto comma = t.find(',');
    if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
      fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected two columns");
    }
    out.push_back({parse_field(trim(t.substr(0, comma)), line_no), parse_field(trim(t.substr(comma + 1)), line_no)});
  }
  if (!header) fail(ErrorCode::ParseError, "missing header 'delta_p,variance_m2'");
  return out;
}

std::vector<SeriesPoint> read_error_series_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot open " + path.string());
  return read_error_series_csv(in);
}

void write_field_csv(std::ostream& out, const CrlbField& field) {
  out << "x_m,y_m,crlb_m2,covered\n";
  for (const auto& c : field.cells) {
    out << format_double(c.x) << ',' << format_double(c.y) << ',' << (c.covered ? format_double(c.crlb) : "")
        << ',' << (c.covered ? 1 : 0) << '\n';
  }
}

}  // namespace anchorplan
