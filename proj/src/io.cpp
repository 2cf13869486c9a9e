#include "plevt/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "plevt/error.hpp"

namespace plevt {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_number(std::string_view field, double& out) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

std::vector<double> read_values(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view field = trim(line);
    if (field.empty()) continue;
    double v = 0.0;
    if (!parse_number(field, v)) {
      if (!seen_content && line_no == 1) {
        seen_content = true;  // header
        continue;
      }
      throw ParseError("line " + std::to_string(line_no) +
                           ": not a number: '" + std::string(field) + "'",
                       line_no);
    }
    if (!std::isfinite(v)) {
      throw ParseError("line " + std::to_string(line_no) + ": value is not finite",
                       line_no);
    }
    seen_content = true;
    values.push_back(v);
  }
  return values;
}

std::vector<double> read_values_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return read_values(in);
}

SortedSample read_sample_file(const std::string& path) {
  return SortedSample::from_unsorted(read_values_file(path), IngestedOrigin{path});
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ec == std::errc{} ? ptr : buf);
}

void write_values(std::ostream& out, std::span<const double> values) {
  for (double v : values) out << format_double(v) << '\n';
}

}  // namespace plevt
