#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "plevt/sorted_sample.hpp"

namespace plevt {

// Reads one number per line ('.' decimal separator). A first line that does
// not parse as a number is taken as a header; any later non-numeric or
// non-finite row throws ParseError with its 1-based line number. Blank lines
// and a trailing '\r' are ignored.
std::vector<double> read_values(std::istream& in);

// Raw values from a file, in file order. Throws Error if the file cannot be
// opened.
std::vector<double> read_values_file(const std::string& path);

SortedSample read_sample_file(const std::string& path);

// One value per line, shortest round-trip representation.
void write_values(std::ostream& out, std::span<const double> values);

std::string format_double(double v);

}  // namespace plevt
