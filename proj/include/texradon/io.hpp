// Text serialization of coefficient tables, pole figures, and symbol tables.
//
// All numbers are written with 17 significant digits via std::to_chars and
// parsed with std::from_chars (locale independent), so write -> read -> write
// reproduces files byte for byte.
//
// Formats (one record per line, space separated):
//   so3coef v1 L=<L>      then   l m n re im      (exact zeros omitted)
//   polefig v1 h=<x>,<y>,<z> n=<N>   then   theta phi value   (N lines)
//   dualsym v1 L=<L>      then   l value          (every degree)
//
// Parse failures throw ParseError naming the source and line number.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "texradon/goniometry.hpp"
#include "texradon/harmonics.hpp"

namespace texradon {
namespace io {

void write_so3coef(std::ostream& os, const SO3Coeffs<double>& c);
SO3Coeffs<double> read_so3coef(std::istream& is,
                               const std::string& source = "<stream>");

void write_polefig(std::ostream& os, const PoleFigureGrid<double>& fig);
PoleFigureGrid<double> read_polefig(std::istream& is,
                                    const std::string& source = "<stream>");

void write_dualsym(std::ostream& os, const std::vector<double>& symbol);
std::vector<double> read_dualsym(std::istream& is,
                                 const std::string& source = "<stream>");

// File variants; reading a missing file and writing an unwritable path throw.
void save_so3coef(const std::string& path, const SO3Coeffs<double>& c);
SO3Coeffs<double> load_so3coef(const std::string& path);
void save_polefig(const std::string& path, const PoleFigureGrid<double>& fig);
PoleFigureGrid<double> load_polefig(const std::string& path);
void save_dualsym(const std::string& path, const std::vector<double>& symbol);
std::vector<double> load_dualsym(const std::string& path);

// 17-significant-digit decimal form of x (round-trips any double).
std::string format_number(double x);

}  // namespace io
}  // namespace texradon
