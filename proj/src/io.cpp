// Text serialization (see io.hpp for the formats).

#include "texradon/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "texradon/error.hpp"

namespace texradon {
namespace io {

namespace {

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
  throw ParseError(source + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_char(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& tok, const std::string& source, int line) {
  double v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    fail(source, line, "expected a number, got '" + tok + "'");
  return v;
}

int parse_int(const std::string& tok, const std::string& source, int line) {
  int v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    fail(source, line, "expected an integer, got '" + tok + "'");
  return v;
}

// Value of a "key=payload" token, checking the key.
std::string keyed_value(const std::string& tok, const std::string& key,
                        const std::string& source, int line) {
  const std::string prefix = key + "=";
  if (tok.rfind(prefix, 0) != 0)
    fail(source, line, "expected '" + key + "=...', got '" + tok + "'");
  return tok.substr(prefix.size());
}

// Reads the next nonempty line; returns false at end of stream.
bool next_line(std::istream& is, std::string& out, int& line) {
  while (std::getline(is, out)) {
    ++line;
    if (!out.empty() && out.back() == '\r') out.pop_back();
    if (!split_ws(out).empty()) return true;
  }
  return false;
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// so3coef

void write_so3coef(std::ostream& os, const SO3Coeffs<double>& c) {
  os << "so3coef v1 L=" << c.bandlimit() << "\n";
  for (int l = 0; l <= c.bandlimit(); ++l)
    for (int m = -l; m <= l; ++m)
      for (int n = -l; n <= l; ++n) {
        const std::complex<double> z = c(l, m, n);
        if (z.real() == 0.0 && z.imag() == 0.0) continue;
        os << l << ' ' << m << ' ' << n << ' ' << format_number(z.real()) << ' '
           << format_number(z.imag()) << "\n";
      }
}

SO3Coeffs<double> read_so3coef(std::istream& is, const std::string& source) {
  int line = 0;
  std::string text;
  if (!next_line(is, text, line)) fail(source, 1, "empty input");
  const auto head = split_ws(text);
  if (head.size() != 3 || head[0] != "so3coef" || head[1] != "v1")
    fail(source, line, "expected header 'so3coef v1 L=<L>'");
  const int L = parse_int(keyed_value(head[2], "L", source, line), source, line);
  SO3Coeffs<double> c(L);
  while (next_line(is, text, line)) {
    const auto tok = split_ws(text);
    if (tok.size() != 5)
      fail(source, line, "expected 'l m n re im' (5 fields), got " +
                             std::to_string(tok.size()));
    const int l = parse_int(tok[0], source, line);
    const int m = parse_int(tok[1], source, line);
    const int n = parse_int(tok[2], source, line);
    if (l < 0 || l > L) fail(source, line, "degree " + tok[0] + " outside [0, L]");
    if (std::abs(m) > l || std::abs(n) > l)
      fail(source, line, "orders out of range for degree " + tok[0]);
    c(l, m, n) = {parse_double(tok[3], source, line),
                  parse_double(tok[4], source, line)};
  }
  return c;
}

// ---------------------------------------------------------------------------
// polefig

void write_polefig(std::ostream& os, const PoleFigureGrid<double>& fig) {
  fig.check_consistent();
  os << "polefig v1 h=" << format_number(fig.h.x()) << ','
     << format_number(fig.h.y()) << ',' << format_number(fig.h.z())
     << " n=" << fig.size() << "\n";
  for (std::size_t j = 0; j < fig.size(); ++j)
    os << format_number(fig.theta[j]) << ' ' << format_number(fig.phi[j]) << ' '
       << format_number(fig.values[Eigen::Index(j)]) << "\n";
}

PoleFigureGrid<double> read_polefig(std::istream& is, const std::string& source) {
  int line = 0;
  std::string text;
  if (!next_line(is, text, line)) fail(source, 1, "empty input");
  const auto head = split_ws(text);
  if (head.size() != 4 || head[0] != "polefig" || head[1] != "v1")
    fail(source, line, "expected header 'polefig v1 h=<x>,<y>,<z> n=<N>'");
  const auto hcomp = split_char(keyed_value(head[2], "h", source, line), ',');
  if (hcomp.size() != 3) fail(source, line, "h needs three comma-separated components");
  const double hx = parse_double(hcomp[0], source, line);
  const double hy = parse_double(hcomp[1], source, line);
  const double hz = parse_double(hcomp[2], source, line);
  const int n = parse_int(keyed_value(head[3], "n", source, line), source, line);
  if (n <= 0) fail(source, line, "point count must be positive");

  PoleFigureGrid<double> fig;
  try {
    fig.h = UnitVector<double>::from_normalized(Vec3<double>(hx, hy, hz), 1e-9);
  } catch (const NumericError&) {
    fail(source, line, "h is not a unit vector");
  }
  fig.theta.reserve(std::size_t(n));
  fig.phi.reserve(std::size_t(n));
  fig.values.resize(n);
  for (int j = 0; j < n; ++j) {
    if (!next_line(is, text, line))
      fail(source, line + 1, "expected " + std::to_string(n) + " points, got " +
                                 std::to_string(j));
    const auto tok = split_ws(text);
    if (tok.size() != 3) fail(source, line, "expected 'theta phi value' (3 fields)");
    fig.theta.push_back(parse_double(tok[0], source, line));
    fig.phi.push_back(parse_double(tok[1], source, line));
    fig.values[j] = parse_double(tok[2], source, line);
  }
  if (next_line(is, text, line)) fail(source, line, "trailing data after last point");
  return fig;
}

// ---------------------------------------------------------------------------
// dualsym

void write_dualsym(std::ostream& os, const std::vector<double>& symbol) {
  os << "dualsym v1 L=" << (symbol.empty() ? -1 : int(symbol.size()) - 1) << "\n";
  for (std::size_t l = 0; l < symbol.size(); ++l)
    os << l << ' ' << format_number(symbol[l]) << "\n";
}

std::vector<double> read_dualsym(std::istream& is, const std::string& source) {
  int line = 0;
  std::string text;
  if (!next_line(is, text, line)) fail(source, 1, "empty input");
  const auto head = split_ws(text);
  if (head.size() != 3 || head[0] != "dualsym" || head[1] != "v1")
    fail(source, line, "expected header 'dualsym v1 L=<L>'");
  const int L = parse_int(keyed_value(head[2], "L", source, line), source, line);
  if (L < 0) fail(source, line, "band limit must be nonnegative");
  std::vector<double> symbol(std::size_t(L) + 1, 0.0);
  std::vector<bool> seen(symbol.size(), false);
  while (next_line(is, text, line)) {
    const auto tok = split_ws(text);
    if (tok.size() != 2) fail(source, line, "expected 'l value' (2 fields)");
    const int l = parse_int(tok[0], source, line);
    if (l < 0 || l > L) fail(source, line, "degree " + tok[0] + " outside [0, L]");
    symbol[std::size_t(l)] = parse_double(tok[1], source, line);
    seen[std::size_t(l)] = true;
  }
  for (std::size_t l = 0; l < seen.size(); ++l)
    if (!seen[l])
      throw ParseError(source + ": missing degree " + std::to_string(l));
  return symbol;
}

// ---------------------------------------------------------------------------
// File helpers

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError(path + ": cannot open for reading");
  return is;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(path + ": cannot open for writing");
  return os;
}

void check_written(std::ostream& os, const std::string& path) {
  os.flush();
  if (!os) throw Error(path + ": write failed");
}

}  // namespace

void save_so3coef(const std::string& path, const SO3Coeffs<double>& c) {
  auto os = open_out(path);
  write_so3coef(os, c);
  check_written(os, path);
}

SO3Coeffs<double> load_so3coef(const std::string& path) {
  auto is = open_in(path);
  return read_so3coef(is, path);
}

void save_polefig(const std::string& path, const PoleFigureGrid<double>& fig) {
  auto os = open_out(path);
  write_polefig(os, fig);
  check_written(os, path);
}

PoleFigureGrid<double> load_polefig(const std::string& path) {
  auto is = open_in(path);
  return read_polefig(is, path);
}

void save_dualsym(const std::string& path, const std::vector<double>& symbol) {
  auto os = open_out(path);
  write_dualsym(os, symbol);
  check_written(os, path);
}

std::vector<double> load_dualsym(const std::string& path) {
  auto is = open_in(path);
  return read_dualsym(is, path);
}

}  // namespace io
}  // namespace texradon
