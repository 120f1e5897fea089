#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "ilcconv/error.hpp"
#include "ilcconv/io.hpp"

namespace ilcconv::io {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void put_optional(std::ostream& os, const std::optional<double>& x) {
  if (x) os << format_number(*x);
}

std::optional<double> get_optional(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return parse_number(s);
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

double parse_number(std::string_view text) {
  double x = 0.0;
  auto r = std::from_chars(text.data(), text.data() + text.size(), x);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw InvalidArgument("not a number: '" + std::string(text) + "'");
  }
  return x;
}

Tri parse_tri(std::string_view text) {
  if (text.empty()) return Tri::Absent;
  if (text == "1") return Tri::True;
  if (text == "0") return Tri::False;
  if (text == "m") return Tri::Marginal;
  throw InvalidArgument("bad verdict value '" + std::string(text) + "' (expected 1, 0, m or empty)");
}

void write_sweep_csv(std::ostream& os, const std::vector<PointReport>& reports) {
  os << kSweepHeader << '\n';
  for (const auto& r : reports) {
    os << format_number(r.point.a_gain) << ',' << format_number(r.point.b_pole) << ',';
    put_optional(os, r.sup_t);
    os << ',';
    put_optional(os, r.sigma_sq);
    os << ',';
    put_optional(os, r.rho);
    for (Tri t : {r.mc_z, r.mc_sigma, r.ac_rho, r.mc_iter, r.ac_iter, r.mc_analytic, r.ac_analytic}) {
      os << ',' << to_string(t);
    }
    os << ',';
    for (std::size_t i = 0; i < r.flags.size(); ++i) {
      if (i) os << ';';
      // commas inside error messages would break the row
      std::string f = r.flags[i];
      for (char& c : f)
        if (c == ',' || c == '\n' || c == '\r') c = ' ';
      os << f;
    }
    os << '\n';
  }
}

std::vector<PointReport> read_sweep_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument("sweep CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSweepHeader) throw InvalidArgument("sweep CSV header mismatch: '" + line + "'");
  std::vector<PointReport> reports;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 13) {
      throw InvalidArgument("sweep CSV line " + std::to_string(lineno) + ": expected 13 columns, got " +
                            std::to_string(cols.size()));
    }
    try {
      PointReport r;
      r.point = {parse_number(cols[0]), parse_number(cols[1])};
      r.sup_t = get_optional(cols[2]);
      r.sigma_sq = get_optional(cols[3]);
      r.rho = get_optional(cols[4]);
      r.mc_z = parse_tri(cols[5]);
      r.mc_sigma = parse_tri(cols[6]);
      r.ac_rho = parse_tri(cols[7]);
      r.mc_iter = parse_tri(cols[8]);
      r.ac_iter = parse_tri(cols[9]);
      r.mc_analytic = parse_tri(cols[10]);
      r.ac_analytic = parse_tri(cols[11]);
      if (!cols[12].empty())
        for (auto f : split(cols[12], ';')) r.flags.emplace_back(f);
      reports.push_back(std::move(r));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("sweep CSV line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return reports;
}

}  // namespace ilcconv::io
