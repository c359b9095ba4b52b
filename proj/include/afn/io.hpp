#pragma once

// Flat CSV / JSON formats. Numbers are written with 17 significant digits, so any
// double survives a write/read cycle unchanged.
//
//   potential      x,q            + metadata {"b": num|"inf", "h": num|"inf", "cutoff": num}
//   A-function     alpha,A
//   A-field        gamma,x,C      (row-major over the triangle)
//   m sweep        kappa,m
//   residuals      kappa,residual

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "afn/core_types.hpp"

namespace afn::io {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

namespace detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_number(const std::string& s, const std::string& where) {
  if (s.empty()) throw InputError(where + ": empty field");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) throw InputError(where + ": cannot parse number '" + s + "'");
  if (!std::isfinite(v)) throw InputError(where + ": non-finite value '" + s + "'");
  return v;
}

}  // namespace detail

/// Read a CSV whose header must equal `expected`.
inline Table read_csv(std::istream& in, const std::vector<std::string>& expected, const std::string& name) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!detail::trim(line).empty()) break;
  }
  const auto header = detail::split(detail::trim(line));
  if (header != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    throw InputError(name + ":" + std::to_string(lineno) + ": expected header '" + want + "'");
  }
  Table t{header, std::vector<std::vector<double>>(expected.size())};
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split(line);
    const std::string where = name + ":" + std::to_string(lineno);
    if (cells.size() != expected.size())
      throw InputError(where + ": expected " + std::to_string(expected.size()) + " fields, got " +
                       std::to_string(cells.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) t.columns[c].push_back(detail::parse_number(cells[c], where));
  }
  if (t.columns[0].empty()) throw InputError(name + ": no data rows");
  return t;
}

inline Table read_csv_file(const std::string& path, const std::vector<std::string>& expected) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_csv(in, expected, path);
}

inline void write_csv(std::ostream& out, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns) {
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns[0].size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << fmt(columns[c][r]);
    out << '\n';
  }
}

inline void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                           const std::vector<std::vector<double>>& columns) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  write_csv(out, header, columns);
}

/// Uniform step of an ascending abscissa column starting at 0.
inline double uniform_step(const std::vector<double>& xs, const std::string& name) {
  if (xs.size() < 2) throw InputError(name + ": need at least two rows");
  if (std::abs(xs[0]) > 1e-12) throw InputError(name + ": first abscissa must be 0");
  const double step = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  if (!(step > 0.0)) throw InputError(name + ": abscissae must ascend");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double expect = static_cast<double>(i) * step;
    if (std::abs(xs[i] - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
      throw InputError(name + ":" + std::to_string(i + 2) + ": spacing is not uniform");
  }
  return step;
}

// ---- metadata -------------------------------------------------------------

inline Interval interval_from_json(const nlohmann::json& j, const std::string& name) {
  auto is_inf = [](const nlohmann::json& v) { return v.is_string() && v.get<std::string>() == "inf"; };
  if (!j.is_object() || !j.contains("b")) throw InputError(name + ": metadata needs a \"b\" field");
  const auto& b = j.at("b");
  if (is_inf(b)) {
    if (!j.contains("cutoff") || !j.at("cutoff").is_number())
      throw InputError(name + ": half-line metadata needs a numeric \"cutoff\"");
    return HalfLine{j.at("cutoff").get<double>()};
  }
  if (!b.is_number()) throw InputError(name + ": \"b\" must be a number or \"inf\"");
  if (!j.contains("h")) throw InputError(name + ": finite-interval metadata needs \"h\"");
  const auto& h = j.at("h");
  if (is_inf(h)) return FiniteInterval{b.get<double>(), BoundaryCondition::dirichlet()};
  if (!h.is_number()) throw InputError(name + ": \"h\" must be a number or \"inf\"");
  return FiniteInterval{b.get<double>(), BoundaryCondition::finite(h.get<double>())};
}

inline nlohmann::json interval_to_json(const Interval& iv) {
  if (const auto* f = std::get_if<FiniteInterval>(&iv)) {
    nlohmann::json j{{"b", f->b}};
    if (f->bc.is_dirichlet())
      j["h"] = "inf";
    else
      j["h"] = f->bc.h();
    return j;
  }
  return {{"b", "inf"}, {"h", "inf"}, {"cutoff", std::get<HalfLine>(iv).cutoff}};
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(2) << '\n';
}

// ---- domain types -----------------------------------------------------------

inline Potential read_potential(std::istream& csv, const std::string& name, const Interval& iv) {
  auto t = read_csv(csv, {"x", "q"}, name);
  const double step = uniform_step(t.columns[0], name);
  return Potential(std::move(t.columns[1]), step, iv);
}

inline Potential read_potential_files(const std::string& csv_path, const std::string& meta_path) {
  const auto iv = interval_from_json(read_json_file(meta_path), meta_path);
  std::ifstream in(csv_path);
  if (!in) throw InputError("cannot open " + csv_path);
  return read_potential(in, csv_path, iv);
}

inline void write_potential(std::ostream& out, const Potential& p) {
  std::vector<double> xs(p.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i) * p.step();
  write_csv(out, {"x", "q"}, {xs, std::vector<double>(p.samples().begin(), p.samples().end())});
}

inline AFunction read_afunction(std::istream& in, const std::string& name) {
  auto t = read_csv(in, {"alpha", "A"}, name);
  const double step = uniform_step(t.columns[0], name);
  return AFunction(std::move(t.columns[1]), step);
}

inline AFunction read_afunction_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_afunction(in, path);
}

inline void write_afunction(std::ostream& out, const AFunction& a, const std::string& value_name = "A") {
  std::vector<double> xs(a.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i) * a.step();
  write_csv(out, {"alpha", value_name}, {xs, std::vector<double>(a.samples().begin(), a.samples().end())});
}

inline void write_afield(std::ostream& out, const AField& f) {
  out << "gamma,x,C\n";
  for (std::size_t i = 0; i <= f.order(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      out << fmt(static_cast<double>(i) * f.step()) << ',' << fmt(static_cast<double>(j) * f.step()) << ','
          << fmt(f(i, j)) << '\n';
}

inline void write_residual(std::ostream& out, const ResidualCurve& c) {
  out << "kappa,residual\n";
  for (const auto& pt : c.points()) out << fmt(pt.kappa) << ',' << fmt(pt.residual) << '\n';
}

inline nlohmann::json to_json(const BoundaryExpansion& e) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : e.terms) terms.push_back({{"j", t.j}, {"A", t.A}, {"B", t.B}});
  return {{"b", e.b}, {"terms", terms}};
}

inline nlohmann::json to_json(const BetaCoeffs& b) { return {{"beta", b.at_zero}}; }

}  // namespace afn::io
