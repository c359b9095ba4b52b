#pragma once

// Batch front end. `run` parses argv (without the program name), executes one
// subcommand, writes its artifact to -o and prints a one-line summary.
//
// Exit codes: 0 ok, 2 input error / bad usage, 3 numerical failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "afn/aseries.hpp"
#include "afn/asym.hpp"
#include "afn/atransport.hpp"
#include "afn/boundary.hpp"
#include "afn/core_types.hpp"
#include "afn/io.hpp"
#include "afn/laplace.hpp"
#include "afn/mfun.hpp"

namespace afn::cli {

/// "lo:hi:n" -> n evenly spaced values including both ends.
inline std::vector<double> parse_range(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() != 3) throw InputError("range '" + spec + "' must look like lo:hi:n");
  const double lo = io::detail::parse_number(parts[0], "range lo");
  const double hi = io::detail::parse_number(parts[1], "range hi");
  const double nd = io::detail::parse_number(parts[2], "range n");
  if (nd < 1 || nd != std::floor(nd)) throw InputError("range '" + spec + "': n must be a positive integer");
  const auto n = static_cast<std::size_t>(nd);
  if (n > 1 && !(hi > lo)) throw InputError("range '" + spec + "': hi must exceed lo");
  return linspace(lo, hi, n);
}

inline std::vector<double> parse_list(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(io::detail::parse_number(io::detail::trim(part), "list"));
  if (out.empty()) throw InputError("empty list '" + spec + "'");
  return out;
}

namespace detail {

struct Options {
  std::string potential, meta, afunction, output, kappa, jet, field_out;
  std::optional<double> a, step, floor;
  double x = 0.0;
  double h1 = 1.0, h2 = 0.0;
  double l1_upto = -1.0;
  int terms = 2, n = 1, stride = 1;
  std::string term = "sum";
  double alpha_max = -1.0;
};

inline Potential load_potential(const Options& o) {
  if (o.potential.empty() || o.meta.empty()) throw InputError("--potential and --meta are required");
  auto p = io::read_potential_files(o.potential, o.meta);
  if (o.step) p = resample(p, *o.step);
  return p;
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

template <class F>
void with_output(const Options& o, F&& write) {
  if (o.output.empty()) return;
  std::ofstream out(o.output);
  if (!out) throw InputError("cannot write " + o.output);
  write(out);
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline void cmd_m(const Options& o, std::ostream& out) {
  const auto p = load_potential(o);
  require(!o.kappa.empty(), "--kappa lo:hi:n is required");
  const auto ks = parse_range(o.kappa);
  const auto ms = m_curve(p, ks, o.x);
  with_output(o, [&](std::ostream& f) { io::write_csv(f, {"kappa", "m"}, {ks, ms}); });
  out << "points=" << ks.size() << " m_first=" << io::fmt(ms.front()) << " m_last=" << io::fmt(ms.back()) << '\n';
}

inline void cmd_a_from_q(const Options& o, std::ostream& out) {
  const auto p = load_potential(o);
  const double a = o.a.value_or(p.length());
  const auto fwd = a_from_q(p, a);
  with_output(o, [&](std::ostream& f) { io::write_afunction(f, fwd.a); });
  if (!o.field_out.empty()) {
    std::ofstream f(o.field_out);
    if (!f) throw InputError("cannot write " + o.field_out);
    io::write_afield(f, fwd.field);
  }
  out << "points=" << fwd.a.size() << " max_abs_A=" << io::fmt(max_abs(fwd.a.samples())) << '\n';
}

inline void cmd_q_from_a(const Options& o, std::ostream& out) {
  require(!o.afunction.empty(), "--afunction is required");
  const auto a0 = io::read_afunction_file(o.afunction);
  const auto q = q_from_a(a0);
  with_output(o, [&](std::ostream& f) { io::write_potential(f, q); });
  out << "points=" << q.size() << " max_abs_q=" << io::fmt(max_abs(q.samples())) << '\n';
}

inline void cmd_residual(const Options& o, std::ostream& out) {
  const auto p = load_potential(o);
  require(o.a.has_value(), "--a is required");
  require(!o.kappa.empty(), "--kappa lo:hi:n is required");
  const auto ks = parse_range(o.kappa);
  const auto curve = representation_residual(p, *o.a, ks);
  with_output(o, [&](std::ostream& f) { io::write_residual(f, curve); });
  const double slope = log_slope(curve, ks.front(), ks.back(), o.floor.value_or(kDefaultFloor));
  out << "slope=" << io::fmt(slope) << '\n';
}

inline void cmd_roundtrip(const Options& o, std::ostream& out) {
  const auto p = load_potential(o);
  const double a = o.a.value_or(p.length());
  const auto fwd = a_from_q(p, a);
  const auto back = q_from_a(fwd.a);
  const double upto = o.l1_upto > 0.0 ? o.l1_upto : a;
  require(upto <= a * (1.0 + 1e-12), "--l1-upto must not exceed --a");
  std::vector<double> xs(back.size()), qs(back.size()), diff(back.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    xs[i] = static_cast<double>(i) * p.step();
    qs[i] = p[i];
    diff[i] = back[i] - p[i];
  }
  const auto l1 = abs_prefix_integral(diff, p.step());
  const double s = upto / p.step();
  const auto i = std::min(static_cast<std::size_t>(s), l1.size() - 1);
  const double err = i + 1 >= l1.size() ? l1.back() : l1[i] + (s - static_cast<double>(i)) * (l1[i + 1] - l1[i]);
  with_output(o, [&](std::ostream& f) {
    io::write_csv(f, {"x", "q", "q_reconstructed"},
                  {xs, qs, std::vector<double>(back.samples().begin(), back.samples().end())});
  });
  out << "L1_error=" << io::fmt(err) << '\n';
}

inline void cmd_boundary_fit(const Options& o, std::ostream& out) {
  const auto p = load_potential(o);
  const auto e = expansion_coefficients(p, o.terms);
  if (!o.output.empty()) io::write_json_file(o.output, io::to_json(e));
  out << "A1=" << io::fmt(e.terms.front().A) << " B1=" << io::fmt(e.terms.front().B) << '\n';
}

inline void cmd_h_limit(const Options& o, std::ostream& out) {
  const auto p = load_potential(o);
  require(p.is_finite_interval(), "h-limit needs a finite interval");
  require(!o.kappa.empty(), "--kappa lo:hi:n is required");
  const auto ks = parse_range(o.kappa);
  const auto b = p.finite().b;
  const Potential p1(std::vector<double>(p.samples().begin(), p.samples().end()), p.step(),
                     FiniteInterval{b, BoundaryCondition::finite(o.h1)});
  const Potential p2(std::vector<double>(p.samples().begin(), p.samples().end()), p.step(),
                     FiniteInterval{b, BoundaryCondition::finite(o.h2)});
  const auto r = h_difference_limit_detail(p1, p2, ks);
  with_output(o, [&](std::ostream& f) { io::write_csv(f, {"kappa", "scaled_difference"}, {r.kappas, r.scaled}); });
  out << "limit=" << io::fmt(r.limit) << " usable=" << r.usable << '\n';
}

inline void cmd_beta(const Options& o, std::ostream& out) {
  require(!o.jet.empty(), "--jet q0,q1,... is required");
  const auto jet = parse_list(o.jet);
  const auto b = beta_recursion(jet, o.n);
  if (!o.output.empty()) io::write_json_file(o.output, io::to_json(b));
  out << "beta=[";
  for (std::size_t i = 0; i < b.at_zero.size(); ++i) out << (i ? "," : "") << io::fmt(b.at_zero[i]);
  out << "]\n";
}

inline void cmd_series(const Options& o, std::ostream& out) {
  const auto p = load_potential(o);
  require(o.stride > 0, "--stride must be positive");
  const SeriesGrid grid{static_cast<std::size_t>(o.stride), o.alpha_max >= 0.0 ? o.alpha_max : p.length()};
  if (o.term == "sum") {
    const auto s = series_sum(p, grid);
    with_output(o, [&](std::ostream& f) {
      std::vector<double> xs(s.sum.size());
      for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i) * s.sum.step();
      io::write_csv(f, {"alpha", "A_n", "tail_bound"},
                    {xs, std::vector<double>(s.sum.samples().begin(), s.sum.samples().end()), s.tail});
    });
    out << "max_abs=" << io::fmt(max_abs(s.sum.samples())) << " max_tail=" << io::fmt(max_abs(s.tail)) << '\n';
    return;
  }
  const int n = static_cast<int>(io::detail::parse_number(o.term, "--term"));
  const auto t = series_term(p, n, grid);
  with_output(o, [&](std::ostream& f) { io::write_afunction(f, t, "A_n"); });
  out << "max_abs=" << io::fmt(max_abs(t.samples())) << '\n';
}

inline void cmd_volterra(const Options& o, std::ostream& out) {
  require(!o.afunction.empty(), "--afunction is required");
  const auto g = io::read_afunction_file(o.afunction);
  const auto k = volterra_inverse(g);
  const auto prod = transform_product(g, k);
  with_output(o, [&](std::ostream& f) { io::write_afunction(f, k); });
  out << "max_residual=" << io::fmt(max_abs(prod.samples())) << '\n';
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"A-function toolkit: m-functions, the A-amplitude and its inverse"};
  app.name("afn");
  app.require_subcommand(1);
  detail::Options o;

  auto add_potential = [&](CLI::App* s) {
    s->add_option("--potential", o.potential, "potential CSV (x,q)");
    s->add_option("--meta", o.meta, "potential metadata JSON");
    s->add_option("--step", o.step, "resample the potential to this step first");
  };
  auto add_output = [&](CLI::App* s) { s->add_option("-o,--output", o.output, "output path"); };

  auto* m = app.add_subcommand("m", "m(-kappa^2, x) over a kappa sweep");
  add_potential(m), add_output(m);
  m->add_option("--kappa", o.kappa, "lo:hi:n");
  m->add_option("--x", o.x, "evaluation point");

  auto* af = app.add_subcommand("a-from-q", "A(alpha) on [0, a] from the potential");
  add_potential(af), add_output(af);
  af->add_option("--a", o.a, "right end of the alpha range");
  af->add_option("--field", o.field_out, "also write the full field (gamma,x,C)");

  auto* qa = app.add_subcommand("q-from-a", "potential on [0, a] from A(alpha)");
  add_output(qa);
  qa->add_option("--afunction", o.afunction, "A CSV (alpha,A)");

  auto* res = app.add_subcommand("residual", "representation residual and its decay slope");
  add_potential(res), add_output(res);
  res->add_option("--a", o.a, "alpha range of the kernel");
  res->add_option("--kappa", o.kappa, "lo:hi:n");
  res->add_option("--floor", o.floor, "residuals at or below this are ignored by the fit");

  auto* rt = app.add_subcommand("roundtrip", "q -> A -> q and the L1 error");
  add_potential(rt), add_output(rt);
  rt->add_option("--a", o.a, "alpha range");
  rt->add_option("--l1-upto", o.l1_upto, "measure the L1 error on [0, this] (default a)");

  auto* bf = app.add_subcommand("boundary-fit", "boundary expansion coefficients (A_j, B_j)");
  add_potential(bf), add_output(bf);
  bf->add_option("--terms", o.terms, "number of terms");

  auto* hl = app.add_subcommand("h-limit", "limit of -e^{2 b kappa}(m_1 - m_2)");
  add_potential(hl), add_output(hl);
  hl->add_option("--h1", o.h1, "first boundary parameter");
  hl->add_option("--h2", o.h2, "second boundary parameter");
  hl->add_option("--kappa", o.kappa, "lo:hi:n");

  auto* be = app.add_subcommand("beta", "asymptotic coefficients beta_j(0) from a Taylor jet");
  add_output(be);
  be->add_option("--jet", o.jet, "q0,q1,... Taylor coefficients of q at 0");
  be->add_option("--n", o.n, "highest index");

  auto* se = app.add_subcommand("series", "low-order series terms A_1..A_3 or their sum");
  add_potential(se), add_output(se);
  se->add_option("--term", o.term, "1, 2, 3 or sum");
  se->add_option("--stride", o.stride, "evaluate every stride-th node");
  se->add_option("--alpha-max", o.alpha_max, "largest alpha (default L)");

  auto* vo = app.add_subcommand("volterra", "kernel of the inverse transform");
  add_output(vo);
  vo->add_option("--afunction", o.afunction, "kernel CSV (alpha,A)");

  if (!args.empty() && !args.front().starts_with("-") && !app.get_subcommand_no_throw(args.front())) {
    err << "error: unknown subcommand '" << args.front() << "'\n" << app.help();
    return 2;
  }

  std::vector<std::string> argv{"afn"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::vector<const char*> cargv;
  for (const auto& s : argv) cargv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (m->parsed()) detail::cmd_m(o, out);
    else if (af->parsed()) detail::cmd_a_from_q(o, out);
    else if (qa->parsed()) detail::cmd_q_from_a(o, out);
    else if (res->parsed()) detail::cmd_residual(o, out);
    else if (rt->parsed()) detail::cmd_roundtrip(o, out);
    else if (bf->parsed()) detail::cmd_boundary_fit(o, out);
    else if (hl->parsed()) detail::cmd_h_limit(o, out);
    else if (be->parsed()) detail::cmd_beta(o, out);
    else if (se->parsed()) detail::cmd_series(o, out);
    else if (vo->parsed()) detail::cmd_volterra(o, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace afn::cli
