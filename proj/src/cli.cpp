#include "hyperdisp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hyperdisp/acceptance.hpp"
#include "hyperdisp/errors.hpp"
#include "hyperdisp/htransform.hpp"
#include "hyperdisp/kernel.hpp"
#include "hyperdisp/phases.hpp"
#include "hyperdisp/propagator.hpp"
#include "hyperdisp/quadrature.hpp"
#include "hyperdisp/spherical.hpp"

namespace hyperdisp::cli {
namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Header, rows, then a trailing "# key=value" block with the config and results.
class Csv {
 public:
  Csv(std::ostream& os, std::vector<std::string> header) : os_(os) { line(header); }
  void row(const std::vector<std::string>& cells) { line(cells); }
  void note(const std::string& key, const std::string& value) { notes_.emplace_back(key, value); }
  void note(const std::string& key, double value) { note(key, num(value)); }
  void finish(const RunConfig& c) {
    for (const auto& [k, v] : describe(c)) os_ << "# " << k << "=" << v << "\n";
    for (const auto& [k, v] : notes_) os_ << "# " << k << "=" << v << "\n";
    os_.flush();
  }

 private:
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << "\n";
  }
  std::ostream& os_;
  std::vector<std::pair<std::string, std::string>> notes_;
};

template <class F>
int with_output(const RunConfig& c, std::ostream& out, F&& body) {
  const std::string path = output_path(c);
  if (path.empty()) return body(out);
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream file(p);
  if (!file) throw UsageError("cannot open output file " + path);
  return body(file);
}

phases::PhaseSpec phase_of(const RunConfig& c) {
  return phases::validated(phases::make_phase(c.phase, c.degree));
}

htransform::RadialProfile profile_of(const RunConfig& c) {
  const auto grid = htransform::radial_grid(c.s_max, c.radial_panel);
  if (c.profile == "zero") return htransform::sample(grid, [](double) { return 0.0; });
  if (c.profile == "random") {
    std::mt19937_64 rng(c.seed);
    return htransform::sample(grid, htransform::GaussianMixture::random(rng));
  }
  const double w = c.width;
  return htransform::sample(grid, [w](double s) { return htransform::gaussian(s, w); });
}

htransform::SpectralGrid spectral_of(const RunConfig& c) {
  return htransform::SpectralGrid::composite(0.0, c.lambda_max, c.spectral_panel);
}

double l2_of(const htransform::RadialProfile& grid, const std::vector<std::complex<double>>& u) {
  CompensatedSum<double> acc;
  for (std::size_t i = 0; i < u.size(); ++i) acc += grid.weights[i] * std::norm(u[i]);
  return std::sqrt(acc.value());
}

void bind(CLI::App& app, RunConfig& c) {
  app.add_option("--phase", c.phase, "schrodinger, frac, boussinesq or beam");
  app.add_option("--degree", c.degree, "degree a of the fractional phase");
  app.add_option("--lambdas", c.lambdas, "spectral parameters for phi")->delimiter(',');
  app.add_option("--radii", c.radii, "radii for phi")->delimiter(',');
  app.add_option("--method", c.method, "integral, ode or series");
  app.add_option("--series_terms", c.series_terms, "M + 1 for the series method");
  app.add_option("--profile", c.profile, "gaussian, random or zero");
  app.add_option("--width", c.width, "Gaussian width");
  app.add_option("--s_max", c.s_max, "radial extent");
  app.add_option("--radial_panel", c.radial_panel, "radial panel width");
  app.add_option("--lambda_max", c.lambda_max, "spectral cutoff");
  app.add_option("--spectral_panel", c.spectral_panel, "spectral panel width");
  app.add_option("--times", c.times, "evolution times in [0, 1)")->delimiter(',');
  app.add_option("--field", c.field, "abs, re or im");
  app.add_option("--kernel_s", c.kernel_s, "kernel radii in (0, 1)")->delimiter(',');
  app.add_option("--kernel_tau", c.kernel_tau, "kernel time differences")->delimiter(',');
  app.add_option("--kernel_lambda", c.kernel_lambda, "dyadic cutoffs")->delimiter(',');
  app.add_option("--octaves", c.octaves, "bump octaves k")->delimiter(',');
  app.add_option("--betas", c.betas, "Sobolev indices")->delimiter(',');
  app.add_option("--potential_radii", c.potential_radii, "upper limits r")->delimiter(',');
  app.add_option("--mode", c.mode, "quick or full");
  app.add_option("--inject_fault", c.inject_fault, "c0 perturbs the series normalisation");
  app.add_option("--tolerance", c.tolerance, "accuracy tolerance");
  app.add_option("--output", c.output, "output file; stdout if empty or -");
  app.add_option("--output_dir", c.output_dir, "directory for relative output paths");
  app.add_option("--workers", c.workers, "worker threads");
  app.add_option("--seed", c.seed, "random seed");
}

}  // namespace

int cmd_phi(const RunConfig& c, std::ostream& out, std::ostream& err) {
  using spherical::Method;
  const Method primary = c.method == "ode" ? Method::JacobiODE
                         : c.method == "series" ? Method::BesselSeries
                                                : Method::IntegralRep;
  const Method other = primary == Method::IntegralRep ? Method::JacobiODE : Method::IntegralRep;
  spherical::SphericalEval pe{primary, std::min(1e-12, c.tolerance), c.series_terms};
  if (primary == Method::BesselSeries) pe.tolerance = c.tolerance;
  const spherical::SphericalEval oe{other};
  return with_output(c, out, [&](std::ostream& os) {
    Csv csv(os, {"lambda", "s", "method", "value", "cross_method_delta"});
    double worst = 0.0;
    for (double l : c.lambdas)
      for (double s : c.radii) {
        const double v = spherical::phi(l, s, pe);
        const double d = std::fabs(v - spherical::phi(l, s, oe));
        worst = std::max(worst, d);
        csv.row({num(l), num(s), c.method, num(v), num(d)});
      }
    csv.note("max_cross_method_delta", worst);
    csv.finish(c);
    if (worst > c.tolerance) {
      err << "cross-method delta " << worst << " exceeds tolerance " << c.tolerance << "\n";
      return kExitNumeric;
    }
    return kExitOk;
  });
}

int cmd_transform(const RunConfig& c, std::ostream& out, std::ostream&) {
  const auto f = profile_of(c);
  const auto sg = spectral_of(c);
  const auto fh = htransform::forward(f, sg, c.workers);
  const auto back = htransform::inverse(fh, f.radii, c.workers);
  const double c_fit = htransform::calibrate_inversion_constant(htransform::radial_grid(c.s_max, c.radial_panel),
                                                                sg, c.workers);
  const double norm = htransform::l2_norm(f);
  CompensatedSum<double> diff;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = f.values[i] - back.values[i];
    diff += f.weights[i] * d * d;
  }
  const double rel = norm > 0.0 ? std::sqrt(diff.value()) / norm : std::sqrt(diff.value());
  return with_output(c, out, [&](std::ostream& os) {
    Csv csv(os, {"s", "f", "reconstructed", "error"});
    for (std::size_t i = 0; i < f.size(); ++i)
      csv.row({num(f.radii[i]), num(f.values[i]), num(back.values[i]), num(back.values[i] - f.values[i])});
    csv.note("inversion_constant", htransform::kInversionConstant);
    csv.note("calibrated_inversion_constant", c_fit);
    csv.note("round_trip_relative_l2", rel);
    csv.note("parseval_ratio", norm > 0.0 ? num(htransform::plancherel_norm(fh) / norm) : "undefined");
    csv.note("spectral_tail_mass", fh.tail_mass());
    csv.finish(c);
    return kExitOk;
  });
}

int cmd_evolve(const RunConfig& c, std::ostream& out, std::ostream&) {
  const auto p = phase_of(c);
  const auto f = profile_of(c);
  const auto sg = spectral_of(c);
  const auto fh = htransform::forward(f, sg, c.workers);
  const propagator::EvolutionPlan plan{p, c.times, f.radii};
  const auto u = propagator::solution_field(fh, plan, c.workers);

  const double base = htransform::plancherel_norm(fh);
  double drift = 0.0;
  for (double t : c.times)
    if (base > 0.0)
      drift = std::max(drift, std::fabs(htransform::plancherel_norm(propagator::evolve(fh, p, t)) / base - 1.0));
  double initial = NAN;
  if (c.times.front() == 0.0) {
    initial = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) initial = std::max(initial, std::abs(u(i, 0) - f.values[i]));
  }
  return with_output(c, out, [&](std::ostream& os) {
    std::vector<std::string> head{"s\\t"};
    for (double t : c.times) head.push_back(num(t));
    Csv csv(os, head);
    for (std::size_t i = 0; i < f.size(); ++i) {
      std::vector<std::string> cells{num(f.radii[i])};
      for (std::size_t j = 0; j < c.times.size(); ++j) {
        const auto z = u(i, j);
        cells.push_back(num(c.field == "re" ? z.real() : c.field == "im" ? z.imag() : std::abs(z)));
      }
      csv.row(cells);
    }
    csv.note("unitarity_drift", drift);
    csv.note("initial_data_max_deviation", std::isnan(initial) ? "no t=0 column" : num(initial));
    csv.note("phase_C1", p.C1);
    csv.note("phase_C2", p.C2);
    csv.note("phase_C3", p.C3);
    std::vector<std::complex<double>> last(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) last[i] = u(i, c.times.size() - 1);
    csv.note("l2_at_last_time", l2_of(f, last));
    csv.finish(c);
    return kExitOk;
  });
}

int cmd_kernel(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto p = phase_of(c);
  kernel::KernelOptions ko;
  ko.tolerance = c.tolerance;
  const auto sw = kernel::bound_sweep(p, c.kernel_s, c.kernel_tau, c.kernel_lambda, c.workers, ko);
  return with_output(c, out, [&](std::ostream& os) {
    Csv csv(os, {"s", "tau", "Lambda", "re_I", "im_I", "abs_I", "s_abs_I", "n_low", "n_J1", "n_J2",
                 "n_J3", "max_class_violation", "status"});
    for (const auto& r : sw.rows) {
      csv.row({num(r.s), num(r.tau), num(r.Lambda), num(r.I.real()), num(r.I.imag()), num(r.abs_I),
               num(r.s_abs_I), std::to_string(r.counts[0]), std::to_string(r.counts[1]),
               std::to_string(r.counts[2]), std::to_string(r.counts[3]), num(r.max_class_violation),
               r.failed ? "failed" : "ok"});
      if (r.failed) err << "cell s=" << r.s << " tau=" << r.tau << " Lambda=" << r.Lambda << ": " << r.error << "\n";
    }
    csv.note("max_s_abs_I", sw.max_s_abs);
    csv.note("trend_log_max_vs_log_s", sw.trend);
    csv.note("lambda_spread", sw.lambda_spread);
    csv.note("max_J3", sw.max_j3);
    csv.note("J3_limit", kernel::j3_limit(p.a, p.C1));
    csv.note("failures", sw.failures);
    csv.finish(c);
    return sw.failures > 0 ? kExitNumeric : kExitOk;
  });
}

int cmd_maximal(const RunConfig& c, std::ostream& out, std::ostream&) {
  const auto p = phase_of(c);
  propagator::MaximalOptions mo;
  mo.workers = c.workers;
  return with_output(c, out, [&](std::ostream& os) {
    Csv csv(os, {"k", "beta", "ratio", "l1_norm", "time_samples", "refinement_change"});
    for (int k : c.octaves) {
      const auto fh = propagator::frequency_bump(k, p, 0.5, mo);
      const auto rep = propagator::maximal_ratio_report(fh, p, 0.5, mo);
      for (double b : c.betas)
        csv.row({std::to_string(k), num(b), num(rep.l1_norm / htransform::sobolev_norm(fh, b)),
                 num(rep.l1_norm), std::to_string(rep.time_samples), num(rep.last_change)});
    }
    csv.note("ball_radius", mo.ball_radius);
    csv.note("escape_factor", mo.escape_factor);
    csv.finish(c);
    return kExitOk;
  });
}

int cmd_geodesic_potential(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return with_output(c, out, [&](std::ostream& os) {
    Csv csv(os, {"r", "value", "doubled_node_change"});
    double worst = 0.0;
    for (double r : c.potential_radii) {
      const double v = kernel::geodesic_potential(r, 8), v2 = kernel::geodesic_potential(r, 16);
      worst = std::max(worst, std::fabs(v - v2));
      csv.row({num(r), num(v), num(std::fabs(v - v2))});
    }
    csv.finish(c);
    if (worst > 1e-10) {
      err << "potential not self-consistent: " << worst << "\n";
      return kExitNumeric;
    }
    return kExitOk;
  });
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream&) {
  acceptance::Options o;
  o.quick = c.mode == "quick";
  o.inject_fault = c.inject_fault;
  o.workers = c.workers;
  o.seed = c.seed;
  int failed = 0;
  acceptance::run_all(o, [&](const acceptance::Result& r) {
    out << acceptance::format(r) << std::endl;
    failed += r.pass ? 0 : 1;
  });
  out << (failed ? "FAILED " : "ALL PASSED ") << failed << " of " << acceptance::kCriteria << "\n";
  return std::min(failed, 125);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Spherical functions, transforms, propagators and kernels on the hyperbolic plane"};
  app.set_config("--config", "", "key=value configuration file");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();
  app.require_subcommand(1, 1);
  bind(app, c);
  const std::vector<std::pair<const char*, const char*>> commands{
      {"phi", "tabulate phi_lambda(s) with a cross-method check"},
      {"transform", "radial transform round trip"},
      {"evolve", "solution field of the dispersive equation"},
      {"kernel", "oscillatory kernel bound sweep"},
      {"maximal", "maximal-ratio experiment over frequency bumps"},
      {"geodesic-potential", "int_0^r sinh(2s)/s ds"},
      {"verify", "run the acceptance criteria"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run with --help for options\n";
    return kExitUsage;
  }

  try {
    c.command = app.get_subcommands().front()->get_name();
    validate(c);
    if (c.command == "phi") return cmd_phi(c, out, err);
    if (c.command == "transform") return cmd_transform(c, out, err);
    if (c.command == "evolve") return cmd_evolve(c, out, err);
    if (c.command == "kernel") return cmd_kernel(c, out, err);
    if (c.command == "maximal") return cmd_maximal(c, out, err);
    if (c.command == "geodesic-potential") return cmd_geodesic_potential(c, out, err);
    return cmd_verify(c, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace hyperdisp::cli
