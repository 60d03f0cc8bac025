// Command line front end: generate model densities, project pole figures,
// reconstruct even coefficients, and run numerical self-checks.
//
// Exit codes: 0 success; 2 usage, format, band-limit, or model errors;
// 3 data errors (grids that cannot support the requested reconstruction);
// 4 calibration or numeric failures (including failed verify checks).

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "texradon/error.hpp"
#include "texradon/goniometry.hpp"
#include "texradon/harmonics.hpp"
#include "texradon/inversion.hpp"
#include "texradon/io.hpp"
#include "texradon/limits.hpp"
#include "texradon/parallel.hpp"
#include "texradon/radon.hpp"
#include "texradon/rng.hpp"

namespace {

using namespace texradon;

// ---------------------------------------------------------------------------
// Option payloads

struct GenOptions {
  std::string model = "uniform";
  std::vector<double> center;  // ZYZ Euler angles
  double kappa = 0.0;
  int L = -1;
  std::string output;
};

struct ProjectOptions {
  std::string input;
  std::vector<std::vector<double>> directions;
  bool raw = false;
  int grid_L = -1;  // default: coefficient band limit
  std::string output;
};

struct InvertOptions {
  std::vector<std::string> inputs;
  int L = -1;
  std::string method = "slice";
  std::string output;
  std::string truth;
  bool matrix = false;
};

struct VerifyOptions {
  std::vector<std::string> suites;
  int L = 8;
  std::uint64_t seed = 20260822ULL;
  int trials = 20;
  std::string symbol_out;
};

UnitVector<double> parse_direction(const std::vector<double>& v) {
  if (v.size() != 3) throw ParseError("direction needs exactly three components");
  try {
    return UnitVector<double>(v[0], v[1], v[2]);
  } catch (const NumericError&) {
    throw ParseError("direction must be a nonzero finite vector");
  }
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

// ---------------------------------------------------------------------------
// gen

int run_gen(const GenOptions& opt) {
  OdfModel<double> model;
  if (opt.model == "uniform") {
    model.kind = OdfKind::Uniform;
  } else if (opt.model == "unimodal") {
    model.kind = OdfKind::Unimodal;
  } else {
    throw ParseError("unknown model '" + opt.model + "' (uniform|unimodal)");
  }
  if (!opt.center.empty()) {
    if (opt.center.size() != 3)
      throw ParseError("--center needs three Euler angles a,b,c");
    model.center = euler_to_rotation(opt.center[0], opt.center[1], opt.center[2]);
  }
  model.concentration = opt.kappa;
  model.bandlimit = opt.L;

  const SO3Coeffs<double> c = make_odf(model);
  if (opt.output.empty())
    io::write_so3coef(std::cout, c);
  else
    io::save_so3coef(opt.output, c);
  return 0;
}

// ---------------------------------------------------------------------------
// project

int run_project(const ProjectOptions& opt) {
  const SO3Coeffs<double> c = io::load_so3coef(opt.input);
  const int grid_L = opt.grid_L >= 0 ? opt.grid_L : c.bandlimit();
  std::vector<UnitVector<double>> hs;
  for (const auto& v : opt.directions) hs.push_back(parse_direction(v));

  for (std::size_t i = 0; i < hs.size(); ++i) {
    PoleFigureGrid<double> fig =
        pole_figure(c, hs[i], make_polar_grid(hs[i], grid_L), opt.raw);
    if (opt.output.empty()) {
      io::write_polefig(std::cout, fig);
    } else {
      const std::string path =
          hs.size() == 1 ? opt.output : opt.output + "." + std::to_string(i);
      io::save_polefig(path, fig);
    }

    Eigen::Index jmax = 0;
    fig.values.maxCoeff(&jmax);
    std::cerr << "figure h=" << io::format_number(fig.h.x()) << ','
              << io::format_number(fig.h.y()) << ',' << io::format_number(fig.h.z())
              << ": mean " << fmt(pole_figure_mean(fig)) << ", max "
              << fmt(fig.values[jmax]) << " at theta "
              << fmt(fig.theta[std::size_t(jmax)]) << " phi "
              << fmt(fig.phi[std::size_t(jmax)]) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// invert

int run_invert(const InvertOptions& opt) {
  std::vector<PoleFigureGrid<double>> figures;
  for (const auto& path : opt.inputs) figures.push_back(io::load_polefig(path));

  ReconstructOptions<double> ropt;
  if (opt.method == "slice") {
    ropt.method = ReconstructMethod::DirectLS;
  } else if (opt.method == "backprojection") {
    ropt.method = ReconstructMethod::NormalEquations;
  } else {
    throw ParseError("unknown method '" + opt.method + "' (slice|backprojection)");
  }

  const ReconstructResult<double> res = reconstruct_even(figures, opt.L, ropt);
  if (opt.output.empty())
    io::write_so3coef(std::cout, res.coeffs);
  else
    io::save_so3coef(opt.output, res.coeffs);

  const auto& rep = res.report;
  std::cerr << rep.summary() << "\n";
  std::cerr << "condition on identifiable subspace: " << fmt(rep.condition) << "\n";
  for (std::size_t i = 0; i < rep.figure_rms.size(); ++i)
    std::cerr << "figure " << i << " residual rms: " << fmt(rep.figure_rms[i]) << "\n";
  if (opt.matrix) {
    std::cerr << "degree  size  identifiable\n";
    for (std::size_t i = 0; i < rep.degrees.size(); ++i)
      std::cerr << rep.degrees[i] << "  " << rep.degree_size[i] << "  "
                << rep.degree_identifiable[i] << "\n";
  }
  if (!opt.truth.empty()) {
    const SO3Coeffs<double> truth = io::load_so3coef(opt.truth);
    const SO3Coeffs<double> even = even_projector(truth);
    std::cerr << "even-part error vs truth: " << fmt(res.coeffs.max_abs_diff(even))
              << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct CheckResult {
  std::string name;
  bool pass;
  double metric;
  double tol;
};

void run_verify_suites(const VerifyOptions& opt, std::vector<CheckResult>& out) {
  const int L = opt.L;
  Rng rng(opt.seed);
  const SO3Coeffs<double> c = rng.so3_coeffs(L, /*real_valued=*/true, /*unit_mean=*/true);
  const PairCoeffs<double> B = radon_harmonic(c);
  const auto f = [&](const Rotation<double>& g) { return so3_synthesize(c, g); };
  const auto F = [&](const UnitVector<double>& h, const UnitVector<double>& r) {
    return s2s2_synthesize(B, h, r);
  };
  const auto Psym = [&](const UnitVector<double>& h, const UnitVector<double>& r) {
    return (s2s2_synthesize(B, h, r) + s2s2_synthesize(B, -h, r)).real() / 2.0;
  };

  const auto want = [&](const std::string& name) {
    if (opt.suites.empty()) return true;
    for (const auto& s : opt.suites)
      if (s == name) return true;
    return false;
  };
  const auto push = [&](const std::string& name, double metric, double tol) {
    out.push_back({name, metric <= tol, metric, tol});
  };

  if (want("slice")) {
    double worst = 0;
    for (int t = 0; t < opt.trials; ++t) {
      const auto h = rng.unit_vector();
      const auto r = rng.unit_vector();
      const double geo = radon_geometric(f, h, r).real();
      const double har = s2s2_synthesize(B, h, r).real();
      worst = std::max(worst, std::abs(geo - har));
    }
    push("slice", worst, 1e-8);
  }

  if (want("roundtrip")) {
    const SO3Coeffs<double> back_slice = invert_slice(s2s2_analyze<double>(F, L));
    push("roundtrip_slice", back_slice.max_abs_diff(c), 1e-8);
    const SO3Coeffs<double> back_dual = invert_backprojection<double>(F, L);
    push("roundtrip_backprojection", back_dual.max_abs_diff(c), 1e-8);
  }

  if (want("friedel")) {
    double worst = 0;
    for (int t = 0; t < opt.trials; ++t) {
      const auto h = rng.unit_vector();
      const auto r = rng.unit_vector();
      const double p = Psym(h, r);
      worst = std::max(worst, std::abs(p - Psym(-h, r)));
      worst = std::max(worst, std::abs(p - Psym(h, -r)));
    }
    push("friedel", worst, 1e-10);
  }

  if (want("s3")) {
    double worst = 0;
    for (int t = 0; t < opt.trials; ++t) {
      const auto h = rng.unit_vector();
      const auto r = rng.unit_vector();
      const auto a = radon_geometric(f, h, r, 256);
      const auto b = s3_circle_integral(f, h, r, 512);
      worst = std::max(worst, std::abs(a - b));
    }
    push("s3", worst, 1e-9);
  }

  if (want("parseval")) {
    const auto rule = so3_quadrature<double>(2 * L);
    const auto nodes = rule.so3_nodes();
    const auto w = rule.weights();
    std::vector<double> vals(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t i) {
      vals[i] = std::norm(so3_synthesize(c, nodes[i]));
    });
    double quad = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) quad += w[i] * vals[i];
    const double power = so3_power(c);
    push("parseval", std::abs(quad - power) / power, 1e-10);
  }

  if (want("symbol")) {
    const int Ls = std::min(L, 8);
    const std::vector<double> kappa = calibrate_dual_symbol<double>(Ls);
    double worst = 0;
    for (int l = 0; l <= Ls; ++l)
      worst = std::max(worst, std::abs(kappa[std::size_t(l)] * double(2 * l + 1) - 1.0));
    push("symbol", worst, 1e-9);
    if (!opt.symbol_out.empty()) io::save_dualsym(opt.symbol_out, kappa);
  }
}

int run_verify(const VerifyOptions& opt) {
  static const std::vector<std::string> known = {"slice",   "roundtrip", "friedel",
                                                 "s3",      "parseval",  "symbol"};
  for (const auto& s : opt.suites) {
    bool ok = false;
    for (const auto& k : known) ok = ok || (s == k);
    if (!ok) throw ParseError("unknown suite '" + s + "'");
  }
  std::vector<CheckResult> results;
  run_verify_suites(opt, results);
  bool all_pass = true;
  for (const auto& r : results) {
    std::cout << r.name << ' ' << (r.pass ? "pass" : "fail") << ' ' << fmt(r.metric)
              << ' ' << fmt(r.tol) << "\n";
    all_pass = all_pass && r.pass;
  }
  if (!all_pass) throw NumericError("one or more verification checks failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("TEXRADON_LMAX")) {
    try {
      texradon::limits::set_max_bandlimit(std::stoi(env));
    } catch (const std::exception& e) {
      std::cerr << "TEXRADON_LMAX: " << e.what() << "\n";
      return 2;
    }
  }

  CLI::App app{
      "circle transforms, inversion, and pole figure tools for orientation "
      "densities"};
  app.require_subcommand(1);
  // --h is a data option (crystal direction), so help is long-form only.
  app.set_help_flag("--help", "print help");
  app.set_config("--config", "", "read options from a key = value file");
  int threads = 1;
  app.add_option("--threads", threads, "worker thread count (results identical)")
      ->check(CLI::PositiveNumber);

  GenOptions gen;
  CLI::App* cmd_gen = app.add_subcommand("gen", "generate model density coefficients");
  cmd_gen->add_option("--model", gen.model, "uniform|unimodal")
      ->check(CLI::IsMember({"uniform", "unimodal"}));
  cmd_gen->add_option("--center", gen.center, "peak location, ZYZ Euler angles a,b,c")
      ->delimiter(',')
      ->expected(3);
  cmd_gen->add_option("--kappa", gen.kappa, "concentration (unimodal)");
  cmd_gen->add_option("--L", gen.L, "band limit")->required();
  cmd_gen->add_option("-o,--output", gen.output, "output coefficient file");

  ProjectOptions project;
  CLI::App* cmd_project =
      app.add_subcommand("project", "compute pole figures of a density");
  cmd_project->set_help_flag("--help", "print help");
  cmd_project->add_option("input", project.input, "coefficient file")->required();
  cmd_project
      ->add_option("--h", project.directions, "crystal direction x,y,z (repeatable)")
      ->delimiter(',')
      ->required();
  cmd_project->add_flag("--raw-radon", project.raw,
                        "one-sided transform (no antipodal symmetrization)");
  cmd_project->add_option("--grid-L", project.grid_L,
                          "grid band limit (default: coefficient band)");
  cmd_project->add_option("-o,--output", project.output,
                          "output file (suffix .<i> when several directions)");

  InvertOptions invert;
  CLI::App* cmd_invert =
      app.add_subcommand("invert", "reconstruct even coefficients from pole figures");
  cmd_invert->add_option("inputs", invert.inputs, "pole figure files")->required();
  cmd_invert->add_option("--L", invert.L, "reconstruction band limit")->required();
  cmd_invert->add_option("--method", invert.method, "slice|backprojection")
      ->check(CLI::IsMember({"slice", "backprojection"}));
  cmd_invert->add_option("-o,--output", invert.output, "output coefficient file");
  cmd_invert->add_option("--truth", invert.truth,
                         "reference coefficients; report even-part error");
  cmd_invert->add_flag("--matrix", invert.matrix, "print per-degree identifiability");

  VerifyOptions verify;
  CLI::App* cmd_verify = app.add_subcommand("verify", "run numerical self-checks");
  cmd_verify->add_option(
      "--suite", verify.suites,
      "subset of slice,roundtrip,friedel,s3,parseval,symbol (default all)")
      ->delimiter(',');
  cmd_verify->add_option("--L", verify.L, "band limit for the checks");
  cmd_verify->add_option("--seed", verify.seed, "random seed");
  cmd_verify->add_option("--trials", verify.trials, "sample count per check")
      ->check(CLI::PositiveNumber);
  cmd_verify->add_option("--symbol-out", verify.symbol_out,
                         "write the measured dual symbol to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    texradon::set_thread_count(threads);
    if (app.got_subcommand(cmd_gen)) return run_gen(gen);
    if (app.got_subcommand(cmd_project)) return run_project(project);
    if (app.got_subcommand(cmd_invert)) return run_invert(invert);
    if (app.got_subcommand(cmd_verify)) return run_verify(verify);
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const texradon::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const texradon::CalibrationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const texradon::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const texradon::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
