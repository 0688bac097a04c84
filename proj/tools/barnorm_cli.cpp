#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "barnorm/error.hpp"
#include "barnorm/output.hpp"
#include "barnorm/problem.hpp"
#include "barnorm/report.hpp"

namespace {

constexpr int kUsageExit = 4;

struct Overrides {
  std::string input;
  std::optional<std::string> algorithm;
  std::optional<std::string> gamma;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<int> order;
  std::optional<double> rho;
  std::optional<std::string> csv, svg, json;
};

void apply(const Overrides& o, barnorm::Problem& p) {
  using barnorm::Error;
  using barnorm::ErrorKind;
  if (o.algorithm) {
    const auto a = barnorm::parse_algorithm(*o.algorithm);
    if (!a) throw Error(ErrorKind::invalid_input, "unknown algorithm '" + *o.algorithm + "'");
    p.algorithm = *a;
  }
  if (o.gamma) {
    const auto r = barnorm::parse_averaging(*o.gamma);
    if (!r) throw Error(ErrorKind::invalid_input, "unknown averaging rule '" + *o.gamma + "'");
    p.config.rule = *r;
  }
  if (o.tol) p.config.tol = *o.tol;
  if (o.max_iter) p.config.max_iter = *o.max_iter;
  if (o.order) {
    if (*o.order < 1) throw Error(ErrorKind::invalid_input, "--order must be >= 1");
    p.order = *o.order;
  }
  if (o.rho) {
    if (!(*o.rho > 0.0)) throw Error(ErrorKind::invalid_input, "--rho must be positive");
    p.rho = *o.rho;
  }
  p.config.validate();
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw barnorm::Error(barnorm::ErrorKind::io, "cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw barnorm::Error(barnorm::ErrorKind::io, "error writing '" + path + "'");
}

void write_figure(const barnorm::Report& r, const std::string& path) {
  const barnorm::MatrixSet set(r.problem.matrices);
  const double rho = r.estimate();
  std::vector<barnorm::Shape> shapes;
  if (r.dk_body) {
    shapes = barnorm::dk_figure(*r.dk_body, set, rho,
                                r.barabanov_ball ? &*r.barabanov_ball : nullptr);
  } else if (r.barabanov_ball) {
    shapes = barnorm::barabanov_figure(*r.barabanov_ball, set, rho);
  } else if (r.body) {
    shapes.push_back(barnorm::outline(*r.body, {"black", barnorm::LineStyle::solid, r.body_kind}));
  } else {
    std::cerr << "barnorm: warning: algorithm '" << barnorm::to_string(r.problem.algorithm)
              << "' produces no body; SVG not written\n";
    return;
  }
  barnorm::emit_svg(shapes, path);
}

void print_summary(const barnorm::Report& r) {
  std::printf("algorithm   %s\n", barnorm::to_string(r.problem.algorithm).c_str());
  std::printf("termination %s\n", barnorm::to_string(r.outcome).c_str());
  if (r.exact) {
    std::printf("exact rho   %.17g (member A%zu)\n", r.exact->rho, r.exact->witness + 1);
  }
  std::printf("bracket     [%.17g, %.17g]\n", r.rho_lo, r.rho_hi);
  for (const auto& s : r.runs) {
    std::printf("  %-10s [%.12f, %.12f] %d iterations, %s, residual %.3g\n", s.algorithm.c_str(),
                s.rho_lo, s.rho_hi, s.iterations, s.termination.c_str(), s.residual);
  }
  if (r.lmain) {
    std::printf("lmain       kappa %.12f, worst ratio %.12f, %s\n", r.lmain->kappa,
                r.lmain->worst_ratio, r.lmain->holds ? "holds" : "VIOLATED");
  }
  if (r.body) std::printf("body        %s, %zu vertices\n", r.body_kind.c_str(), r.body->size());
}

int compute(const Overrides& o) {
  std::optional<barnorm::Problem> problem;
  try {
    problem = barnorm::load_problem(o.input);
    apply(o, *problem);
    const barnorm::Report report = barnorm::dispatch(*problem);
    print_summary(report);
    if (o.json) write_json(*o.json, barnorm::to_json(report));
    if (o.csv) {
      if (const auto* trace = report.primary_trace()) {
        barnorm::emit_csv(*trace, *o.csv);
      } else {
        std::cerr << "barnorm: warning: no bound trace; CSV not written\n";
      }
    }
    if (o.svg) write_figure(report, *o.svg);
    return barnorm::exit_code(report);
  } catch (const barnorm::Error& e) {
    std::cerr << "barnorm: " << barnorm::to_string(e.kind()) << ": " << e.what() << '\n';
    if (const auto* red = dynamic_cast<const barnorm::ReducibleInput*>(&e);
        red && red->witness()) {
      std::cerr << "barnorm: invariant line spanned by (" << red->witness()->x << ", "
                << red->witness()->y << ")\n";
    }
    if (o.json) {
      try {
        write_json(*o.json, barnorm::error_json(e, problem));
      } catch (const barnorm::Error& w) {
        std::cerr << "barnorm: " << w.what() << '\n';
      }
    }
    return barnorm::exit_code(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Barabanov norms and Dranishnikov-Konyagin bodies of 2x2 matrix families"};
  app.set_version_flag("--version", std::string("barnorm ") + barnorm::version());
  app.require_subcommand(1);

  Overrides o;
  CLI::App* cmd = app.add_subcommand("compute", "Bracket the joint spectral radius of a problem file");
  cmd->add_option("--input", o.input, "Problem file (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--algorithm", o.algorithm,
                  "max-relax | chr | seeded-bar | seeded-dk | brute | lmain | auto");
  cmd->add_option("--gamma", o.gamma, "Averaging rule: arith | geom | harm");
  cmd->add_option("--tol", o.tol, "Bracket width target");
  cmd->add_option("--max-iter", o.max_iter, "Iteration cap");
  cmd->add_option("--order", o.order, "Product length n for brute and lmain");
  cmd->add_option("--rho", o.rho, "Known spectral radius for the seeded modes");
  cmd->add_option("--csv", o.csv, "Write the bound trace as CSV");
  cmd->add_option("--svg", o.svg, "Write a figure of the computed bodies");
  cmd->add_option("--json", o.json, "Write the full report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageExit;
  }
  return compute(o);
}
