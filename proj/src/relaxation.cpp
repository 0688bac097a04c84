#include "barnorm/relaxation.hpp"

#include <algorithm>
#include <cmath>

#include "barnorm/error.hpp"

namespace barnorm {
namespace {

constexpr double kInclusionSlack = 1e-9;
// Seeded balls growing past this radius are treated as divergent.
constexpr double kDivergentRadius = 1e150;

// max_i |A_i v|_S for every vertex in the first half of S (the other half is
// its mirror image).
std::vector<double> image_gauges(const SymPolygon& s, const MatrixSet& set) {
  const auto& v = s.vertices();
  const auto half = static_cast<std::ptrdiff_t>(v.size() / 2);
  std::vector<double> out(static_cast<std::size_t>(half), 0.0);
#pragma omp parallel for if (half > 2048)
  for (std::ptrdiff_t j = 0; j < half; ++j) {
    double g = 0.0;
    for (const Mat2& a : set.members()) g = std::max(g, s.gauge(a * v[static_cast<std::size_t>(j)]));
    out[static_cast<std::size_t>(j)] = g;
  }
  return out;
}

Vec2 kernel_direction(const MatrixSet& set) {
  // Every pulled-back normal lies on one line; any x orthogonal to it is
  // annihilated by every member.
  for (const Mat2& a : set.members()) {
    const Vec2 r1{a.a11, a.a12}, r2{a.a21, a.a22};
    const Vec2 r = norm(r1) >= norm(r2) ? r1 : r2;
    if (norm(r) > 0.0) return (1.0 / norm(r)) * Vec2{-r.y, r.x};
  }
  return {1.0, 0.0};
}

SymPolygon intersect_with_scaled(const SymPolygon& s, const SymPolygon& q_polar, double gamma) {
  // (S cap gamma Q)° = absco(S° U gamma^{-1} Q°).
  const auto sd = s.dual_vertices();
  std::vector<std::vector<Vec2>> cycles{std::vector<Vec2>(sd.begin(), sd.end()), q_polar.vertices()};
  for (Vec2& p : cycles[1]) p = (1.0 / gamma) * p;
  return polar(absco_hull_of_polygons(cycles));
}

void require_irreducible(const MatrixSet& set, bool& inconclusive) {
  const Irreducibility verdict = check_irreducible(set);
  if (verdict.kind == Irreducibility::Kind::reducible) {
    throw ReducibleInput("matrix set is reducible: the members share an invariant line",
                         verdict.witness);
  }
  inconclusive = verdict.kind == Irreducibility::Kind::inconclusive;
}

}  // namespace

double averaging(Averaging rule, double t, double s) {
  if (!(t > 0.0) || !(s > 0.0) || !std::isfinite(t) || !std::isfinite(s)) {
    throw Error(ErrorKind::invalid_input, "averaging needs positive finite arguments");
  }
  if (t == s) return t;
  switch (rule) {
    case Averaging::arithmetic:
      return 0.5 * (t + s);
    case Averaging::geometric:
      return std::sqrt(t) * std::sqrt(s);
    case Averaging::harmonic:
      return 2.0 * t * s / (t + s);
  }
  return 0.5 * (t + s);
}

std::string to_string(Averaging rule) {
  switch (rule) {
    case Averaging::arithmetic:
      return "arith";
    case Averaging::geometric:
      return "geom";
    case Averaging::harmonic:
      return "harm";
  }
  return "geom";
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::converged:
      return "converged";
    case Termination::max_iter:
      return "max_iter";
    case Termination::reducible_input:
      return "reducible_input";
  }
  return "max_iter";
}

void RunConfig::validate() const {
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_input, "tol must be positive");
  if (max_iter < 1) throw Error(ErrorKind::invalid_input, "max_iter must be positive");
  if (!std::isfinite(e.x) || !std::isfinite(e.y) || (e.x == 0.0 && e.y == 0.0)) {
    throw Error(ErrorKind::invalid_input, "calibration vector e must be finite and nonzero");
  }
  if (!(prune_eps >= 0.0)) throw Error(ErrorKind::invalid_input, "prune_eps must be >= 0");
}

bool trace_is_monotone(const BoundTrace& trace, double slack) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].rho_lo > trace[i].rho_hi + slack) return false;
    if (i == 0) continue;
    if (trace[i].rho_lo < trace[i - 1].rho_lo - slack) return false;
    if (trace[i].rho_hi > trace[i - 1].rho_hi + slack) return false;
  }
  return true;
}

MRBounds mr_bounds(const SymPolygon& s, const MatrixSet& set) {
  const auto sd = s.dual_vertices();
  std::vector<std::vector<Vec2>> pulled;
  for (const Mat2& t : set.transposes()) {
    std::vector<Vec2> cyc;
    cyc.reserve(sd.size());
    for (const Vec2& w : sd) cyc.push_back(t * w);
    pulled.push_back(std::move(cyc));
  }
  std::optional<SymPolygon> hull;
  try {
    hull = absco_hull_of_polygons(pulled);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degenerate_body) throw;
    throw ReducibleInput("max_i |A_i x| vanishes on a line: the members share a kernel direction",
                         kernel_direction(set));
  }
  SymPolygon q = polar(*hull);
  const std::vector<double> g = image_gauges(s, set);
  const double hi = *std::max_element(g.begin(), g.end());
  const double lo = 1.0 / outer_ratio(q, s);
  return {lo, hi, std::move(q), std::move(*hull)};
}

namespace {

struct Step {
  SymPolygon pruned;
  SymPolygon raw;  // before pruning and calibration
  TraceRow row;
};

Step advance(const SymPolygon& s, const MRBounds& b, const RunConfig& cfg, int n) {
  const double gamma = averaging(cfg.rule, b.rho_lo, b.rho_hi);
  SymPolygon raw = intersect_with_scaled(s, b.q_polar, gamma);
  SymPolygon pruned = calibrate_to_boundary(prune(raw, cfg.prune_eps), cfg.e);
  return {std::move(pruned), std::move(raw), TraceRow{n, b.rho_lo, b.rho_hi, gamma, s.size()}};
}

}  // namespace

std::pair<SymPolygon, TraceRow> mr_step(const SymPolygon& s, const MatrixSet& set,
                                        const RunConfig& cfg) {
  Step st = advance(s, mr_bounds(s, set), cfg, 0);
  return {std::move(st.pruned), st.row};
}

double barabanov_residual(const SymPolygon& s, const MatrixSet& set, double rho) {
  double worst = 0.0;
  for (double g : image_gauges(s, set)) worst = std::max(worst, std::fabs(g - rho) / rho);
  return worst;
}

RunResult run_max_relaxation(const MatrixSet& set, const RunConfig& cfg,
                             std::optional<SymPolygon> start) {
  cfg.validate();
  bool inconclusive = false;
  require_irreducible(set, inconclusive);

  SymPolygon s = calibrate_to_boundary(start ? *start : SymPolygon::square(), cfg.e);
  RunResult result{s};
  result.irreducibility_inconclusive = inconclusive;
  MRBounds b = mr_bounds(s, set);
  for (int n = 0; n < cfg.max_iter; ++n) {
    result.rho_lo = b.rho_lo;
    result.rho_hi = b.rho_hi;
    if (b.rho_hi - b.rho_lo <= cfg.tol * std::max(1.0, b.rho_hi)) {
      result.trace.push_back({n, b.rho_lo, b.rho_hi, averaging(cfg.rule, b.rho_lo, b.rho_hi),
                              s.size()});
      result.termination = Termination::converged;
      break;
    }
    Step st = advance(s, b, cfg, n);
    result.trace.push_back(st.row);
    MRBounds nb = mr_bounds(st.pruned, set);
    // Pruning shrinks the ball slightly; skip it for this step when that
    // would loosen the bracket.
    if ((nb.rho_hi > b.rho_hi || nb.rho_lo < b.rho_lo) && st.raw.size() != st.pruned.size()) {
      s = calibrate_to_boundary(st.raw, cfg.e);
      nb = mr_bounds(s, set);
    } else {
      s = std::move(st.pruned);
    }
    b = std::move(nb);
  }
  result.body = s;
  result.residual = barabanov_residual(s, set, result.estimate());
  return result;
}

SymPolygon ext_one_step(const SymPolygon& s, const MatrixSet& set, double rho) {
  if (!(rho > 0.0)) throw Error(ErrorKind::invalid_input, "rho must be positive");
  return mr_bounds(s, set).q.scaled(rho);
}

double extremality_ratio(const SymPolygon& s, const MatrixSet& set, double rho) {
  const std::vector<double> g = image_gauges(s, set);
  return *std::max_element(g.begin(), g.end()) / rho;
}

RunResult seeded_bar_iteration(const SymPolygon& seed, const MatrixSet& set, double rho,
                               const RunConfig& cfg) {
  cfg.validate();
  if (!(rho > 0.0)) throw Error(ErrorKind::invalid_input, "rho must be positive");
  // An extremal seed is enough for the iteration to be well defined; reducible
  // families are refused only when Q degenerates inside mr_bounds.
  const bool inconclusive = check_irreducible(set).kind == Irreducibility::Kind::inconclusive;
  const double seed_ratio = extremality_ratio(seed, set, rho);
  if (seed_ratio > 1.0 + kInclusionSlack) {
    throw Error(ErrorKind::not_extremal,
                "seed ball is not extremal at rho: max_i |A_i v| / rho reaches " +
                    std::to_string(seed_ratio));
  }

  SymPolygon s = seed;
  RunResult result{s};
  result.irreducibility_inconclusive = inconclusive;
  for (int n = 0; n < cfg.max_iter; ++n) {
    const MRBounds b = mr_bounds(s, set);
    result.rho_lo = b.rho_lo;
    result.rho_hi = b.rho_hi;
    result.trace.push_back({n, b.rho_lo, b.rho_hi, rho, s.size()});
    SymPolygon next = prune(b.q.scaled(rho), cfg.prune_eps);
    // Norms decrease pointwise, so balls grow: S_n inside S_{n+1}.
    const double inclusion = outer_ratio(s, next);
    result.inclusion_ratios.push_back(inclusion);
    if (inclusion > 1.0 + kInclusionSlack) {
      throw Error(ErrorKind::not_extremal,
                  "ball shrank at step " + std::to_string(n) + " (ratio " +
                      std::to_string(inclusion) + "); rho is below the joint spectral radius");
    }
    const double gap = hausdorff(next, s);
    s = std::move(next);
    if (gap <= cfg.tol * s.diameter()) {
      result.termination = Termination::converged;
      break;
    }
    if (s.radius() > kDivergentRadius) break;
  }
  result.body = s;
  result.residual = barabanov_residual(s, set, rho);
  return result;
}

LmainResult build_lmain_norm(const MatrixSet& set, double kappa, int n, const SymPolygon& base,
                             std::uint64_t budget) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw Error(ErrorKind::invalid_input, "kappa must be positive and finite");
  }
  if (n < 1) throw Error(ErrorKind::invalid_input, "order n must be >= 1");

  const auto bd = base.dual_vertices();
  const std::size_t half = bd.size() / 2;
  std::vector<Vec2> pts(bd.begin(), bd.begin() + static_cast<std::ptrdiff_t>(half));
  for (int k = 1; k < n; ++k) {
    const double scale = std::pow(kappa, -k);
    enumerate_products(
        set, k,
        [&](const ProductWord& w) {
          const Mat2 t = w.product.transposed();
          for (std::size_t j = 0; j < half; ++j) pts.push_back(scale * (t * bd[j]));
        },
        budget);
  }
  LmainResult out{polar(absco_hull(pts))};

  const auto& v = out.ball.vertices();
  for (std::size_t j = 0; j < v.size(); ++j) {
    double lhs = 0.0;
    for (const Mat2& a : set.members()) lhs = std::max(lhs, out.ball.gauge(a * v[j]));
    const double ratio = lhs / (kappa * out.ball.gauge(v[j]));
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    if (ratio > 1.0 + 1e-9) out.violating_vertices.push_back(j);
  }
  out.holds = out.violating_vertices.empty();
  return out;
}

}  // namespace barnorm
