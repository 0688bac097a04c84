#include "barnorm/dkbody.hpp"

#include <algorithm>
#include <cmath>

#include "barnorm/error.hpp"

namespace barnorm {
namespace {

constexpr double kInclusionSlack = 1e-9;
constexpr double kMinDiameter = 1e-12;

std::vector<std::vector<Vec2>> image_cycles(const SymPolygon& m, const MatrixSet& set) {
  std::vector<std::vector<Vec2>> out;
  for (const Mat2& a : set.members()) out.push_back(mapped_vertices(m, a));
  return out;
}

std::vector<Vec2> joint_image(const SymPolygon& m, const MatrixSet& set) {
  const auto& v = m.vertices();
  const std::size_t half = v.size() / 2;
  std::vector<Vec2> pts;
  pts.reserve(half * set.size());
  for (const Mat2& a : set.members()) {
    for (std::size_t j = 0; j < half; ++j) pts.push_back(a * v[j]);
  }
  return pts;
}

SymPolygon image_hull_or_throw(const SymPolygon& m, const MatrixSet& set) {
  try {
    return absco_hull_of_polygons(image_cycles(m, set));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degenerate_body) throw;
    const Irreducibility verdict = check_irreducible(set);
    throw ReducibleInput("images A_i M are collinear: the family maps the plane onto one line",
                         verdict.witness);
  }
}

}  // namespace

CHRBounds chr_bounds(const SymPolygon& m, const MatrixSet& set) {
  SymPolygon p = image_hull_or_throw(m, set);
  const double hi = outer_ratio(joint_image(m, set), m);
  const double lo = 1.0 / outer_ratio(m, p);
  return {lo, hi, std::move(p)};
}

namespace {

struct Step {
  SymPolygon pruned;
  SymPolygon raw;  // before pruning and calibration
  TraceRow row;
};

Step advance(const SymPolygon& m, const CHRBounds& b, const MatrixSet& set, const RunConfig& cfg,
             int n) {
  const double gamma = averaging(cfg.rule, b.rho_lo, b.rho_hi);
  std::vector<std::vector<Vec2>> cycles = image_cycles(m, set);
  for (auto& cyc : cycles) {
    for (Vec2& p : cyc) p = (1.0 / gamma) * p;
  }
  cycles.push_back(m.vertices());
  SymPolygon raw = absco_hull_of_polygons(cycles);
  SymPolygon pruned = calibrate_to_boundary(prune(raw, cfg.prune_eps), cfg.e);
  return {std::move(pruned), std::move(raw), TraceRow{n, b.rho_lo, b.rho_hi, gamma, m.size()}};
}

}  // namespace

std::pair<SymPolygon, TraceRow> chr_step(const SymPolygon& m, const MatrixSet& set,
                                         const RunConfig& cfg) {
  Step st = advance(m, chr_bounds(m, set), set, cfg, 0);
  return {std::move(st.pruned), st.row};
}

double residual_dk(const SymPolygon& m, const MatrixSet& set, double rho) {
  const SymPolygon p = image_hull_or_throw(m, set);
  return hausdorff(m.scaled(rho), p) / m.diameter();
}

DKResult run_chr(const MatrixSet& set, const RunConfig& cfg, std::optional<SymPolygon> start) {
  cfg.validate();
  const Irreducibility verdict = check_irreducible(set);
  if (verdict.kind == Irreducibility::Kind::reducible) {
    throw ReducibleInput("matrix set is reducible: the members share an invariant line",
                         verdict.witness);
  }

  SymPolygon m = calibrate_to_boundary(start ? *start : SymPolygon::square(), cfg.e);
  DKResult result{m};
  result.irreducibility_inconclusive = verdict.kind == Irreducibility::Kind::inconclusive;
  CHRBounds b = chr_bounds(m, set);
  for (int n = 0; n < cfg.max_iter; ++n) {
    result.rho_lo = b.rho_lo;
    result.rho_hi = b.rho_hi;
    if (b.rho_hi - b.rho_lo <= cfg.tol * std::max(1.0, b.rho_hi)) {
      result.trace.push_back({n, b.rho_lo, b.rho_hi, averaging(cfg.rule, b.rho_lo, b.rho_hi),
                              m.size()});
      result.termination = Termination::converged;
      break;
    }
    Step st = advance(m, b, set, cfg, n);
    result.trace.push_back(st.row);
    CHRBounds nb = chr_bounds(st.pruned, set);
    // Same guard as in max-relaxation: keep the unpruned body when pruning
    // would loosen the bracket.
    if ((nb.rho_hi > b.rho_hi || nb.rho_lo < b.rho_lo) && st.raw.size() != st.pruned.size()) {
      m = calibrate_to_boundary(st.raw, cfg.e);
      nb = chr_bounds(m, set);
    } else {
      m = std::move(st.pruned);
    }
    b = std::move(nb);
  }
  result.body = m;
  result.residual = residual_dk(m, set, result.estimate());
  return result;
}

DKResult seeded_dk_iteration(const SymPolygon& seed, const MatrixSet& set, double rho,
                             const RunConfig& cfg) {
  cfg.validate();
  if (!(rho > 0.0)) throw Error(ErrorKind::invalid_input, "rho must be positive");
  const Irreducibility verdict = check_irreducible(set);
  const double seed_ratio = outer_ratio(joint_image(seed, set), seed) / rho;
  if (seed_ratio > 1.0 + kInclusionSlack) {
    throw Error(ErrorKind::not_extremal,
                "seed body fails A_i M0 in rho M0: containment ratio " +
                    std::to_string(seed_ratio));
  }

  SymPolygon m = seed;
  DKResult result{m};
  result.irreducibility_inconclusive = verdict.kind == Irreducibility::Kind::inconclusive;
  for (int n = 0; n < cfg.max_iter; ++n) {
    const CHRBounds b = chr_bounds(m, set);
    result.rho_lo = b.rho_lo;
    result.rho_hi = b.rho_hi;
    result.trace.push_back({n, b.rho_lo, b.rho_hi, rho, m.size()});
    SymPolygon next = prune(b.image_hull.scaled(1.0 / rho), cfg.prune_eps);
    // Bodies shrink: M_{n+1} inside M_n, and A_i M_n stays inside rho M_n.
    const double inclusion = outer_ratio(next, m);
    result.inclusion_ratios.push_back(inclusion);
    if (inclusion > 1.0 + kInclusionSlack || b.rho_hi / rho > 1.0 + kInclusionSlack) {
      throw Error(ErrorKind::not_extremal,
                  "body grew at step " + std::to_string(n) + " (ratio " +
                      std::to_string(std::max(inclusion, b.rho_hi / rho)) +
                      "); rho is below the joint spectral radius");
    }
    const double gap = hausdorff(next, m);
    m = std::move(next);
    if (m.diameter() < kMinDiameter) {
      throw Error(ErrorKind::not_extremal, "body collapsed towards the origin");
    }
    if (gap <= cfg.tol * m.diameter()) {
      result.termination = Termination::converged;
      break;
    }
  }
  result.body = m;
  result.residual = residual_dk(m, set, rho);
  return result;
}

SymPolygon bar_to_dk(const SymPolygon& ball) { return polar(ball); }

SymPolygon dk_to_bar(const SymPolygon& body) { return polar(body); }

}  // namespace barnorm
