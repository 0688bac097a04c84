#include "barnorm/report.hpp"

#include <algorithm>
#include <cmath>

#include "barnorm/dkbody.hpp"

#ifndef BARNORM_VERSION
#define BARNORM_VERSION "0.0.0"
#endif

namespace barnorm {
namespace {

using nlohmann::json;

// Relative slack when intersecting brackets from different algorithms.
constexpr double kBracketSlack = 1e-10;
constexpr std::size_t kDefaultSeedVertices = 64;

int steps_of(const RunResult& r) {
  const int rows = static_cast<int>(r.trace.size());
  return r.termination == Termination::converged && rows > 0 ? rows - 1 : rows;
}

RunSummary summarize(const std::string& name, const RunResult& r, bool seeded) {
  RunSummary s;
  s.algorithm = name;
  s.rho_lo = r.rho_lo;
  s.rho_hi = r.rho_hi;
  s.iterations = seeded ? static_cast<int>(r.trace.size()) : steps_of(r);
  s.termination = to_string(r.termination);
  s.residual = r.residual;
  s.irreducibility_inconclusive = r.irreducibility_inconclusive;
  s.trace = r.trace;
  return s;
}

Outcome outcome_of(const RunResult& r) {
  return r.termination == Termination::converged ? Outcome::converged : Outcome::max_iter;
}

std::optional<SymPolygon> seed_polygon(const Problem& p) {
  if (!p.seed_ball) return std::nullopt;
  return SymPolygon::from_vertices(*p.seed_ball);
}

double seeded_rho(const Problem& p, const MatrixSet& set) {
  if (p.rho) return *p.rho;
  if (const auto sc = symmetric_shortcut(set)) return sc->rho;
  throw Error(ErrorKind::invalid_input,
              "seeded modes need 'rho' unless the family admits the symmetric shortcut");
}

void require_irreducible(const MatrixSet& set) {
  const Irreducibility verdict = check_irreducible(set);
  if (verdict.kind == Irreducibility::Kind::reducible) {
    throw ReducibleInput("matrix set is reducible: the members share an invariant line",
                         verdict.witness);
  }
}

std::string bracket_text(const RunSummary& s) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s [%.17g, %.17g]", s.algorithm.c_str(), s.rho_lo, s.rho_hi);
  return buf;
}

void run_auto(const Problem& p, const MatrixSet& set, Report& r) {
  require_irreducible(set);
  r.exact = symmetric_shortcut(set);

  const DKResult chr = run_chr(set, p.config, seed_polygon(p));
  r.runs.push_back(summarize("chr", chr, false));
  r.dk_body = chr.body;
  bool all_converged = chr.termination == Termination::converged;
  if (set.all_nonsingular()) {
    const RunResult mr = run_max_relaxation(set, p.config, seed_polygon(p));
    r.runs.push_back(summarize("max-relax", mr, false));
    r.barabanov_ball = mr.body;
    all_converged = all_converged && mr.termination == Termination::converged;
  }

  double lo = 0.0, hi = INFINITY;
  for (const RunSummary& s : r.runs) {
    lo = std::max(lo, s.rho_lo);
    hi = std::min(hi, s.rho_hi);
  }
  const double slack = kBracketSlack * std::max(1.0, hi);
  if (lo > hi + slack) {
    std::string msg = "brackets do not intersect:";
    for (const RunSummary& s : r.runs) msg += " " + bracket_text(s);
    throw InconsistentBrackets(msg, r.runs);
  }
  if (lo > hi) lo = hi = 0.5 * (lo + hi);
  if (r.exact) {
    const double rho = r.exact->rho;
    if (rho < lo - slack || rho > hi + slack) {
      std::string msg = "exact value " + std::to_string(rho) + " lies outside the brackets:";
      for (const RunSummary& s : r.runs) msg += " " + bracket_text(s);
      throw InconsistentBrackets(msg, r.runs);
    }
    lo = hi = rho;
    r.outcome = Outcome::exact;
  } else {
    r.outcome = all_converged ? Outcome::converged : Outcome::max_iter;
  }
  r.rho_lo = lo;
  r.rho_hi = hi;
  if (r.barabanov_ball) {
    r.body = r.barabanov_ball;
    r.body_kind = "barabanov-ball";
  } else {
    r.body = r.dk_body;
    r.body_kind = "dk-body";
  }
}

void run_brute(const Problem& p, const MatrixSet& set, Report& r) {
  RunSummary s;
  s.algorithm = "brute";
  double lo = 0.0, hi = INFINITY;
  for (int k = 1; k <= p.order; ++k) {
    const BoundPair b = bounds_rho_n(set, k);
    lo = std::max(lo, b.lower);
    hi = std::min(hi, b.upper);
    s.trace.push_back({k, lo, hi, 0.5 * (lo + hi), 0});
  }
  s.rho_lo = lo;
  s.rho_hi = hi;
  s.iterations = p.order;
  s.termination = "complete";
  s.residual = hi - lo;
  r.runs.push_back(s);
  r.rho_lo = lo;
  r.rho_hi = hi;
  r.outcome = Outcome::complete;
}

void run_lmain(const Problem& p, const MatrixSet& set, Report& r) {
  const SymPolygon base = seed_polygon(p).value_or(SymPolygon::square());
  const double kappa = bounds_rho_n(set, p.order, PolygonalNorm{base}).upper;
  const double lower = bounds_rho_n(set, p.order).lower;
  const LmainResult lm = build_lmain_norm(set, kappa, p.order, base);
  r.lmain = LmainSummary{kappa, p.order, lm.worst_ratio, lm.violating_vertices.size(), lm.holds};
  r.body = lm.ball;
  r.body_kind = "lmain-ball";
  r.rho_lo = lower;
  r.rho_hi = kappa;
  r.outcome = lm.holds ? Outcome::complete : Outcome::verification_failed;
}

json vertices_json(const SymPolygon& p) {
  json out = json::array();
  for (const Vec2& v : p.vertices()) out.push_back({v.x, v.y});
  return out;
}

json problem_json(const Problem& p) {
  json mats = json::array();
  for (const Mat2& a : p.matrices) mats.push_back(json::array({a.a11, a.a12, a.a21, a.a22}));
  json out = {
      {"source", p.source},
      {"algorithm", to_string(p.algorithm)},
      {"gamma", to_string(p.config.rule)},
      {"tol", p.config.tol},
      {"max_iter", p.config.max_iter},
      {"e", {p.config.e.x, p.config.e.y}},
      {"prune_eps", p.config.prune_eps},
      {"n", p.order},
      {"matrices", mats},
  };
  out["rho"] = p.rho ? json(*p.rho) : json(nullptr);
  if (p.seed_ball) {
    json sb = json::array();
    for (const Vec2& v : *p.seed_ball) sb.push_back({v.x, v.y});
    out["seed_ball"] = sb;
  } else {
    out["seed_ball"] = nullptr;
  }
  return out;
}

json provenance_json(const std::optional<Problem>& p) {
  json out = {{"tool", "barnorm"}, {"tool_version", version()}};
  out["config"] = p ? problem_json(*p) : json(nullptr);
  return out;
}

}  // namespace

const char* version() { return BARNORM_VERSION; }

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::exact:
      return "exact";
    case Outcome::converged:
      return "converged";
    case Outcome::complete:
      return "complete";
    case Outcome::max_iter:
      return "max_iter";
    case Outcome::verification_failed:
      return "verification_failed";
  }
  return "max_iter";
}

const BoundTrace* Report::primary_trace() const {
  for (const RunSummary& s : runs) {
    if (!s.trace.empty()) return &s.trace;
  }
  return nullptr;
}

Report dispatch(const Problem& p) {
  p.config.validate();
  const MatrixSet set(p.matrices);
  Report r;
  r.problem = p;

  switch (p.algorithm) {
    case Algorithm::automatic:
      run_auto(p, set, r);
      break;
    case Algorithm::max_relax: {
      const RunResult mr = run_max_relaxation(set, p.config, seed_polygon(p));
      r.runs.push_back(summarize("max-relax", mr, false));
      r.rho_lo = mr.rho_lo;
      r.rho_hi = mr.rho_hi;
      r.outcome = outcome_of(mr);
      r.body = r.barabanov_ball = mr.body;
      r.body_kind = "barabanov-ball";
      break;
    }
    case Algorithm::chr: {
      const DKResult chr = run_chr(set, p.config, seed_polygon(p));
      r.runs.push_back(summarize("chr", chr, false));
      r.rho_lo = chr.rho_lo;
      r.rho_hi = chr.rho_hi;
      r.outcome = outcome_of(chr);
      r.body = r.dk_body = chr.body;
      r.body_kind = "dk-body";
      break;
    }
    case Algorithm::seeded_bar: {
      const double rho = seeded_rho(p, set);
      const SymPolygon seed = seed_polygon(p).value_or(SymPolygon::regular(kDefaultSeedVertices));
      const RunResult sb = seeded_bar_iteration(seed, set, rho, p.config);
      r.runs.push_back(summarize("seeded-bar", sb, true));
      r.rho_lo = sb.rho_lo;
      r.rho_hi = sb.rho_hi;
      r.outcome = outcome_of(sb);
      r.body = r.barabanov_ball = sb.body;
      r.body_kind = "barabanov-ball";
      break;
    }
    case Algorithm::seeded_dk: {
      const double rho = seeded_rho(p, set);
      const SymPolygon seed = seed_polygon(p).value_or(SymPolygon::regular(kDefaultSeedVertices));
      const DKResult sd = seeded_dk_iteration(seed, set, rho, p.config);
      r.runs.push_back(summarize("seeded-dk", sd, true));
      r.rho_lo = sd.rho_lo;
      r.rho_hi = sd.rho_hi;
      r.outcome = outcome_of(sd);
      r.body = r.dk_body = sd.body;
      r.body_kind = "dk-body";
      break;
    }
    case Algorithm::brute:
      run_brute(p, set, r);
      break;
    case Algorithm::lmain:
      run_lmain(p, set, r);
      break;
  }
  return r;
}

int exit_code(const Report& r) {
  switch (r.outcome) {
    case Outcome::exact:
    case Outcome::converged:
    case Outcome::complete:
      return 0;
    case Outcome::max_iter:
      return 2;
    case Outcome::verification_failed:
      return 5;
  }
  return 5;
}

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::reducible_input:
      return 3;
    case ErrorKind::internal_consistency:
      return 5;
    default:
      return 4;
  }
}

json to_json(const RunSummary& s) {
  json trace = json::array();
  for (const TraceRow& row : s.trace) {
    trace.push_back({row.n, row.rho_lo, row.rho_hi, row.gamma, row.vertices});
  }
  return {
      {"algorithm", s.algorithm},
      {"rho_lo", s.rho_lo},
      {"rho_hi", s.rho_hi},
      {"iterations", s.iterations},
      {"termination", s.termination},
      {"residual", s.residual},
      {"irreducibility_inconclusive", s.irreducibility_inconclusive},
      {"trace_columns", {"n", "rho_lo", "rho_hi", "gamma", "vertices"}},
      {"trace", trace},
  };
}

json to_json(const Report& r) {
  json out;
  out["termination"] = to_string(r.outcome);
  out["bracket"] = {{"rho_lo", r.rho_lo},
                    {"rho_hi", r.rho_hi},
                    {"width", r.rho_hi - r.rho_lo},
                    {"estimate", r.estimate()}};
  if (r.exact) {
    out["exact"] = {{"rho", r.exact->rho},
                    {"witness_member", r.exact->witness + 1},
                    {"method", r.exact->all_symmetric ? "symmetric" : "transpose-closed"}};
  } else {
    out["exact"] = nullptr;
  }
  json residuals = json::object(), iterations = json::object(), runs = json::array();
  for (const RunSummary& s : r.runs) {
    residuals[s.algorithm] = s.residual;
    iterations[s.algorithm] = s.iterations;
    runs.push_back(to_json(s));
  }
  out["residuals"] = residuals;
  out["iterations"] = iterations;
  out["runs"] = runs;
  if (r.body) {
    out["body"] = {{"kind", r.body_kind}, {"vertices", vertices_json(*r.body)}};
  } else {
    out["body"] = nullptr;
  }
  if (r.lmain) {
    out["lmain"] = {{"kappa", r.lmain->kappa},
                    {"n", r.lmain->order},
                    {"worst_ratio", r.lmain->worst_ratio},
                    {"violating_vertices", r.lmain->violating_vertices},
                    {"holds", r.lmain->holds}};
  } else {
    out["lmain"] = nullptr;
  }
  out["provenance"] = provenance_json(r.problem);
  return out;
}

json error_json(const Error& e, const std::optional<Problem>& p) {
  json out;
  out["termination"] = e.kind() == ErrorKind::reducible_input ? "reducible_input" : "error";
  out["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
  if (const auto* red = dynamic_cast<const ReducibleInput*>(&e); red && red->witness()) {
    out["error"]["witness_line"] = {red->witness()->x, red->witness()->y};
  }
  if (const auto* inc = dynamic_cast<const InconsistentBrackets*>(&e)) {
    json runs = json::array();
    for (const RunSummary& s : inc->runs()) runs.push_back(to_json(s));
    out["runs"] = runs;
  }
  out["provenance"] = provenance_json(p);
  return out;
}

}  // namespace barnorm
