#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "barnorm/matcore.hpp"
#include "barnorm/polygon.hpp"

namespace barnorm {

enum class Averaging { arithmetic, geometric, harmonic };

/// gamma(t, s): arithmetic (t+s)/2, geometric sqrt(ts), harmonic 2ts/(t+s).
double averaging(Averaging rule, double t, double s);

std::string to_string(Averaging rule);

struct RunConfig {
  double tol = 1e-9;  // relative bracket width target
  int max_iter = 5000;
  Vec2 e{1.0, 0.0};   // calibration vector, kept on the boundary
  double prune_eps = 1e-12;
  Averaging rule = Averaging::geometric;

  void validate() const;
};

struct TraceRow {
  int n = 0;
  double rho_lo = 0.0;
  double rho_hi = 0.0;
  double gamma = 0.0;
  std::size_t vertices = 0;
};

using BoundTrace = std::vector<TraceRow>;

/// True when lo <= hi at every row, lo is nondecreasing and hi nonincreasing,
/// each up to `slack`.
bool trace_is_monotone(const BoundTrace& trace, double slack = 1e-12);

enum class Termination { converged, max_iter, reducible_input };

std::string to_string(Termination t);

struct RunResult {
  SymPolygon body;
  double rho_lo = 0.0;
  double rho_hi = 0.0;
  BoundTrace trace{};
  double residual = 0.0;  // relative units
  Termination termination = Termination::max_iter;
  bool irreducibility_inconclusive = false;
  // Seeded iterations: per-step containment ratio between consecutive bodies
  // (outer_ratio of the previous body in the next for growing balls, of the
  // next body in the previous for shrinking DK bodies). Empty otherwise.
  std::vector<double> inclusion_ratios{};

  double estimate() const { return 0.5 * (rho_lo + rho_hi); }
  double width() const { return rho_hi - rho_lo; }
};

struct MRBounds {
  double rho_lo = 0.0;
  double rho_hi = 0.0;
  /// Q = {x : max_i |A_i x|_S <= 1}.
  SymPolygon q;
  /// Polar of Q: the absolutely convex hull of the pulled-back normals A_i^T w.
  SymPolygon q_polar;
};

/// Bracket of max_i |A_i x|_S / |x|_S over x != 0. Throws ReducibleInput when
/// Q is unbounded.
MRBounds mr_bounds(const SymPolygon& s, const MatrixSet& set);

/// One max-relaxation step: S' = S intersected with gamma*Q, pruned and
/// calibrated so that |e|_{S'} = 1.
std::pair<SymPolygon, TraceRow> mr_step(const SymPolygon& s, const MatrixSet& set,
                                        const RunConfig& cfg);

/// max over vertices v of S of |max_i |A_i v|_S - rho| / rho.
double barabanov_residual(const SymPolygon& s, const MatrixSet& set, double rho);

RunResult run_max_relaxation(const MatrixSet& set, const RunConfig& cfg = {},
                             std::optional<SymPolygon> start = std::nullopt);

/// Ball of |x|_0 = max_i |A_i x| / rho, i.e. rho * Q.
SymPolygon ext_one_step(const SymPolygon& s, const MatrixSet& set, double rho);

/// Largest ratio max_i |A_i v|_S / rho over vertices of S; <= 1 means S is the
/// ball of an extremal norm at rho.
double extremality_ratio(const SymPolygon& s, const MatrixSet& set, double rho);

/// Iterates S_{n+1} = ext_one_step(S_n) from an extremal seed. Throws
/// Error(not_extremal) when the seed fails the extremality check or a step
/// shrinks the ball, and ReducibleInput when Q becomes unbounded.
RunResult seeded_bar_iteration(const SymPolygon& seed, const MatrixSet& set, double rho,
                               const RunConfig& cfg = {});

struct LmainResult {
  SymPolygon ball;
  /// Largest max_i |A_i v|_n / (kappa |v|_n) over vertices v.
  double worst_ratio = 0.0;
  bool holds = false;
  std::vector<std::size_t> violating_vertices{};
};

/// Ball of |x|_n = max{|x|, r_1(x)/kappa, ..., r_{n-1}(x)/kappa^{n-1}} built on
/// `base`, with the one-step inequality max_i |A_i x|_n <= kappa |x|_n
/// verified at every vertex (relative slack 1e-9).
LmainResult build_lmain_norm(const MatrixSet& set, double kappa, int n, const SymPolygon& base,
                             std::uint64_t budget = kDefaultProductBudget);

}  // namespace barnorm
