#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "barnorm/error.hpp"
#include "barnorm/matcore.hpp"
#include "barnorm/polygon.hpp"
#include "barnorm/problem.hpp"
#include "barnorm/relaxation.hpp"

namespace barnorm {

/// One algorithm's contribution to a report.
struct RunSummary {
  std::string algorithm;
  double rho_lo = 0.0;
  double rho_hi = 0.0;
  int iterations = 0;
  std::string termination;  // converged | max_iter | complete
  double residual = 0.0;
  bool irreducibility_inconclusive = false;
  BoundTrace trace;
};

enum class Outcome { exact, converged, complete, max_iter, verification_failed };

std::string to_string(Outcome o);

struct LmainSummary {
  double kappa = 0.0;
  int order = 1;
  double worst_ratio = 0.0;
  std::size_t violating_vertices = 0;
  bool holds = false;
};

struct Report {
  Problem problem;
  double rho_lo = 0.0;
  double rho_hi = 0.0;
  Outcome outcome = Outcome::max_iter;
  std::optional<ShortcutResult> exact;
  std::vector<RunSummary> runs;
  // The reported body and what it is: barabanov-ball, dk-body or lmain-ball.
  std::optional<SymPolygon> body;
  std::string body_kind;
  // Barabanov ball of the family itself, kept for figures when available.
  std::optional<SymPolygon> barabanov_ball;
  // DK body of the family, kept for figures when available.
  std::optional<SymPolygon> dk_body;
  std::optional<LmainSummary> lmain;

  double estimate() const { return 0.5 * (rho_lo + rho_hi); }
  /// The trace to emit as CSV: the first run's.
  const BoundTrace* primary_trace() const;
};

/// Algorithms whose brackets do not overlap. Carries every run's trace.
class InconsistentBrackets : public Error {
 public:
  InconsistentBrackets(const std::string& msg, std::vector<RunSummary> runs)
      : Error(ErrorKind::internal_consistency, msg), runs_(std::move(runs)) {}
  const std::vector<RunSummary>& runs() const noexcept { return runs_; }

 private:
  std::vector<RunSummary> runs_;
};

/// Runs the requested algorithm. Reducible families raise ReducibleInput,
/// disagreeing brackets in auto mode raise InconsistentBrackets.
Report dispatch(const Problem& p);

/// Process exit code for a finished report: 0 exact/converged/complete,
/// 2 max_iter, 5 failed verification.
int exit_code(const Report& r);

/// Exit code for an error raised while loading or dispatching.
int exit_code(const Error& e);

nlohmann::json to_json(const Report& r);
nlohmann::json to_json(const RunSummary& s);
/// Error document written in place of a report.
nlohmann::json error_json(const Error& e, const std::optional<Problem>& p);

/// Tool version string.
const char* version();

}  // namespace barnorm
