#pragma once

#include <optional>
#include <utility>

#include "barnorm/matcore.hpp"
#include "barnorm/polygon.hpp"
#include "barnorm/relaxation.hpp"

namespace barnorm {

using DKResult = RunResult;

struct CHRBounds {
  double rho_lo = 0.0;
  double rho_hi = 0.0;
  /// conv(U_i A_i M).
  SymPolygon image_hull;
};

/// rho_hi = min{r : conv(U A_i M) in r M}, rho_lo = max{r : r M in conv(U A_i M)}.
/// Throws ReducibleInput when the joint image is degenerate.
CHRBounds chr_bounds(const SymPolygon& m, const MatrixSet& set);

/// M' = conv(M U gamma^{-1} U_i A_i M), pruned and calibrated so e is on the
/// boundary.
std::pair<SymPolygon, TraceRow> chr_step(const SymPolygon& m, const MatrixSet& set,
                                         const RunConfig& cfg);

DKResult run_chr(const MatrixSet& set, const RunConfig& cfg = {},
                 std::optional<SymPolygon> start = std::nullopt);

/// Iterates M_{n+1} = rho^{-1} conv(U_i A_i M_n) from an extremal ball. Throws
/// Error(not_extremal) when the seed fails A_i M_0 in rho M_0 or a step grows
/// the body, and ReducibleInput when the joint image degenerates.
DKResult seeded_dk_iteration(const SymPolygon& seed, const MatrixSet& set, double rho,
                             const RunConfig& cfg = {});

/// Barabanov ball of the transposed family -> DK body of the family.
SymPolygon bar_to_dk(const SymPolygon& ball);
/// DK body of the family -> Barabanov ball of the transposed family.
SymPolygon dk_to_bar(const SymPolygon& body);

/// hausdorff(rho M, conv(U_i A_i M)) / diameter(M).
double residual_dk(const SymPolygon& m, const MatrixSet& set, double rho);

}  // namespace barnorm
