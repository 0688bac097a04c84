#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "barnorm/matcore.hpp"
#include "barnorm/polygon.hpp"
#include "barnorm/relaxation.hpp"

namespace barnorm {

/// Header `n,rho_lo,rho_hi,gamma,vertices`, one row per trace entry, doubles
/// with 17 significant digits, LF line endings. Throws on an empty trace.
void write_csv(const BoundTrace& trace, std::ostream& out);
void emit_csv(const BoundTrace& trace, const std::filesystem::path& path);

enum class LineStyle { solid, dotted, dash_dot, dashed };

struct Stroke {
  std::string color = "black";  // SVG color keyword
  LineStyle line = LineStyle::solid;
  std::string label;            // written as the path's <title>
};

/// A closed outline. Degenerate images of singular maps are kept as the
/// segment they collapse to.
struct Shape {
  std::vector<Vec2> points;
  Stroke stroke;
};

Shape outline(const SymPolygon& p, Stroke stroke);

/// Standalone SVG 1.1 document; equal-aspect viewBox padded by 10% of the
/// union's bounding box. Identical input gives identical bytes.
std::string render_svg(std::span<const Shape> shapes);
void emit_svg(std::span<const Shape> shapes, const std::filesystem::path& path);

/// The paper's figure layout: the DK body M in black, rho^{-1} A_i M dotted
/// red, dash-dotted blue and then further colors, and the Barabanov ball of
/// the family in green when given.
std::vector<Shape> dk_figure(const SymPolygon& m, const MatrixSet& set, double rho,
                             const SymPolygon* barabanov_ball = nullptr);

/// Barabanov ball S in black with the sets {x : |A_i x| <= rho} of the
/// nonsingular members.
std::vector<Shape> barabanov_figure(const SymPolygon& s, const MatrixSet& set, double rho);

}  // namespace barnorm
