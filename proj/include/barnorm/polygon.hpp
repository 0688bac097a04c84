#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "barnorm/linalg.hpp"

namespace barnorm {

/// The symmetric slab {x : |<normal, x>| <= offset}.
struct HalfplanePair {
  Vec2 normal;
  double offset = 1.0;
};

/// Centrally symmetric convex polygon with the origin strictly inside.
///
/// Vertices are stored counterclockwise, 2k of them, with
/// vertices[i + k] == -vertices[i] exactly. The k constraint pairs (one per
/// pair of opposite edges) and the 2k polar vertices are derived on
/// construction, so the Minkowski gauge is a single scan over the polar
/// vertices: |x|_P = max_j |<w_j, x>|.
class SymPolygon {
 public:
  /// Validates a counterclockwise, exactly symmetric vertex list. Throws
  /// Error(degenerate_body) or Error(invalid_input) when the list does not
  /// describe a valid body. Use absco_hull() for arbitrary point clouds.
  static SymPolygon from_vertices(std::vector<Vec2> vertices);

  static SymPolygon square(double half_width = 1.0);
  static SymPolygon diamond(double radius = 1.0);
  /// Regular 2k-gon inscribed in the circle of the given radius, with a vertex
  /// at angle `phase`.
  static SymPolygon regular(std::size_t vertex_count, double radius = 1.0,
                            double phase = 0.0);

  const std::vector<Vec2>& vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  /// One pair per pair of opposite edges.
  std::span<const HalfplanePair> constraints() const noexcept { return constraints_; }
  /// Vertices of the polar body, w_i = normal_i / offset_i for edge i.
  std::span<const Vec2> dual_vertices() const noexcept { return dual_; }

  double gauge(Vec2 x) const noexcept;
  /// Largest Euclidean norm of a vertex.
  double radius() const noexcept { return radius_; }
  double diameter() const noexcept { return 2.0 * radius_; }

  SymPolygon scaled(double factor) const;

 private:
  explicit SymPolygon(std::vector<Vec2> vertices);
  SymPolygon(std::vector<Vec2> vertices, std::vector<Vec2> dual);

  // Trusted: dual[i] must be the normal of edge (vertices[i], vertices[i+1]).
  static SymPolygon from_parts(std::vector<Vec2> vertices, std::vector<Vec2> dual) {
    return SymPolygon(std::move(vertices), std::move(dual));
  }
  static Vec2 edge_normal(Vec2 a, Vec2 b);
  static std::vector<Vec2> edge_normals(const std::vector<Vec2>& v);

  friend SymPolygon polar(const SymPolygon& p);
  friend SymPolygon prune(const SymPolygon& p, double eps);

  std::vector<Vec2> vertices_;
  std::vector<HalfplanePair> constraints_;
  std::vector<Vec2> dual_;
  double radius_ = 0.0;
};

/// Image of a polygon under a singular matrix: a segment, carried as the
/// mapped vertex list so callers can hull it together with other bodies.
struct DegenerateImage {
  std::vector<Vec2> points;
};

using LinearImage = std::variant<SymPolygon, DegenerateImage>;

/// Absolutely convex hull conv(points U -points). Throws
/// Error(degenerate_body) when all points lie on one line through the origin.
SymPolygon absco_hull(std::span<const Vec2> points);

/// Same hull as absco_hull over all the given vertices, for inputs that are
/// vertex cycles of convex polygons (either orientation, possibly flattened
/// onto a segment). Runs in near-linear time by reusing the cyclic order.
SymPolygon absco_hull_of_polygons(std::span<const std::vector<Vec2>> cycles);

double minkowski_norm(const SymPolygon& p, Vec2 x);

/// P intersected with every slab in `slabs`.
SymPolygon clip(const SymPolygon& p, std::span<const HalfplanePair> slabs);

LinearImage linear_image(const SymPolygon& p, const Mat2& a);

/// Mapped vertices of `p` under `a`; valid hull input for singular `a` too.
std::vector<Vec2> mapped_vertices(const SymPolygon& p, const Mat2& a);

SymPolygon polar(const SymPolygon& p);

/// min{r : q is contained in r*p}.
double outer_ratio(const SymPolygon& q, const SymPolygon& p);

/// Largest gauge of the given points in `p`; the containment ratio of
/// an arbitrary (possibly degenerate) point set.
double outer_ratio(std::span<const Vec2> points, const SymPolygon& p);

/// Rescales `p` so that `e` lies on its boundary.
SymPolygon calibrate_to_boundary(const SymPolygon& p, Vec2 e);

/// Euclidean Hausdorff distance.
double hausdorff(const SymPolygon& p, const SymPolygon& q);

/// Distance from `x` to the polygon (zero inside).
double distance_to(const SymPolygon& p, Vec2 x);

/// Drops vertices whose deviation from the chord between the surrounding kept
/// vertices is at most eps * diameter. Opposite vertices are dropped together.
SymPolygon prune(const SymPolygon& p, double eps);

/// Structural check of every SymPolygon invariant. Returns an empty string for
/// a valid polygon, otherwise a description of the first violation.
std::string check_invariants(const SymPolygon& p);

}  // namespace barnorm
