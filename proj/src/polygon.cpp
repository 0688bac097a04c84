#include "barnorm/polygon.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>

#include "barnorm/error.hpp"

namespace barnorm {
namespace {

// Vertices closer than this (relative to the polygon radius) are merged, and
// turns with a smaller sine are treated as straight.
constexpr double kMergeTol = 1e-13;
constexpr double kStraightSine = 1e-13;
// Minimal inradius relative to the circumradius.
constexpr double kMinThickness = 1e-12;

double max_radius(std::span<const Vec2> pts) {
  double r2 = 0.0;
  for (const Vec2& p : pts) r2 = std::max(r2, dot(p, p));
  return std::sqrt(r2);
}

std::vector<Vec2> mirror(const std::vector<Vec2>& half) {
  std::vector<Vec2> full(half);
  full.reserve(2 * half.size());
  for (const Vec2& v : half) full.push_back(-v);
  return full;
}

// Removes duplicate and straight vertices from the first half of an exactly
// symmetric cyclic list (the second half being its negation).
void tidy_half(std::vector<Vec2>& half, double radius) {
  const double merge = kMergeTol * radius;
  bool changed = true;
  while (changed && half.size() >= 2) {
    changed = false;
    for (std::size_t i = 0; i < half.size() && half.size() >= 2;) {
      const std::size_t k = half.size();
      const Vec2 prev = i > 0 ? half[i - 1] : -half[k - 1];
      const Vec2 next = i + 1 < k ? half[i + 1] : -half[0];
      const Vec2 in = half[i] - prev;
      const Vec2 out = next - half[i];
      const double lin = norm(in), lout = norm(out);
      if (lin <= merge || cross(in, out) <= kStraightSine * lin * lout) {
        half.erase(half.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
      } else {
        ++i;
      }
    }
  }
}

double point_segment_distance(Vec2 x, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  double t = len2 > 0.0 ? dot(x - a, d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(x - (a + t * d));
}

}  // namespace

std::vector<Vec2> SymPolygon::edge_normals(const std::vector<Vec2>& v) {
  const std::size_t n = v.size();
  std::vector<Vec2> dual;
  dual.reserve(n);
  for (std::size_t i = 0; i < n; ++i) dual.push_back(edge_normal(v[i], v[(i + 1) % n]));
  return dual;
}

Vec2 SymPolygon::edge_normal(Vec2 a, Vec2 b) {
  // b - a is exact for nearby vertices; cross(a, b - a) avoids the
  // cancellation in cross(a, b) when the edge is short.
  const Vec2 d = b - a;
  const double c = cross(a, d);
  return {d.y / c, -d.x / c};
}

SymPolygon::SymPolygon(std::vector<Vec2> vertices)
    : SymPolygon(vertices, edge_normals(vertices)) {}

SymPolygon::SymPolygon(std::vector<Vec2> vertices, std::vector<Vec2> dual)
    : vertices_(std::move(vertices)), dual_(std::move(dual)) {
  const std::size_t k = dual_.size() / 2;
  constraints_.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double len = norm(dual_[i]);
    constraints_.push_back({(1.0 / len) * dual_[i], 1.0 / len});
  }
  radius_ = max_radius(vertices_);
}

SymPolygon SymPolygon::from_vertices(std::vector<Vec2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 4 || n % 2 != 0) {
    throw Error(ErrorKind::degenerate_body,
                "symmetric polygon needs an even vertex count >= 4, got " +
                    std::to_string(n));
  }
  for (const Vec2& v : vertices) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      throw Error(ErrorKind::invalid_input, "non-finite polygon vertex");
    }
  }
  const std::size_t k = n / 2;
  const double r = max_radius(vertices);
  for (std::size_t i = 0; i < k; ++i) {
    if (norm(vertices[i] + vertices[i + k]) > 1e-12 * (1.0 + r)) {
      throw Error(ErrorKind::invalid_input,
                  "vertex list is not centrally symmetric at index " + std::to_string(i));
    }
    vertices[i + k] = -vertices[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vertices[i], b = vertices[(i + 1) % n], c = vertices[(i + 2) % n];
    if (cross(b - a, c - b) <= 0.0) {
      throw Error(ErrorKind::invalid_input,
                  "vertex list is not strictly convex counterclockwise at index " +
                      std::to_string((i + 1) % n));
    }
  }
  SymPolygon p(std::move(vertices));
  for (const HalfplanePair& h : p.constraints_) {
    if (!(h.offset > kMinThickness * r)) {
      throw Error(ErrorKind::degenerate_body, "origin is not strictly inside the polygon");
    }
  }
  return p;
}

SymPolygon SymPolygon::square(double half_width) {
  const double h = half_width;
  return SymPolygon({{h, -h}, {h, h}, {-h, h}, {-h, -h}});
}

SymPolygon SymPolygon::diamond(double radius) {
  const double r = radius;
  return SymPolygon({{r, 0.0}, {0.0, r}, {-r, 0.0}, {0.0, -r}});
}

SymPolygon SymPolygon::regular(std::size_t vertex_count, double radius, double phase) {
  if (vertex_count < 4 || vertex_count % 2 != 0) {
    throw Error(ErrorKind::invalid_input, "regular polygon needs an even count >= 4");
  }
  const std::size_t k = vertex_count / 2;
  std::vector<Vec2> half;
  half.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double t = phase + 2.0 * std::numbers::pi * static_cast<double>(i) /
                                 static_cast<double>(vertex_count);
    half.push_back({radius * std::cos(t), radius * std::sin(t)});
  }
  return SymPolygon(mirror(half));
}

double SymPolygon::gauge(Vec2 x) const noexcept {
  double g = 0.0;
  const std::size_t k = dual_.size() / 2;
  if (k <= 16) {
    for (std::size_t i = 0; i < k; ++i) g = std::max(g, std::fabs(dot(dual_[i], x)));
    return g;
  }
  // Locate the edge hit by the ray through x, then take the max over a few
  // neighbouring edges so a misplaced cone cannot change the result.
  const Vec2 v0 = vertices_[0];
  const double c0 = cross(v0, x);
  if (c0 < 0.0 || (c0 == 0.0 && dot(v0, x) < 0.0)) x = -x;
  std::size_t lo = 0, hi = k;  // cross(v_lo, x) >= 0 holds, fails at hi
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (cross(vertices_[mid], x) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  for (std::size_t d = 0; d < 5; ++d) {
    const std::size_t i = (lo + k + d - 2) % k;
    g = std::max(g, std::fabs(dot(dual_[i], x)));
  }
  return g;
}

SymPolygon SymPolygon::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw Error(ErrorKind::invalid_input, "polygon scale factor must be positive and finite");
  }
  std::vector<Vec2> v;
  std::vector<Vec2> d;
  v.reserve(vertices_.size());
  d.reserve(dual_.size());
  for (const Vec2& p : vertices_) v.push_back(factor * p);
  for (const Vec2& w : dual_) d.push_back((1.0 / factor) * w);
  return SymPolygon(std::move(v), std::move(d));
}

namespace {

bool lex_less(Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

// Monotone chain on a lexicographically sorted, exactly symmetric cloud.
SymPolygon hull_of_sorted(std::vector<Vec2>& pts) {
  const double r = max_radius(pts);
  if (pts.empty() || r == 0.0) {
    throw Error(ErrorKind::degenerate_body, "absolutely convex hull of zero points");
  }
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // Lower chain from the lexicographically smallest point p0 to the largest,
  // which is -p0 because the cloud is exactly symmetric. The upper chain is
  // then the negated lower chain.
  std::vector<Vec2> lower;
  for (const Vec2& p : pts) {
    while (lower.size() >= 2 &&
           cross(lower.back() - lower[lower.size() - 2], p - lower[lower.size() - 2]) <= 0.0) {
      lower.pop_back();
    }
    lower.push_back(p);
  }
  lower.pop_back();
  tidy_half(lower, r);
  if (lower.size() < 2) {
    throw Error(ErrorKind::degenerate_body,
                "points lie on a single line through the origin");
  }
  return SymPolygon::from_vertices(mirror(lower));
}

void require_finite(Vec2 p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw Error(ErrorKind::invalid_input, "non-finite point passed to absco_hull");
  }
}

// Splits a convex cycle at its lexicographic extremes and merges the two
// chains. Rounding can leave the output slightly out of order.
std::vector<Vec2> lex_order_of_cycle(std::span<const Vec2> cyc) {
  const std::size_t n = cyc.size();
  std::vector<Vec2> out;
  if (n == 0) return out;
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (lex_less(cyc[i], cyc[lo])) lo = i;
    if (lex_less(cyc[hi], cyc[i])) hi = i;
  }
  std::vector<Vec2> fwd, bwd;
  fwd.reserve(n);
  bwd.reserve(n);
  for (std::size_t i = lo;; i = (i + 1) % n) {
    fwd.push_back(cyc[i]);
    if (i == hi) break;
  }
  for (std::size_t i = (lo + n - 1) % n; i != hi; i = (i + n - 1) % n) bwd.push_back(cyc[i]);
  out.resize(fwd.size() + bwd.size());
  std::merge(fwd.begin(), fwd.end(), bwd.begin(), bwd.end(), out.begin(), lex_less);
  return out;
}

// Insertion sort that gives up after a linear amount of work.
bool finish_sort(std::vector<Vec2>& v) {
  std::size_t budget = 8 * v.size() + 64;
  for (std::size_t i = 1; i < v.size(); ++i) {
    for (std::size_t j = i; j > 0 && lex_less(v[j], v[j - 1]); --j) {
      std::swap(v[j], v[j - 1]);
      if (--budget == 0) return false;
    }
  }
  return true;
}

}  // namespace

SymPolygon absco_hull(std::span<const Vec2> points) {
  std::vector<Vec2> pts;
  pts.reserve(2 * points.size());
  for (const Vec2& p : points) {
    require_finite(p);
    if (p.x == 0.0 && p.y == 0.0) continue;
    pts.push_back(p);
    pts.push_back(-p);
  }
  std::sort(pts.begin(), pts.end(), lex_less);
  return hull_of_sorted(pts);
}

SymPolygon absco_hull_of_polygons(std::span<const std::vector<Vec2>> cycles) {
  std::size_t total = 0;
  for (const auto& cyc : cycles) total += 2 * cyc.size();
  std::vector<Vec2> pts;
  pts.reserve(total);
  std::vector<Vec2> run;
  for (const auto& cyc : cycles) {
    const std::size_t n = cyc.size();
    bool symmetric = n % 2 == 0;
    for (std::size_t i = 0; symmetric && i < n / 2; ++i) symmetric = cyc[i + n / 2] == -cyc[i];
    run.clear();
    for (const Vec2& p : lex_order_of_cycle(cyc)) {
      require_finite(p);
      if (p.x != 0.0 || p.y != 0.0) run.push_back(p);
    }
    if (!symmetric) {
      // The negated run, read backwards, is ordered as well.
      const std::size_t half = run.size();
      for (std::size_t i = half; i-- > 0;) run.push_back(-run[i]);
      std::inplace_merge(run.begin(), run.begin() + static_cast<std::ptrdiff_t>(half), run.end(),
                         lex_less);
    }
    const std::size_t mid = pts.size();
    pts.insert(pts.end(), run.begin(), run.end());
    std::inplace_merge(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(mid), pts.end(),
                       lex_less);
  }
  if (!finish_sort(pts)) std::sort(pts.begin(), pts.end(), lex_less);
  return hull_of_sorted(pts);
}

double minkowski_norm(const SymPolygon& p, Vec2 x) { return p.gauge(x); }

SymPolygon polar(const SymPolygon& p) {
  // Vertex i of the polar is the normal of edge (v_i, v_{i+1}); edge i of the
  // polar has v_{i+1} as its normal. Both lists are carried over unchanged.
  const auto& v = p.vertices();
  const auto dual = p.dual_vertices();
  std::vector<Vec2> normals(v.begin() + 1, v.end());
  normals.push_back(v.front());
  return SymPolygon::from_parts(std::vector<Vec2>(dual.begin(), dual.end()), std::move(normals));
}

SymPolygon clip(const SymPolygon& p, std::span<const HalfplanePair> slabs) {
  // The polar of an intersection of slabs is the absolutely convex hull of the
  // polar body together with the scaled slab normals.
  const auto dual = p.dual_vertices();
  std::vector<Vec2> pts(dual.begin(), dual.begin() + static_cast<std::ptrdiff_t>(dual.size() / 2));
  pts.reserve(pts.size() + slabs.size());
  for (const HalfplanePair& h : slabs) {
    if (!(h.offset > 0.0) || (h.normal.x == 0.0 && h.normal.y == 0.0)) {
      throw Error(ErrorKind::invalid_input, "clip slab needs a nonzero normal and positive offset");
    }
    pts.push_back((1.0 / h.offset) * h.normal);
  }
  try {
    return polar(absco_hull(pts));
  } catch (const Error& e) {
    throw Error(ErrorKind::internal_consistency, std::string("clip failed: ") + e.what());
  }
}

std::vector<Vec2> mapped_vertices(const SymPolygon& p, const Mat2& a) {
  std::vector<Vec2> out;
  out.reserve(p.size());
  for (const Vec2& v : p.vertices()) out.push_back(a * v);
  return out;
}

LinearImage linear_image(const SymPolygon& p, const Mat2& a) {
  std::vector<Vec2> pts = mapped_vertices(p, a);
  const double scale = a.max_abs();
  if (scale == 0.0 || std::fabs(a.det()) <= 1e-14 * scale * scale) {
    return DegenerateImage{std::move(pts)};
  }
  try {
    return absco_hull(pts);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degenerate_body) throw;
    return DegenerateImage{std::move(pts)};
  }
}

double outer_ratio(std::span<const Vec2> points, const SymPolygon& p) {
  double r = 0.0;
  for (const Vec2& v : points) r = std::max(r, p.gauge(v));
  return r;
}

double outer_ratio(const SymPolygon& q, const SymPolygon& p) {
  const auto& v = q.vertices();
  return outer_ratio(std::span<const Vec2>(v.data(), v.size() / 2), p);
}

SymPolygon calibrate_to_boundary(const SymPolygon& p, Vec2 e) {
  if (!std::isfinite(e.x) || !std::isfinite(e.y) || (e.x == 0.0 && e.y == 0.0)) {
    throw Error(ErrorKind::invalid_input, "calibration vector must be finite and nonzero");
  }
  return p.scaled(p.gauge(e));
}

double distance_to(const SymPolygon& p, Vec2 x) {
  if (p.gauge(x) <= 1.0) return 0.0;
  const auto& v = p.vertices();
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    d = std::min(d, point_segment_distance(x, v[i], v[(i + 1) % v.size()]));
  }
  return d;
}

double hausdorff(const SymPolygon& p, const SymPolygon& q) {
  // Distance to a convex set is convex, so the sup over each polygon is at a
  // vertex; symmetry halves the work.
  double h = 0.0;
  for (std::size_t i = 0; i < p.size() / 2; ++i) h = std::max(h, distance_to(q, p.vertices()[i]));
  for (std::size_t i = 0; i < q.size() / 2; ++i) h = std::max(h, distance_to(p, q.vertices()[i]));
  return h;
}

SymPolygon prune(const SymPolygon& p, double eps) {
  if (eps < 0.0 || !std::isfinite(eps)) {
    throw Error(ErrorKind::invalid_input, "prune tolerance must be nonnegative");
  }
  const auto& v = p.vertices();
  const std::size_t k = v.size() / 2;
  const double thr = eps * p.diameter();
  // Chain v[0..k]; v[k] == -v[0] and both ends stay.
  std::vector<std::size_t> kept_idx{0};
  std::size_t anchor = 0;
  std::size_t end = 2;
  while (end <= k) {
    bool ok = true;
    for (std::size_t i = anchor + 1; i < end; ++i) {
      if (point_segment_distance(v[i], v[anchor], v[end]) > thr) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      anchor = end - 1;
      kept_idx.push_back(anchor);
    }
    ++end;
  }
  if (kept_idx.size() < 2) {
    // Keep the polygon a body: retain the vertex farthest from the v0 chord.
    std::size_t best = 1;
    double dist = -1.0;
    for (std::size_t i = 1; i < k; ++i) {
      const double d = std::fabs(cross(v[k] - v[0], v[i] - v[0]));
      if (d > dist) {
        dist = d;
        best = i;
      }
    }
    kept_idx.push_back(best);
  }
  if (kept_idx.size() == k) return p;
  std::vector<Vec2> half;
  half.reserve(kept_idx.size());
  for (std::size_t i : kept_idx) half.push_back(v[i]);
  std::vector<Vec2> full = mirror(half);
  // Edges between originally adjacent vertices keep their normals.
  const std::size_t n = full.size(), h = kept_idx.size();
  const auto dual = p.dual_vertices();
  std::vector<Vec2> normals(n);
  for (std::size_t j = 0; j < h; ++j) {
    const std::size_t from = kept_idx[j];
    const std::size_t to = j + 1 < h ? kept_idx[j + 1] : k;
    normals[j] = to == from + 1 ? dual[from] : SymPolygon::edge_normal(full[j], full[(j + 1) % n]);
    normals[j + h] = -normals[j];
  }
  return SymPolygon::from_parts(std::move(full), std::move(normals));
}

std::string check_invariants(const SymPolygon& p) {
  std::ostringstream msg;
  const auto& v = p.vertices();
  const std::size_t n = v.size();
  if (n < 4 || n % 2 != 0) {
    msg << "vertex count " << n << " is not even and >= 4";
    return msg.str();
  }
  const std::size_t k = n / 2;
  for (std::size_t i = 0; i < k; ++i) {
    if (norm(v[i] + v[i + k]) > 1e-12) {
      msg << "asymmetric pair at " << i;
      return msg.str();
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = v[i], b = v[(i + 1) % n], c = v[(i + 2) % n];
    if (!(cross(b - a, c - b) > 0.0)) {
      msg << "non-convex turn at " << (i + 1) % n;
      return msg.str();
    }
  }
  for (const HalfplanePair& h : p.constraints()) {
    if (!(h.offset >= 1e-12 * norm(h.normal)) || !(h.offset > 0.0)) {
      msg << "origin not interior (offset " << h.offset << ")";
      return msg.str();
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double g = p.gauge(v[i]);
    if (std::fabs(g - 1.0) > 1e-10) {
      msg << "vertex " << i << " has gauge " << g;
      return msg.str();
    }
  }
  return {};
}

}  // namespace barnorm
