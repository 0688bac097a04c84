#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "barnorm/error.hpp"
#include "barnorm/polygon.hpp"
#include "oracles.hpp"

using namespace barnorm;

namespace {

Mat2 inverse(const Mat2& a) {
  const double d = a.det();
  return {a.a22 / d, -a.a12 / d, -a.a21 / d, a.a11 / d};
}

double h(const SymPolygon& p, const SymPolygon& q) { return oracle::hausdorff(p.vertices(), q.vertices()); }

bool has_vertex(const SymPolygon& p, Vec2 v, double tol = 1e-12) {
  for (const Vec2& w : p.vertices())
    if (norm(w - v) <= tol) return true;
  return false;
}

}  // namespace

TEST_CASE("construction validates its input") {
  CHECK(check_invariants(SymPolygon::square()).empty());
  CHECK(check_invariants(SymPolygon::regular(64)).empty());
  CHECK(SymPolygon::square().size() == 4);
  // clockwise
  CHECK_THROWS_AS(SymPolygon::from_vertices({{1, 1}, {1, -1}, {-1, -1}, {-1, 1}}), Error);
  // not symmetric
  CHECK_THROWS_AS(SymPolygon::from_vertices({{1, 0}, {0, 1}, {-1, 0}, {0, -2}}), Error);
  CHECK_THROWS_AS(SymPolygon::regular(5), Error);
}

TEST_CASE("absolutely convex hull") {
  const std::vector<Vec2> two{{1, 0}, {0, 1}};
  const SymPolygon d = absco_hull(two);
  CHECK(d.size() == 4);
  for (Vec2 v : {Vec2{1, 0}, Vec2{0, 1}, Vec2{-1, 0}, Vec2{0, -1}}) CHECK(has_vertex(d, v));

  const std::vector<Vec2> inner{{1, 0}, {0, 1}, {0.5, 0.5}};
  CHECK(absco_hull(inner).size() == 4);

  const std::vector<Vec2> seg{{1, 1}};
  try {
    absco_hull(seg);
    FAIL("expected degenerate body");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_body);
  }

  // every input point lies inside and every vertex is an input point up to sign
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int t = 0; t < 100; ++t) {
    std::vector<Vec2> pts;
    for (int i = 0; i < 40; ++i) pts.push_back({g(rng), g(rng)});
    const SymPolygon p = absco_hull(pts);
    CHECK(check_invariants(p).empty());
    for (Vec2 q : pts) CHECK(oracle::ray_gauge(p.vertices(), q) <= 1 + 1e-12);
    for (Vec2 v : p.vertices()) {
      bool found = false;
      for (Vec2 q : pts) found = found || v == q || v == -q;
      CHECK(found);
    }
  }
}

TEST_CASE("hull of polygon cycles equals the plain hull") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::vector<Vec2>> cycles;
    std::vector<Vec2> all;
    const int count = 1 + static_cast<int>(rng() % 4);
    for (int c = 0; c < count; ++c) {
      const SymPolygon p = oracle::random_polygon(rng);
      const Mat2 a = oracle::random_matrix(rng, -2, 2);
      std::vector<Vec2> cyc = mapped_vertices(p, a);
      cycles.push_back(cyc);
      all.insert(all.end(), cyc.begin(), cyc.end());
    }
    const SymPolygon fast = absco_hull_of_polygons(cycles), ref = absco_hull(all);
    REQUIRE(fast.size() == ref.size());
    CHECK(h(fast, ref) <= 1e-12 * ref.radius());
  }
}

TEST_CASE("gauge") {
  const SymPolygon sq = SymPolygon::square();
  CHECK(minkowski_norm(sq, {2, 0}) == doctest::Approx(2.0));
  CHECK(minkowski_norm(sq, {1, 1}) == doctest::Approx(1.0));
  CHECK(minkowski_norm(SymPolygon::regular(10), {0, 0}) == 0.0);

  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (int t = 0; t < 200; ++t) {
    const SymPolygon p = oracle::random_polygon(rng);
    for (int i = 0; i < 20; ++i) {
      const Vec2 x{g(rng), g(rng)}, y{g(rng), g(rng)};
      const double gx = minkowski_norm(p, x);
      CHECK(gx == doctest::Approx(oracle::ray_gauge(p.vertices(), x)).epsilon(1e-10));
      CHECK(minkowski_norm(p, -3.0 * x) == doctest::Approx(3.0 * gx).epsilon(1e-13));
      CHECK(minkowski_norm(p, x + y) <= gx + minkowski_norm(p, y) + 1e-12);
    }
    for (Vec2 v : p.vertices()) CHECK(minkowski_norm(p, v) == doctest::Approx(1.0).epsilon(1e-12));
  }

  // many vertices exercise the binary-search path
  const SymPolygon big = SymPolygon::regular(500, 2.0, 0.1);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 x{g(rng), g(rng)};
    CHECK(minkowski_norm(big, x) ==
          doctest::Approx(oracle::ray_gauge(big.vertices(), x)).epsilon(1e-10));
  }
}

TEST_CASE("clip") {
  const SymPolygon sq = SymPolygon::square();
  const std::vector<HalfplanePair> half{{{1, 0}, 0.5}};
  const SymPolygon r = clip(sq, half);
  CHECK(r.size() == 4);
  for (Vec2 v : {Vec2{0.5, 1}, Vec2{-0.5, 1}, Vec2{0.5, -1}, Vec2{-0.5, -1}}) CHECK(has_vertex(r, v));

  const SymPolygon hex = SymPolygon::regular(12, 1.0, 0.3);
  const std::vector<HalfplanePair> own(hex.constraints().begin(), hex.constraints().end());
  CHECK(h(clip(hex, own), hex) <= 1e-12);

  const SymPolygon d = SymPolygon::diamond();
  const std::vector<HalfplanePair> inactive{{{1, 1}, 1.0}};
  CHECK(h(clip(d, inactive), d) <= 1e-12);

  // clipped gauge is the max of the old gauge and the slab gauges
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int t = 0; t < 100; ++t) {
    const SymPolygon p = oracle::random_polygon(rng);
    std::vector<HalfplanePair> slabs;
    for (int i = 0; i < 3; ++i) slabs.push_back({{g(rng), g(rng)}, 0.5 + std::fabs(g(rng))});
    const SymPolygon c = clip(p, slabs);
    for (int i = 0; i < 20; ++i) {
      const Vec2 x{g(rng), g(rng)};
      double want = oracle::ray_gauge(p.vertices(), x);
      for (const auto& s : slabs) want = std::max(want, std::fabs(dot(s.normal, x)) / s.offset);
      CHECK(minkowski_norm(c, x) == doctest::Approx(want).epsilon(1e-10));
    }
  }
}

TEST_CASE("linear image") {
  const SymPolygon sq = SymPolygon::square();
  const LinearImage id = linear_image(sq, Mat2::identity());
  REQUIRE(std::holds_alternative<SymPolygon>(id));
  CHECK(h(std::get<SymPolygon>(id), sq) <= 1e-15);

  const LinearImage two = linear_image(sq, 2.0 * Mat2::identity());
  REQUIRE(std::holds_alternative<SymPolygon>(two));
  CHECK(h(std::get<SymPolygon>(two), sq.scaled(2)) <= 1e-15);

  const LinearImage flat = linear_image(sq, Mat2{1, 0, 0, 0});
  REQUIRE(std::holds_alternative<DegenerateImage>(flat));
  double xmax = 0;
  for (Vec2 v : std::get<DegenerateImage>(flat).points) {
    CHECK(v.y == 0.0);
    xmax = std::max(xmax, std::fabs(v.x));
  }
  CHECK(xmax == 1.0);
}

TEST_CASE("polar") {
  const SymPolygon sq = SymPolygon::square(), d = SymPolygon::diamond();
  CHECK(h(polar(sq), d) <= 1e-15);
  CHECK(h(polar(sq.scaled(2)), d.scaled(0.5)) <= 1e-15);
  CHECK(h(polar(d), sq) <= 1e-15);

  // support function of P is the gauge of its polar
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (int t = 0; t < 100; ++t) {
    const SymPolygon p = oracle::random_polygon(rng);
    const SymPolygon q = polar(p);
    CHECK(check_invariants(q).empty());
    for (int i = 0; i < 10; ++i) {
      const Vec2 u{g(rng), g(rng)};
      CHECK(oracle::support(p.vertices(), u) ==
            doctest::Approx(oracle::ray_gauge(q.vertices(), u)).epsilon(1e-10));
    }
  }
}

TEST_CASE("outer ratio") {
  const SymPolygon sq = SymPolygon::square(), p = SymPolygon::regular(14, 1.7, 0.4);
  CHECK(outer_ratio(p, p) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(outer_ratio(sq.scaled(2), sq) == doctest::Approx(2.0));
  CHECK(outer_ratio(SymPolygon::diamond(), sq) == doctest::Approx(1.0));
  double want = 0;
  for (Vec2 v : p.vertices()) want = std::max(want, oracle::ray_gauge(sq.vertices(), v));
  CHECK(outer_ratio(p, sq) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("calibration") {
  const SymPolygon sq = SymPolygon::square();
  CHECK(h(calibrate_to_boundary(sq, {1, 0}), sq) <= 1e-15);
  CHECK(h(calibrate_to_boundary(sq, {2, 0}), sq.scaled(2)) <= 1e-15);
  CHECK(h(calibrate_to_boundary(sq.scaled(3), {1, 0}), sq) <= 1e-15);
  CHECK_THROWS_AS(calibrate_to_boundary(sq, {0, 0}), Error);

  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    const SymPolygon p = oracle::random_polygon(rng);
    const Vec2 e{0.3, -1.2};
    CHECK(minkowski_norm(calibrate_to_boundary(p, e), e) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("hausdorff") {
  const SymPolygon sq = SymPolygon::square(), d = SymPolygon::diamond();
  CHECK(hausdorff(sq, sq) == 0.0);
  CHECK(hausdorff(sq, sq.scaled(2)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(hausdorff(sq, d) == doctest::Approx(std::sqrt(2.0) - 1 / std::sqrt(2.0)).epsilon(1e-14));

  std::mt19937_64 rng(41);
  for (int t = 0; t < 100; ++t) {
    const SymPolygon p = oracle::random_polygon(rng), q = oracle::random_polygon(rng);
    CHECK(hausdorff(p, q) == doctest::Approx(h(p, q)).epsilon(1e-10));
    CHECK(hausdorff(p, q) == hausdorff(q, p));
    CHECK(hausdorff(p, p.scaled(1.5)) == doctest::Approx(0.5 * p.radius()).epsilon(1e-12));
  }
}

TEST_CASE("prune") {
  // edge midpoints pushed out by 1e-12 so they survive as vertices
  const double b = 1 + 1e-12;
  const SymPolygon with_mid = SymPolygon::from_vertices(
      {{1, -1}, {b, 0}, {1, 1}, {0, b}, {-1, 1}, {-b, 0}, {-1, -1}, {0, -b}});
  REQUIRE(with_mid.size() == 8);
  const SymPolygon sq = SymPolygon::square();
  const SymPolygon pruned_sq = prune(with_mid, 1e-9);
  CHECK(pruned_sq.size() == 4);
  CHECK(h(pruned_sq, sq) <= 1e-15);

  const SymPolygon r = SymPolygon::regular(64);
  CHECK(prune(r, 0.0).size() == 64);
  const SymPolygon coarse = prune(r, 0.1);
  CHECK(coarse.size() < 64);
  CHECK(check_invariants(coarse).empty());
  CHECK(h(coarse, r) <= 0.1 * r.diameter());
}

TEST_CASE("geometry property suite on random polygons") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  for (int t = 0; t < 200; ++t) {
    const SymPolygon p = oracle::random_polygon(rng);
    const double tol = 1e-9 * std::max(1.0, p.radius());
    CHECK(h(polar(polar(p)), p) <= tol);
    const double lam = 0.25 + 3.0 * std::fabs(g(rng));
    CHECK(h(polar(p.scaled(lam)), polar(p).scaled(1 / lam)) <= 1e-9 * polar(p).radius() / lam);
    Mat2 a = oracle::random_matrix(rng, -2, 2);
    if (std::fabs(a.det()) < 0.1) a = {a.a11 + 1, a.a12, a.a21, a.a22 + 1};
    if (std::fabs(a.det()) < 0.1) continue;
    const LinearImage ap = linear_image(p, a);
    REQUIRE(std::holds_alternative<SymPolygon>(ap));
    const SymPolygon lhs = polar(std::get<SymPolygon>(ap));
    const LinearImage rhs = linear_image(polar(p), inverse(a).transposed());
    REQUIRE(std::holds_alternative<SymPolygon>(rhs));
    CHECK(h(lhs, std::get<SymPolygon>(rhs)) <= 1e-9 * std::max(1.0, lhs.radius()));
  }
}
