#include <doctest.h>

#include <cmath>
#include <random>

#include "barnorm/error.hpp"
#include "barnorm/relaxation.hpp"
#include "oracles.hpp"

using namespace barnorm;

namespace {

double h(const SymPolygon& p, const SymPolygon& q) {
  return oracle::hausdorff(p.vertices(), q.vertices());
}

double gauge(const SymPolygon& p, Vec2 x) { return oracle::ray_gauge(p.vertices(), x); }

double max_image_gauge(const SymPolygon& s, const std::vector<Mat2>& ms, Vec2 x) {
  double r = 0;
  for (const Mat2& a : ms) r = std::max(r, gauge(s, a * x));
  return r;
}

// |x|_n = max_k r_k(x) / kappa^k over k < n, with r_0 the base gauge
double lmain_gauge(const std::vector<Mat2>& ms, double kappa, int n, const SymPolygon& base,
                   Vec2 x) {
  double g = gauge(base, x);
  for (int k = 1; k < n; ++k) {
    for (const Mat2& p : oracle::products(ms, k)) {
      g = std::max(g, gauge(base, p * x) / std::pow(kappa, k));
    }
  }
  return g;
}

}  // namespace

TEST_CASE("averaging rules") {
  for (Averaging r : {Averaging::arithmetic, Averaging::geometric, Averaging::harmonic})
    CHECK(averaging(r, 3, 3) == doctest::Approx(3.0));
  CHECK(averaging(Averaging::arithmetic, 1, 3) == 2.0);
  CHECK(averaging(Averaging::geometric, 1, 4) == 2.0);
  CHECK(averaging(Averaging::harmonic, 1, 3) == 1.5);
  CHECK_THROWS_AS(averaging(Averaging::geometric, 0, 1), Error);
  CHECK_THROWS_AS(averaging(Averaging::arithmetic, 1, -2), Error);
}

TEST_CASE("config validation") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.tol = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.max_iter = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.e = {0, 0};
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("max-relaxation bounds") {
  const SymPolygon s = SymPolygon::regular(10, 1.3, 0.2);
  const MRBounds one = mr_bounds(s, MatrixSet({Mat2::identity()}));
  CHECK(one.rho_lo == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(one.rho_hi == doctest::Approx(1.0).epsilon(1e-14));
  const MRBounds two = mr_bounds(s, MatrixSet({2.0 * Mat2::identity()}));
  CHECK(two.rho_lo == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(two.rho_hi == doctest::Approx(2.0).epsilon(1e-14));

  const MRBounds ex1 = mr_bounds(SymPolygon::square(), MatrixSet(oracle::example1()));
  CHECK(ex1.rho_lo <= 1.098668);
  CHECK(1.098668 <= ex1.rho_hi);

  // against the ratio max_i |A_i x|_S / |x|_S, maximized at vertices and minimized along edges
  std::mt19937_64 rng(1);
  for (int t = 0; t < 30; ++t) {
    const SymPolygon p = oracle::random_polygon(rng);
    const std::vector<Mat2> ms{oracle::random_matrix(rng), oracle::random_matrix(rng)};
    const MRBounds b = mr_bounds(p, MatrixSet(ms));
    double hi = 0, lo = 1e300;
    for (Vec2 v : p.vertices()) hi = std::max(hi, max_image_gauge(p, ms, v));
    // on each edge of S the ratio is max_i |A_i x|_S, convex in the edge parameter
    const auto& v = p.vertices();
    for (std::size_t j = 0; j < v.size(); ++j) {
      const Vec2 a = v[j], e = v[(j + 1) % v.size()] - v[j];
      const auto f = [&](double t) { return max_image_gauge(p, ms, a + t * e); };
      double l = 0, r = 1;
      for (int it = 0; it < 200; ++it) {
        const double m1 = l + (r - l) / 3, m2 = r - (r - l) / 3;
        if (f(m1) <= f(m2)) {
          r = m2;
        } else {
          l = m1;
        }
      }
      lo = std::min({lo, f(0.5 * (l + r)), f(0), f(1)});
    }
    CHECK(b.rho_hi == doctest::Approx(hi).epsilon(1e-10));
    CHECK(b.rho_lo == doctest::Approx(lo).epsilon(1e-9));
  }

  // common kernel: Q is unbounded
  CHECK_THROWS_AS(mr_bounds(SymPolygon::square(), MatrixSet({Mat2{1, 0, 0, 0}, Mat2{0, 0, 2, 0}})),
                  ReducibleInput);
}

TEST_CASE("max-relaxation step matches its definition") {
  RunConfig cfg;
  cfg.prune_eps = 0.0;
  const auto [same, row] = mr_step(SymPolygon::square(), MatrixSet({2.0 * Mat2::identity()}), cfg);
  CHECK(h(same, SymPolygon::square()) <= 1e-15);
  CHECK(row.gamma == doctest::Approx(2.0));

  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  for (const Averaging rule : {Averaging::arithmetic, Averaging::geometric, Averaging::harmonic}) {
    cfg.rule = rule;
    const SymPolygon s = oracle::random_polygon(rng);
    const std::vector<Mat2> ms{oracle::random_matrix(rng), oracle::random_matrix(rng)};
    const MatrixSet set(ms);
    const MRBounds b = mr_bounds(s, set);
    const double gamma = averaging(rule, b.rho_lo, b.rho_hi);
    const auto [next, r] = mr_step(s, set, cfg);
    CHECK(r.gamma == doctest::Approx(gamma).epsilon(1e-14));
    CHECK(r.rho_lo == doctest::Approx(b.rho_lo));
    CHECK(r.rho_hi == doctest::Approx(b.rho_hi));
    // |x|_{S cap gamma Q} = max(|x|_S, max_i |A_i x|_S / gamma), rescaled so |e| = 1
    const auto raw = [&](Vec2 x) { return std::max(gauge(s, x), max_image_gauge(s, ms, x) / gamma); };
    const double c = raw(cfg.e);
    for (int i = 0; i < 100; ++i) {
      const Vec2 x{g(rng), g(rng)};
      CHECK(gauge(next, x) == doctest::Approx(raw(x) / c).epsilon(1e-9));
    }
    CHECK(gauge(next, cfg.e) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("one step narrows the Example 1 bracket") {
  const MatrixSet set(oracle::example1());
  const MRBounds b0 = mr_bounds(SymPolygon::square(), set);
  const auto [s1, row] = mr_step(SymPolygon::square(), set, RunConfig{});
  const MRBounds b1 = mr_bounds(s1, set);
  CHECK((b1.rho_hi < b0.rho_hi || b1.rho_lo > b0.rho_lo));
  CHECK(b1.rho_hi <= b0.rho_hi + 1e-12);
  CHECK(b1.rho_lo >= b0.rho_lo - 1e-12);
}

TEST_CASE("max-relaxation on Example 1 and Example 2") {
  const RunResult r1 = run_max_relaxation(MatrixSet(oracle::example1()));
  CHECK(r1.termination == Termination::converged);
  CHECK(r1.width() <= 1e-4);
  CHECK(r1.rho_lo - 5e-7 <= 1.098668);
  CHECK(1.098668 <= r1.rho_hi + 5e-7);
  CHECK(trace_is_monotone(r1.trace));
  CHECK(barabanov_residual(r1.body, MatrixSet(oracle::example1()), r1.estimate()) <= 1e-8);
  CHECK(gauge(r1.body, {1, 0}) == doctest::Approx(1.0).epsilon(1e-12));

  const RunResult r2 = run_max_relaxation(MatrixSet(oracle::example2()));
  CHECK(r2.termination == Termination::converged);
  CHECK(r2.rho_lo <= 1.2 + 1e-12);
  CHECK(1.2 <= r2.rho_hi + 1e-12);
  CHECK(r2.width() <= 1e-4);
  CHECK(trace_is_monotone(r2.trace));
}

TEST_CASE("max-relaxation on a scaled rotation") {
  // No polygon is invariant under an irrational rotation, so the upper bound
  // stays strictly above c and the bracket shrinks only as vertices accumulate.
  const double c = 0.9;
  const MatrixSet set({c * Mat2::rotation(0.7)});
  RunConfig cfg;
  cfg.max_iter = 5;
  const RunResult r = run_max_relaxation(set, cfg);
  CHECK(r.termination == Termination::max_iter);
  CHECK(r.rho_lo <= c);
  CHECK(c < r.rho_hi);
  CHECK(trace_is_monotone(r.trace));
  CHECK(r.trace.back().rho_hi - r.trace.back().rho_lo < r.trace.front().rho_hi - r.trace.front().rho_lo);

  cfg.max_iter = 60;
  const RunResult longer = run_max_relaxation(set, cfg);
  CHECK(longer.width() < 2e-3);
  CHECK(longer.rho_lo <= c);
  CHECK(c <= longer.rho_hi);
}

TEST_CASE("reducible input is refused") {
  CHECK_THROWS_AS(run_max_relaxation(MatrixSet({Mat2::diag(2, 1), Mat2::diag(3, 5)})),
                  ReducibleInput);
}

TEST_CASE("scale equivariance") {
  const MatrixSet set(oracle::example1());
  const RunResult a = run_max_relaxation(set);
  const RunResult b = run_max_relaxation(set.scaled(3.0));
  CHECK(b.rho_lo == doctest::Approx(3.0 * a.rho_lo).epsilon(1e-9));
  CHECK(b.rho_hi == doctest::Approx(3.0 * a.rho_hi).epsilon(1e-9));
}

TEST_CASE("one-step extremal operator") {
  const SymPolygon sq = SymPolygon::square();
  CHECK(h(ext_one_step(sq, MatrixSet({2.0 * Mat2::identity()}), 2.0), sq) <= 1e-15);

  const MatrixSet ex2(oracle::example2());
  const SymPolygon circle = SymPolygon::regular(64);
  const SymPolygon grown = ext_one_step(circle, ex2, 1.2);
  CHECK(outer_ratio(circle, grown) <= 1 + 1e-9);
  CHECK(h(ext_one_step(circle, ex2, 2.4), grown.scaled(2.0)) <= 1e-12);

  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  for (int i = 0; i < 100; ++i) {
    const Vec2 x{g(rng), g(rng)};
    CHECK(gauge(grown, x) ==
          doctest::Approx(max_image_gauge(circle, oracle::example2(), x) / 1.2).epsilon(1e-10));
  }
}

TEST_CASE("seeded Barabanov iteration") {
  const SymPolygon sq = SymPolygon::square();
  const RunResult fixed = seeded_bar_iteration(sq, MatrixSet({2.0 * Mat2::identity()}), 2.0);
  CHECK(fixed.termination == Termination::converged);
  CHECK(fixed.trace.size() <= 2);
  CHECK(h(fixed.body, sq) <= 1e-12);

  const MatrixSet ex2(oracle::example2());
  RunConfig cfg;
  cfg.max_iter = 500;
  const RunResult r = seeded_bar_iteration(SymPolygon::regular(64), ex2, 1.2, cfg);
  CHECK(r.termination == Termination::converged);
  CHECK(barabanov_residual(r.body, ex2, 1.2) <= 1e-6);
  for (double q : r.inclusion_ratios) CHECK(q <= 1 + 1e-9);

  cfg.max_iter = 200;
  const RunResult up = seeded_bar_iteration(SymPolygon::regular(64), ex2, 1.3, cfg);
  CHECK(up.termination == Termination::max_iter);
  CHECK(up.body.diameter() > 1e3);

  try {
    seeded_bar_iteration(SymPolygon::regular(64), ex2, 1.0, cfg);
    FAIL("expected not_extremal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_extremal);
  }
}

TEST_CASE("extremal norm from a brute-force bound") {
  const SymPolygon sq = SymPolygon::square();
  const MatrixSet ex1(oracle::example1());
  const LmainResult one = build_lmain_norm(ex1, 1.5, 1, sq);
  CHECK(h(one.ball, sq) <= 1e-15);

  const LmainResult flat = build_lmain_norm(MatrixSet({2.0 * Mat2::identity()}), 2.0, 3, sq);
  CHECK(flat.holds);
  CHECK(h(flat.ball, sq) <= 1e-12);

  const double kappa = bounds_rho_n(ex1, 6, MaxAbsNorm{}).upper;
  const LmainResult l = build_lmain_norm(ex1, kappa, 6, sq);
  CHECK(l.holds);
  CHECK(l.violating_vertices.empty());
  for (Vec2 v : l.ball.vertices()) {
    const double nv = lmain_gauge(oracle::example1(), kappa, 6, sq, v);
    CHECK(nv == doctest::Approx(1.0).epsilon(1e-10));
    double worst = 0;
    for (const Mat2& a : oracle::example1())
      worst = std::max(worst, lmain_gauge(oracle::example1(), kappa, 6, sq, a * v));
    CHECK(worst <= kappa * nv * (1 + 1e-9));
  }

  // a kappa below the joint spectral radius cannot hold
  const LmainResult bad = build_lmain_norm(ex1, 1.0, 3, sq);
  CHECK_FALSE(bad.holds);
  CHECK_FALSE(bad.violating_vertices.empty());
}

TEST_CASE("trace monotonicity helper") {
  BoundTrace t{{0, 1.0, 2.0, 1.5, 4}, {1, 1.1, 1.9, 1.5, 8}};
  CHECK(trace_is_monotone(t));
  t.push_back({2, 1.05, 1.8, 1.4, 8});
  CHECK_FALSE(trace_is_monotone(t));
}
