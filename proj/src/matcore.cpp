#include "barnorm/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "barnorm/error.hpp"

namespace barnorm {
namespace {

void require_finite(const Mat2& a, const char* where) {
  if (!a.is_finite()) {
    throw Error(ErrorKind::invalid_input, std::string(where) + ": non-finite matrix entry");
  }
}

// Real eigenvalues when the discriminant is nonnegative.
struct Eigen2 {
  bool real = true;
  double l1 = 0.0, l2 = 0.0;  // l1 has the larger modulus when real
  double modulus = 0.0;
};

Eigen2 eigen(const Mat2& a) {
  Eigen2 e;
  if (a.a12 == 0.0 || a.a21 == 0.0) {
    e.l1 = a.a11;
    e.l2 = a.a22;
    if (std::fabs(e.l2) > std::fabs(e.l1)) std::swap(e.l1, e.l2);
    e.modulus = std::fabs(e.l1);
    return e;
  }
  const double mid = 0.5 * (a.a11 + a.a22);
  const double half_gap = 0.5 * (a.a11 - a.a22);
  const double disc = half_gap * half_gap + a.a12 * a.a21;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    // Avoid cancellation: compute the large root directly, the other from det.
    e.l1 = mid >= 0.0 ? mid + root : mid - root;
    e.l2 = e.l1 != 0.0 ? a.det() / e.l1 : 0.0;
    e.modulus = std::fabs(e.l1);
  } else {
    e.real = false;
    e.modulus = std::sqrt(std::max(a.det(), 0.0));
  }
  return e;
}

double power_root(double v, int n) {
  if (n == 1) return v;
  return std::pow(v, 1.0 / static_cast<double>(n));
}

// Unit direction of the eigenline of `a` for eigenvalue `lambda`.
Vec2 eigenline(const Mat2& a, double lambda) {
  const Vec2 r1{a.a11 - lambda, a.a12};
  const Vec2 r2{a.a21, a.a22 - lambda};
  const Vec2 r = norm(r1) >= norm(r2) ? r1 : r2;
  Vec2 v{-r.y, r.x};
  const double len = norm(v);
  if (len == 0.0) return {1.0, 0.0};
  return (1.0 / len) * v;
}

}  // namespace

double spectral_radius(const Mat2& a) {
  require_finite(a, "spectral_radius");
  return eigen(a).modulus;
}

double operator_norm_2(const Mat2& a) {
  require_finite(a, "operator_norm_2");
  return std::sqrt(spectral_radius(a.transposed() * a));
}

MatrixSet::MatrixSet(std::vector<Mat2> members, std::optional<double> scale_hint)
    : members_(std::move(members)), scale_hint_(scale_hint) {
  if (members_.empty()) throw Error(ErrorKind::invalid_input, "matrix set is empty");
  for (const Mat2& a : members_) require_finite(a, "MatrixSet");
  if (scale_hint_ && !(*scale_hint_ > 0.0)) {
    throw Error(ErrorKind::invalid_input, "scale hint must be positive");
  }
  transposes_.reserve(members_.size());
  for (const Mat2& a : members_) transposes_.push_back(a.transposed());
}

MatrixSet MatrixSet::transposed() const { return MatrixSet(transposes_, scale_hint_); }

MatrixSet MatrixSet::scaled(double c) const {
  std::vector<Mat2> m;
  m.reserve(members_.size());
  for (const Mat2& a : members_) m.push_back(c * a);
  return MatrixSet(std::move(m));
}

bool MatrixSet::all_nonsingular() const {
  return std::all_of(members_.begin(), members_.end(), [](const Mat2& a) {
    const double s = a.max_abs();
    return s > 0.0 && std::fabs(a.det()) > 1e-14 * s * s;
  });
}

std::uint64_t word_count(std::size_t m, int n, std::uint64_t budget) {
  if (n < 1) throw Error(ErrorKind::invalid_input, "product length must be >= 1");
  std::uint64_t count = 1;
  for (int i = 0; i < n; ++i) {
    if (count > budget / m) {
      throw Error(ErrorKind::resource_limit,
                  "product enumeration m^n = " + std::to_string(m) + "^" + std::to_string(n) +
                      " exceeds the budget of " + std::to_string(budget));
    }
    count *= m;
  }
  if (count > budget) {
    throw Error(ErrorKind::resource_limit,
                "product enumeration m^n = " + std::to_string(count) +
                    " exceeds the budget of " + std::to_string(budget));
  }
  return count;
}

void enumerate_products(const MatrixSet& set, int n,
                        const std::function<void(const ProductWord&)>& visit,
                        std::uint64_t budget) {
  word_count(set.size(), n, budget);
  const std::size_t m = set.size();
  ProductWord word;
  word.indices.assign(static_cast<std::size_t>(n), 0);
  std::vector<Mat2> prefix(static_cast<std::size_t>(n));
  // Odometer over (s_1, ..., s_n) with prefix products prefix[j] = A_{s_j}...A_{s_1}.
  std::size_t depth = 0;
  while (true) {
    for (; depth < static_cast<std::size_t>(n); ++depth) {
      const Mat2& a = set[word.indices[depth]];
      prefix[depth] = depth == 0 ? a : a * prefix[depth - 1];
    }
    word.product = prefix.back();
    visit(word);
    std::size_t j = static_cast<std::size_t>(n);
    while (j > 0 && word.indices[j - 1] + 1 == m) {
      word.indices[j - 1] = 0;
      --j;
    }
    if (j == 0) return;
    ++word.indices[j - 1];
    depth = j - 1;
  }
}

std::string norm_name(const NormTag& tag) {
  struct {
    std::string operator()(const EuclideanNorm&) const { return "euclidean"; }
    std::string operator()(const MaxAbsNorm&) const { return "max-abs"; }
    std::string operator()(const PolygonalNorm& p) const {
      return "polygonal(" + std::to_string(p.ball.size()) + ")";
    }
  } visitor;
  return std::visit(visitor, tag);
}

double induced_norm(const Mat2& a, const NormTag& tag) {
  struct {
    const Mat2& a;
    double operator()(const EuclideanNorm&) const { return operator_norm_2(a); }
    double operator()(const MaxAbsNorm&) const {
      return std::max(std::fabs(a.a11) + std::fabs(a.a12), std::fabs(a.a21) + std::fabs(a.a22));
    }
    double operator()(const PolygonalNorm& p) const {
      return outer_ratio(mapped_vertices(p.ball, a), p.ball);
    }
  } visitor{a};
  return std::visit(visitor, tag);
}

BoundPair bounds_rho_n_serial(const MatrixSet& set, int n, const NormTag& tag,
                              std::uint64_t budget) {
  const std::uint64_t count = word_count(set.size(), n, budget);
  const std::uint64_t m = set.size();
  double max_rho = 0.0, max_norm = 0.0;
  for (std::uint64_t w = 0; w < count; ++w) {
    // Digit j of w (most significant first) is s_{j+1}.
    std::vector<std::size_t> digits(static_cast<std::size_t>(n));
    std::uint64_t rest = w;
    for (int j = n - 1; j >= 0; --j) {
      digits[static_cast<std::size_t>(j)] = static_cast<std::size_t>(rest % m);
      rest /= m;
    }
    Mat2 p = Mat2::identity();
    for (std::size_t s : digits) p = set[s] * p;
    max_rho = std::max(max_rho, spectral_radius(p));
    max_norm = std::max(max_norm, induced_norm(p, tag));
  }
  return {power_root(max_rho, n), power_root(max_norm, n), n, norm_name(tag)};
}

double seminorm_r(const MatrixSet& set, int k, Vec2 x, const SymPolygon& ball,
                  std::uint64_t budget) {
  word_count(set.size(), k, budget);
  double best = 0.0;
  // Depth-first over words, carrying the partially mapped vector.
  struct Frame {
    Vec2 v;
    int depth;
  };
  std::vector<Frame> stack{{x, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.depth == k) {
      best = std::max(best, ball.gauge(f.v));
      continue;
    }
    for (const Mat2& a : set.members()) stack.push_back({a * f.v, f.depth + 1});
  }
  return best;
}

Irreducibility check_irreducible(const MatrixSet& set) {
  constexpr double kInvariant = 1e-10;  // sine of the angle between u and Au
  constexpr double kClearlyMoved = 1e-6;
  using Kind = Irreducibility::Kind;

  // A member with a complex pair has no invariant real line.
  std::vector<Vec2> candidates;
  bool found_non_scalar = false;
  for (const Mat2& a : set.members()) {
    const double s = a.max_abs();
    const bool scalar = a.a12 == 0.0 && a.a21 == 0.0 && a.a11 == a.a22;
    if (scalar) continue;
    const double mid = 0.5 * (a.a11 + a.a22);
    const double half_gap = 0.5 * (a.a11 - a.a22);
    const double disc = half_gap * half_gap + a.a12 * a.a21;
    if (disc < -kInvariant * s * s) return {Kind::irreducible, std::nullopt};
    const double root = std::sqrt(std::max(disc, 0.0));
    candidates.push_back(eigenline(a, mid + root));
    const Vec2 other = eigenline(a, mid - root);
    if (std::fabs(cross(other, candidates.back())) > kInvariant) candidates.push_back(other);
    found_non_scalar = true;
    break;
  }
  if (!found_non_scalar) return {Kind::reducible, Vec2{1.0, 0.0}};

  bool ambiguous = false;
  for (const Vec2& u : candidates) {
    double worst = 0.0;
    for (const Mat2& a : set.members()) {
      const Vec2 au = a * u;
      const double len = norm(au);
      if (len <= 1e-300 || len <= 1e-14 * a.max_abs()) continue;  // u in the kernel
      worst = std::max(worst, std::fabs(cross(u, au)) / len);
    }
    if (worst <= kInvariant) return {Kind::reducible, u};
    if (worst < kClearlyMoved) ambiguous = true;
  }
  if (ambiguous) return {Kind::inconclusive, std::nullopt};
  return {Kind::irreducible, std::nullopt};
}

std::optional<ShortcutResult> symmetric_shortcut(const MatrixSet& set) {
  const auto members = set.members();
  const bool all_symmetric =
      std::all_of(members.begin(), members.end(), [](const Mat2& a) { return a.is_symmetric(); });
  ShortcutResult best;
  best.all_symmetric = all_symmetric;
  if (all_symmetric) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      const double r = spectral_radius(members[i]);
      if (r > best.rho) best = {r, i, true};
    }
    return best;
  }
  const auto transposes = set.transposes();
  for (const Mat2& t : transposes) {
    if (std::find(members.begin(), members.end(), t) == members.end()) return std::nullopt;
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    const double r = std::sqrt(spectral_radius(transposes[i] * members[i]));
    if (r > best.rho) best = {r, i, false};
  }
  return best;
}

}  // namespace barnorm
