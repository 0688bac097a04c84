#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "barnorm/linalg.hpp"
#include "barnorm/polygon.hpp"

namespace barnorm {

inline constexpr std::uint64_t kDefaultProductBudget = 10'000'000;

/// Max modulus of the eigenvalues, from the closed-form quadratic.
double spectral_radius(const Mat2& a);

/// Largest singular value, sqrt(rho(A^T A)).
double operator_norm_2(const Mat2& a);

/// Ordered, nonempty family {A_1, ..., A_m} with cached transposes.
class MatrixSet {
 public:
  explicit MatrixSet(std::vector<Mat2> members, std::optional<double> scale_hint = {});

  std::size_t size() const noexcept { return members_.size(); }
  const Mat2& operator[](std::size_t i) const { return members_[i]; }
  std::span<const Mat2> members() const noexcept { return members_; }
  std::span<const Mat2> transposes() const noexcept { return transposes_; }
  const std::optional<double>& scale_hint() const noexcept { return scale_hint_; }

  MatrixSet transposed() const;
  MatrixSet scaled(double c) const;
  bool all_nonsingular() const;

 private:
  std::vector<Mat2> members_;
  std::vector<Mat2> transposes_;
  std::optional<double> scale_hint_;
};

/// A word sigma = (s_1, ..., s_n) (zero-based indices) and its product
/// A_{s_n} ... A_{s_2} A_{s_1}.
struct ProductWord {
  std::vector<std::size_t> indices;
  Mat2 product;
};

/// Number of words m^n, or throws Error(resource_limit) above `budget`.
std::uint64_t word_count(std::size_t m, int n, std::uint64_t budget = kDefaultProductBudget);

/// Calls `visit` once for every word of length n, in lexicographic order of
/// (s_1, ..., s_n).
void enumerate_products(const MatrixSet& set, int n,
                        const std::function<void(const ProductWord&)>& visit,
                        std::uint64_t budget = kDefaultProductBudget);

struct EuclideanNorm {};
struct MaxAbsNorm {};
struct PolygonalNorm {
  SymPolygon ball;
};
using NormTag = std::variant<EuclideanNorm, MaxAbsNorm, PolygonalNorm>;

std::string norm_name(const NormTag& tag);

/// Operator norm induced by the tagged vector norm.
double induced_norm(const Mat2& a, const NormTag& tag);

struct BoundPair {
  double lower = 0.0;  // max spectral radius of an n-product, to the power 1/n
  double upper = 0.0;  // max induced norm of an n-product, to the power 1/n
  int order = 1;
  std::string norm_tag;
};

/// Brute-force bracket over all m^n products. Runs on the OpenMP kernel.
BoundPair bounds_rho_n(const MatrixSet& set, int n, const NormTag& tag = EuclideanNorm{},
                       std::uint64_t budget = kDefaultProductBudget);

/// Serial reference for bounds_rho_n: every product is rebuilt from its word
/// with no prefix sharing. Kept for cross-checking the parallel kernel.
BoundPair bounds_rho_n_serial(const MatrixSet& set, int n, const NormTag& tag = EuclideanNorm{},
                              std::uint64_t budget = kDefaultProductBudget);

struct Irreducibility {
  enum class Kind { irreducible, reducible, inconclusive };
  Kind kind = Kind::irreducible;
  std::optional<Vec2> witness;  // unit direction of a common invariant line
};

Irreducibility check_irreducible(const MatrixSet& set);

struct ShortcutResult {
  double rho = 0.0;
  std::size_t witness = 0;     // zero-based index of the maximizing member
  bool all_symmetric = false;  // false: closed under transposition only
};

/// Exact value for symmetric members or sets closed under transposition.
std::optional<ShortcutResult> symmetric_shortcut(const MatrixSet& set);

/// r_k(A, x) = max over words of length k of |A_sigma x| in the ball's gauge.
double seminorm_r(const MatrixSet& set, int k, Vec2 x, const SymPolygon& ball,
                  std::uint64_t budget = kDefaultProductBudget);

}  // namespace barnorm
