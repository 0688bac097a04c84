// OpenMP kernel for the brute-force product bounds. The word space is split
// on a prefix of the word; each prefix is expanded depth-first with shared
// prefix products. bounds_rho_n_serial in matcore.cpp is the reference.

#include <algorithm>
#include <cmath>
#include <vector>

#include "barnorm/error.hpp"
#include "barnorm/matcore.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace barnorm {
namespace {

struct Extremes {
  double max_rho = 0.0;
  double max_norm = 0.0;
};

void expand(const MatrixSet& set, const NormTag& tag, const Mat2& prefix, int remaining,
            Extremes& out) {
  if (remaining == 0) {
    out.max_rho = std::max(out.max_rho, spectral_radius(prefix));
    out.max_norm = std::max(out.max_norm, induced_norm(prefix, tag));
    return;
  }
  for (const Mat2& a : set.members()) expand(set, tag, a * prefix, remaining - 1, out);
}

}  // namespace

BoundPair bounds_rho_n(const MatrixSet& set, int n, const NormTag& tag, std::uint64_t budget) {
  word_count(set.size(), n, budget);
  const std::uint64_t m = set.size();

  // Enough prefixes to balance the threads, never deeper than the word.
  int split = 1;
  std::uint64_t prefixes = m;
  while (split < n && prefixes < 256) {
    prefixes *= m;
    ++split;
  }

  double max_rho = 0.0, max_norm = 0.0;
  const auto count = static_cast<std::int64_t>(prefixes);
#pragma omp parallel for schedule(dynamic, 4) reduction(max : max_rho, max_norm)
  for (std::int64_t p = 0; p < count; ++p) {
    // Most significant digit first: s_1, ..., s_split.
    std::vector<std::size_t> digits(static_cast<std::size_t>(split));
    auto rest = static_cast<std::uint64_t>(p);
    for (int j = split - 1; j >= 0; --j) {
      digits[static_cast<std::size_t>(j)] = static_cast<std::size_t>(rest % m);
      rest /= m;
    }
    Mat2 prefix = Mat2::identity();
    for (std::size_t s : digits) prefix = set[s] * prefix;
    Extremes local;
    expand(set, tag, prefix, n - split, local);
    max_rho = std::max(max_rho, local.max_rho);
    max_norm = std::max(max_norm, local.max_norm);
  }
  const auto root = [n](double v) { return n == 1 ? v : std::pow(v, 1.0 / n); };
  return {root(max_rho), root(max_norm), n, norm_name(tag)};
}

}  // namespace barnorm
