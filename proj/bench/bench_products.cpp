// Serial reference vs OpenMP kernel for the brute-force bracket.
//   bench_products [max_order] [repeats]
#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "barnorm/matcore.hpp"

using barnorm::Mat2;
using barnorm::MatrixSet;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int max_order = argc > 1 ? std::atoi(argv[1]) : 18;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;

  const MatrixSet set({0.576 * Mat2{0.9, 1.1, 0, 1}, 0.8 * Mat2{1, 0, 1, 0.9}});
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("%5s %10s %12s %12s %8s %s\n", "n", "products", "serial_s", "omp_s", "speedup",
              "agree");
  for (int n = 8; n <= max_order; n += 2) {
    barnorm::BoundPair s{}, p{};
    const double ts = best_of(repeats, [&] { s = barnorm::bounds_rho_n_serial(set, n); });
    const double tp = best_of(repeats, [&] { p = barnorm::bounds_rho_n(set, n); });
    const bool agree = s.lower == p.lower && s.upper == p.upper;
    std::printf("%5d %10llu %12.6f %12.6f %8.2f %s\n", n, 1ULL << n, ts, tp, ts / tp,
                agree ? "yes" : "NO");
  }
  return 0;
}
