// Compares the OpenMP matmul kernel against the serial reference and checks
// that both produce identical results.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>

#include "fssqm/matrix.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace fssqm;

namespace {

CMatrix random_matrix(std::size_t n, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = {dist(rng), dist(rng)};
    return m;
}

template <typename F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        if (ms < best) best = ms;
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    const int reps = quick ? 1 : 3;
    std::vector<std::size_t> sizes = quick ? std::vector<std::size_t>{32, 64}
                                           : std::vector<std::size_t>{64, 128, 256, 384};
#ifdef _OPENMP
    std::printf("# threads: %d\n", omp_get_max_threads());
#else
    std::printf("# threads: 1 (built without OpenMP)\n");
#endif
    std::printf("%8s %14s %14s %10s\n", "n", "serial_ms", "parallel_ms", "speedup");

    std::mt19937 rng(12345);
    for (std::size_t n : sizes) {
        const CMatrix a = random_matrix(n, rng);
        const CMatrix b = random_matrix(n, rng);
        CMatrix r1, r2;
        const double ts = best_of(reps, [&] { r1 = serial::matmul(a, b); });
        const double tp = best_of(reps, [&] { r2 = matmul(a, b); });
        if (inf_norm(r1 - r2) != 0.0) {
            std::printf("kernel mismatch at n = %zu\n", n);
            return 1;
        }
        std::printf("%8zu %14.3f %14.3f %10.2f\n", n, ts, tp, ts / tp);
    }
    return 0;
}
