// Benchmark comparing the OpenMP kernels against their serial references:
// the constrained scan and the brute-force oracle.  Also cross-checks that
// both variants return identical results.

#include <cstdio>
#include <cstdlib>

#include "bmojn/constants.hpp"
#include "bmojn/verify.hpp"

#ifdef _OPENMP
#include <omp.h>
static double now() { return omp_get_wtime(); }
#else
#include <chrono>
static double now() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}
#endif

int main(int argc, char** argv) {
    const int grid = argc > 1 ? std::atoi(argv[1]) : 64;
    const long budget = argc > 2 ? std::atol(argv[2]) : 100000;
    const double eps = 0.5;
    const double delta = bmojn::delta_root(eps, bmojn::Sign::plus).root;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (no OpenMP)\n");
#endif

    {
        double t0 = now();
        const bmojn::ScanReport serial =
            bmojn::scan_constraint_set_serial(delta, eps, bmojn::Sign::plus, grid);
        double t1 = now();
        const bmojn::ScanReport parallel =
            bmojn::scan_constraint_set(delta, eps, bmojn::Sign::plus, grid);
        double t2 = now();
        std::printf("scan %dx%dx%d   serial %.3fs   parallel %.3fs   speedup %.2fx\n",
                    grid, grid, grid, t1 - t0, t2 - t1, (t1 - t0) / (t2 - t1));
        if (serial.extremum != parallel.extremum ||
            serial.argument != parallel.argument) {
            std::printf("MISMATCH between serial and parallel scan results\n");
            return 1;
        }
    }

    {
        const bmojn::BellmanPoint p(0.0, eps * eps);
        double t0 = now();
        const double serial = bmojn::brute_force_oracle_serial(p, eps, 5, budget, 7);
        double t1 = now();
        const double parallel = bmojn::brute_force_oracle(p, eps, 5, budget, 7);
        double t2 = now();
        std::printf("oracle depth 5 budget %ld   serial %.3fs   parallel %.3fs   "
                    "speedup %.2fx\n",
                    budget, t1 - t0, t2 - t1, (t1 - t0) / (t2 - t1));
        if (serial != parallel) {
            std::printf("MISMATCH between serial and parallel oracle results\n");
            return 1;
        }
    }
    std::printf("serial and parallel kernels agree exactly\n");
    return 0;
}
