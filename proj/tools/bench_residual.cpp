// Timing comparison of the parallel grid-residual kernel against the serial
// reference on a synthetic candidate. Usage: bench_residual [nx nt reps].
#include "fibaux/verify.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace fibaux;
using clock_type = std::chrono::steady_clock;

int main(int argc, char** argv) {
    int nx = argc > 1 ? std::atoi(argv[1]) : 160;
    int nt = argc > 2 ? std::atoi(argv[2]) : 160;
    int reps = argc > 3 ? std::atoi(argv[3]) : 3;

    Expr u = make_sym("u"), ux = make_sym("u_x"), ut = make_sym("u_t"), uxx = make_sym("u_xx");
    Expr lhs = ut - (make_num(2) * make_pow(ux, make_num(2)) + make_num(2) * u * uxx) -
               make_sym("p") * u + make_sym("q") * make_pow(u, make_num(3));
    PdeSpec pde{"u", lhs};

    Expr x = make_sym("x"), t = make_sym("t");
    Expr cand = make_fun(FunTag::Sin, {x * t}) *
                    make_fun(FunTag::ArcTan, {x + make_pow(t, make_num(2))}) +
                make_sqrt(make_num(1) + make_pow(x, make_num(2)), true) / t;
    EvalPoint params{{"p", 0.8}, {"q", -1.2}};
    GridSpec grid{0.2, 3.0, nx, 0.5, 2.5, nt};

    double serial_best = 1e300, parallel_best = 1e300;
    ResidualReport rs, rp;
    for (int r = 0; r < reps; ++r) {
        auto t0 = clock_type::now();
        rs = pde_residual_grid_serial(pde, cand, grid, params);
        auto t1 = clock_type::now();
        rp = pde_residual_grid(pde, cand, grid, params);
        auto t2 = clock_type::now();
        serial_best = std::min(serial_best, std::chrono::duration<double>(t1 - t0).count());
        parallel_best = std::min(parallel_best, std::chrono::duration<double>(t2 - t1).count());
    }
    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("grid %dx%d, threads %d\n", nx, nt, threads);
    std::printf("serial   %.3f s  (max residual %.6g)\n", serial_best, rs.max_abs);
    std::printf("parallel %.3f s  (max residual %.6g)\n", parallel_best, rp.max_abs);
    std::printf("speedup  %.2fx\n", serial_best / parallel_best);
    bool same = rs.max_abs == rp.max_abs && rs.mean_abs == rp.mean_abs &&
                rs.out_of_domain == rp.out_of_domain;
    std::printf("kernels agree: %s\n", same ? "yes" : "NO");
    return same ? 0 : 1;
}
