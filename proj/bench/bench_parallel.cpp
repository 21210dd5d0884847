// Serial reference vs OpenMP kernels: Monte Carlo RTQ replications and the
// Sobolev double sum. Prints wall times, speedup and whether results match bitwise.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rtquad/experiments.hpp"
#include "rtquad/integrands.hpp"

using namespace rtquad;

namespace {

double seconds(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

int main(int argc, char** argv) {
    const std::size_t replications = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20000;
    const std::size_t intervals = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1024;
    const std::size_t cells = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 2048;
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif

    const auto g = power_integrand(1.5, 1.0);
    const auto part = make_partition(1.0, intervals);
    const RngStream stream(default_seed, 1);

    LpError serial{}, parallel{};
    const double t_serial = seconds([&] { serial = mc_lp_error_serial(g, part, 2.0, replications, stream); });
    const double t_parallel = seconds([&] { parallel = mc_lp_error(g, part, 2.0, replications, stream); });
    std::printf("mc_lp_error  M=%zu N=%zu  serial %.4f s  parallel %.4f s  speedup %.2fx  %s\n",
                replications, intervals, t_serial, t_parallel, t_serial / t_parallel,
                serial.error == parallel.error ? "bitwise-equal" : "MISMATCH");

    SobolevEstimate s_serial{}, s_parallel{};
    const double u_serial = seconds([&] { s_serial = sobolev_seminorm_serial(g, 1.0, 1.5, 2.0, cells); });
    const double u_parallel = seconds([&] { s_parallel = sobolev_seminorm(g, 1.0, 1.5, 2.0, cells); });
    std::printf("sobolev      cells=%zu       serial %.4f s  parallel %.4f s  speedup %.2fx  %s\n",
                cells, u_serial, u_parallel, u_serial / u_parallel,
                s_serial.value == s_parallel.value ? "bitwise-equal" : "MISMATCH");
    return serial.error == parallel.error && s_serial.value == s_parallel.value ? 0 : 1;
}
