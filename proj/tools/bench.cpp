// Serial reference vs OpenMP kernels on the volume integral and the pointwise
// sweep. Prints wall times, speedup and the largest difference in results.

#include "totcurv/parallel.hpp"
#include "totcurv/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace {

template <class F>
double timed(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(const char* what, double serial, double parallel, double diff) {
    std::printf("%-40s serial %8.3f s   parallel %8.3f s   speedup %5.2fx   max diff %.3g\n", what, serial,
                parallel, parallel > 0 ? serial / parallel : 0.0, diff);
}

} // namespace

int main(int argc, char** argv) {
    using namespace totcurv;
    const std::string name = argc > 1 ? argv[1] : "sphere_annulus";
    const int grid = argc > 2 ? std::atoi(argv[2]) : 0;
    const Scenario s = builtin(name);
    std::printf("scenario %s, %d workers\n", s.label.c_str(), worker_count());

    std::vector<int> rs;
    for (int r = 0; r < s.dim; ++r) rs.push_back(r);

    VerifyOptions opts;
    opts.surface_m = grid;
    std::vector<VerificationRow> serial_rows, parallel_rows;
    opts.exec = Execution::serial;
    const double ts = timed([&] { serial_rows = verify_main_identity(s, rs, opts); });
    opts.exec = Execution::parallel;
    const double tp = timed([&] { parallel_rows = verify_main_identity(s, rs, opts); });
    double diff = 0.0;
    for (std::size_t k = 0; k < rs.size(); ++k) {
        diff = std::max(diff, std::abs(serial_rows[k].rhs - parallel_rows[k].rhs));
        diff = std::max(diff, std::abs(serial_rows[k].lhs - parallel_rows[k].lhs));
    }
    report("integral identity (all r)", ts, tp, diff);

    PointwiseOptions popts;
    std::vector<PointwiseRow> serial_pw, parallel_pw;
    popts.exec = Execution::serial;
    const double ps = timed([&] { serial_pw = run_pointwise(s, rs, popts); });
    popts.exec = Execution::parallel;
    const double pp = timed([&] { parallel_pw = run_pointwise(s, rs, popts); });
    diff = 0.0;
    for (std::size_t k = 0; k < rs.size(); ++k) {
        diff = std::max(diff, std::abs(serial_pw[k].max_residual - parallel_pw[k].max_residual));
    }
    report("pointwise sweep (100 points, all r)", ps, pp, diff);
    return 0;
}
