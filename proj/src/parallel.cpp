#include "totcurv/parallel.hpp"

#include <cstdlib>
#include <exception>
#include <string>

#include <omp.h>

namespace totcurv {

namespace {

constexpr std::size_t kBlock = 256;

int g_workers = 0;  // 0: not yet resolved

int resolve_workers() {
    if (g_workers > 0) return g_workers;
    if (const char* env = std::getenv("TOTCURV_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    return omp_get_max_threads();
}

} // namespace

int worker_count() { return resolve_workers(); }

void set_worker_count(int workers) { g_workers = workers > 0 ? workers : 0; }

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

void for_each_index(std::size_t count, const std::function<void(std::size_t)>& fn, Execution exec) {
    if (exec == Execution::serial) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr failure;
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 4) num_threads(resolve_workers())
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(totcurv_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

std::vector<double> accumulate_nodes(std::size_t count, std::size_t width, const NodeFunction& fn,
                                     Execution exec) {
    std::vector<double> result(width, 0.0);
    if (count == 0) return result;

    if (exec == Execution::serial) {
        std::vector<double> all(count * width);
        for (std::size_t i = 0; i < count; ++i) fn(i, std::span<double>(all).subspan(i * width, width));
        std::vector<double> column(count);
        for (std::size_t w = 0; w < width; ++w) {
            for (std::size_t i = 0; i < count; ++i) column[i] = all[i * width + w];
            result[w] = pairwise_sum(column);
        }
        return result;
    }

    const std::size_t blocks = (count + kBlock - 1) / kBlock;
    std::vector<double> block_sums(blocks * width, 0.0);
    for_each_index(
        blocks,
        [&](std::size_t b) {
            const std::size_t begin = b * kBlock;
            const std::size_t end = std::min(count, begin + kBlock);
            const std::size_t len = end - begin;
            std::vector<double> local(len * width);
            for (std::size_t i = 0; i < len; ++i)
                fn(begin + i, std::span<double>(local).subspan(i * width, width));
            std::vector<double> column(len);
            for (std::size_t w = 0; w < width; ++w) {
                for (std::size_t i = 0; i < len; ++i) column[i] = local[i * width + w];
                block_sums[b * width + w] = pairwise_sum(column);
            }
        },
        Execution::parallel);

    std::vector<double> column(blocks);
    for (std::size_t w = 0; w < width; ++w) {
        for (std::size_t b = 0; b < blocks; ++b) column[b] = block_sums[b * width + w];
        result[w] = pairwise_sum(column);
    }
    return result;
}

} // namespace totcurv
