#pragma once

// Node-loop kernels. The parallel variant splits work into fixed-size blocks
// and sums each block and then the block totals pairwise, so results do not
// depend on the number of OpenMP threads. The serial variant is the plain
// reference the tests and the benchmark compare against.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace totcurv {

enum class Execution { serial, parallel };

// Writes the `width` contributions of node `index` into `out`.
using NodeFunction = std::function<void(std::size_t index, std::span<double> out)>;

// Σ_index contributions, one sum per column.
std::vector<double> accumulate_nodes(std::size_t count, std::size_t width, const NodeFunction& fn,
                                     Execution exec);

// Calls fn(i) for i in [0,count). Exceptions thrown inside workers are
// rethrown on the calling thread after the loop.
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& fn, Execution exec);

double pairwise_sum(std::span<const double> values);

// Worker count for parallel kernels: TOTCURV_WORKERS if set, else the
// OpenMP default.
int worker_count();
void set_worker_count(int workers);

} // namespace totcurv
