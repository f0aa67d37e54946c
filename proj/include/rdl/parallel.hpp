#ifndef RDL_PARALLEL_HPP_
#define RDL_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace rdl {

// Worker count: RDL_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

// Calls fn(i) for i in [0, n) on up to worker_count() threads. Each index is
// visited exactly once; callers write results into slot i so the reduction
// order does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace rdl

#endif  // RDL_PARALLEL_HPP_
