#pragma once

#include <cstddef>
#include <type_traits>
#include <vector>

#include <tbb/blocked_range.h>
#include <tbb/info.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

namespace stirap {

/// Worker count used when the caller passes jobs <= 0.
inline int default_jobs() { return tbb::info::default_concurrency(); }

/// out[i] = f(i) for i in [0, n), evaluated by a work-stealing pool capped at
/// `jobs` workers. Results are stored by index, so the output does not depend
/// on scheduling.
template <typename F>
auto parallel_map(std::size_t n, F&& f, int jobs = 0) {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<R> out(n);
  if (jobs <= 0) jobs = default_jobs();
  if (jobs == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  tbb::task_arena arena(jobs);
  arena.execute([&] {
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n, 1), [&](const tbb::blocked_range<std::size_t>& r) {
      for (std::size_t i = r.begin(); i != r.end(); ++i) out[i] = f(i);
    });
  });
  return out;
}

}  // namespace stirap
