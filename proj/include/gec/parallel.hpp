#pragma once

#include <cstddef>
#include <exception>
#include <type_traits>
#include <vector>

#include <omp.h>

namespace gec {

/// How corpus-level operations visit sentences. Serial is the reference path;
/// Parallel runs the same per-sentence kernel under OpenMP. Both produce
/// per-sentence results in input order, so reductions are identical.
enum class Execution { Serial, Parallel };

struct ExecutionOptions {
  Execution mode = Execution::Serial;
  int jobs = 0;  // 0 = OpenMP default
};

/// Applies `fn(i)` for i in [0, n) and returns results indexed by i.
/// If any call throws, the exception of the lowest failing index is rethrown
/// after the loop, independent of scheduling.
template <class Fn>
auto map_indexed(std::size_t n, const ExecutionOptions& exec, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  using Result = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<Result> results(n);
  if (exec.mode == Execution::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }

  std::vector<std::exception_ptr> errors(n);
  const int threads = exec.jobs > 0 ? exec.jobs : omp_get_max_threads();
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (long long i = 0; i < count; ++i) {
    try {
      results[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  return results;
}

}  // namespace gec
