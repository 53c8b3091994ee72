#include "kitesim/runner.hpp"

#include <exception>
#include <mutex>

#include <omp.h>

namespace kitesim {

void run_cases(std::size_t n, const std::function<void(std::size_t)>& body, Execution exec) {
  std::exception_ptr first;
  std::mutex mutex;
  auto guarded = [&](std::size_t i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard lock(mutex);
      if (!first) first = std::current_exception();
    }
  };
  const long count = static_cast<long>(n);
  if (exec == Execution::Serial) {
    for (long i = 0; i < count; ++i) guarded(static_cast<std::size_t>(i));
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < count; ++i) guarded(static_cast<std::size_t>(i));
  }
  if (first) std::rethrow_exception(first);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace kitesim
