#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace kitesim {

enum class Execution { Serial, Parallel };

/// Calls body(i) for i in [0, n). Parallel runs use one OpenMP thread per
/// case with dynamic scheduling; each simulation itself stays single
/// threaded. The first exception thrown by any case is rethrown after all
/// cases finished.
void run_cases(std::size_t n, const std::function<void(std::size_t)>& body,
               Execution exec = Execution::Parallel);

template <class Case, class Fn>
auto map_cases(const std::vector<Case>& cases, Fn&& fn, Execution exec = Execution::Parallel) {
  using R = decltype(fn(cases.front()));
  std::vector<R> out(cases.size());
  run_cases(cases.size(), [&](std::size_t i) { out[i] = fn(cases[i]); }, exec);
  return out;
}

int max_threads();

}  // namespace kitesim
