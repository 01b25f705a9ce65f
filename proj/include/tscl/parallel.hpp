#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace tscl {

/// Runs body(i) for i in [0, n) on up to `threads` workers. Indices are
/// dealt round-robin; each body must write only to its own slot, so results
/// do not depend on the schedule. The exception from the lowest failing
/// index is rethrown.
template <typename Body>
void parallel_for(std::size_t n, int threads, Body&& body)
{
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](std::size_t first) {
    for (std::size_t i = first; i < n; i += workers)
    {
      try
      {
        body(i);
      }
      catch (...)
      {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1)
  {
    run(0);
  }
  else
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

} // namespace tscl
