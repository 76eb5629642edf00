#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace hdgmg {

/// Number of worker threads used when the caller passes 0.
inline int default_threads()
{
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Runs fn(i) for i in [0, n) on up to `threads` threads in contiguous chunks.
/// The first exception thrown by any worker is rethrown.
template <class Fn>
void parallel_for(int n, int threads, Fn&& fn)
{
  if (threads <= 0)
    threads = default_threads();
  threads = std::min(threads, std::max(1, n));
  if (threads == 1)
  {
    for (int i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try
      {
        for (int i = t * chunk; i < std::min(n, (t + 1) * chunk); ++i)
          fn(i);
      }
      catch (...)
      {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool)
    th.join();
  for (auto& e : errors)
    if (e)
      std::rethrow_exception(e);
}

} // namespace hdgmg
