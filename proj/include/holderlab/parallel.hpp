#pragma once

// Replica-level parallelism with deterministic output.
//
// Monte Carlo work here is always "evaluate a pure function of the replica
// index, then reduce".  parallel_collect materializes the per-replica results
// in index order no matter how the indices were assigned to threads, so any
// reduction over the returned vector -- and therefore any report built from
// it -- is reproducible byte for byte across thread counts.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

namespace holderlab {

// Evaluate fn(0), ..., fn(count-1) on up to `threads` workers and return the
// values in index order.  fn must be safe to invoke concurrently (a pure
// function of the index); the value type must be default-constructible.
// The first exception thrown inside a worker is rethrown on the caller.
template <typename Fn>
auto parallel_collect(std::uint64_t count, int threads, Fn&& fn)
    -> std::vector<decltype(fn(std::uint64_t(0)))> {
  using Value = decltype(fn(std::uint64_t(0)));
  if (threads < 1) throw std::invalid_argument("parallel_collect: need at least one thread");
  std::vector<Value> out(count);
  if (count == 0) return out;
  const std::uint64_t workers =
      std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), count);
  if (workers == 1) {
    for (std::uint64_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t lo = count * w / workers;
    const std::uint64_t hi = count * (w + 1) / workers;
    pool.emplace_back([&out, &errors, &fn, w, lo, hi] {
      try {
        for (std::uint64_t i = lo; i < hi; ++i) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace holderlab
