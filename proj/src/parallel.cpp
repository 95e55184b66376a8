#include "soraslab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace soras {

namespace {

std::atomic<unsigned> g_cap{0};

unsigned env_cap() {
  const char* s = std::getenv("SORAS_LAB_THREADS");
  if (!s) return 0;
  long v = std::strtol(s, nullptr, 10);
  return v > 0 ? static_cast<unsigned>(v) : 1;
}

}  // namespace

void set_thread_cap(unsigned cap) { g_cap.store(cap); }

unsigned thread_cap() {
  unsigned cap = g_cap.load();
  if (cap == 0) {
    cap = env_cap();
    if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
    g_cap.store(cap);
  }
  return cap;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t nw = std::min<std::size_t>(thread_cap(), n);
  if (nw <= 1) {
    fn(0, n);
    return;
  }
  const std::size_t chunk = (n + nw - 1) / nw;
  std::vector<std::thread> workers;
  workers.reserve(nw);
  for (std::size_t w = 0; w < nw; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    workers.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& t : workers) t.join();
}

}  // namespace soras
