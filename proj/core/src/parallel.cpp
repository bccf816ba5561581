#include "chaoscoupler/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace chaoscoupler::parallel {

namespace {
std::atomic<int> g_threads{1};
}

void set_threads(int n) {
  if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  g_threads = n;
}

int threads() { return g_threads; }

int resolve_threads(int requested) {
  if (requested >= 0) return requested;
  if (const char* env = std::getenv("CHAOS_COUPLER_THREADS")) return std::max(0, std::atoi(env));
  return 1;
}

void parallel_for(int n, const std::function<void(int)>& body) {
  const int nt = std::min(g_threads.load(), n);
  if (nt <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace chaoscoupler::parallel
