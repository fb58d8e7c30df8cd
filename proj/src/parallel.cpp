#include "latharm/parallel.hpp"

namespace latharm::detail {

namespace {

std::atomic<int>& thread_cap() {
  static std::atomic<int> cap{0};  // 0 = not yet initialized
  return cap;
}

int hardware_default() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  return static_cast<int>(std::min<unsigned>(hw, 8));
}

// Set while a worker runs its chunk: nested parallel regions degrade to
// serial execution so the process never exceeds the thread cap.
thread_local bool in_worker = false;

}  // namespace

int max_threads() {
  int cap = thread_cap().load(std::memory_order_relaxed);
  return cap > 0 ? cap : hardware_default();
}

void set_max_threads(int n) {
  thread_cap().store(std::clamp(n, 1, 8), std::memory_order_relaxed);
}

void parallel_chunks(Eigen::Index n, const std::function<void(Eigen::Index, Eigen::Index)>& body) {
  if (n <= 0) return;
  const int workers = static_cast<int>(std::min<Eigen::Index>(max_threads(), n));
  if (workers <= 1 || n < 256 || in_worker) {
    const bool was = in_worker;
    in_worker = true;
    body(0, n);
    in_worker = was;
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  const Eigen::Index chunk = (n + workers - 1) / workers;
  for (int w = 1; w < workers; ++w) {
    const Eigen::Index b = std::min<Eigen::Index>(n, w * chunk);
    const Eigen::Index e = std::min<Eigen::Index>(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] {
      in_worker = true;
      body(b, e);
    });
  }
  in_worker = true;  // the calling thread takes the first chunk itself
  body(0, std::min<Eigen::Index>(n, chunk));
  in_worker = false;
  for (auto& t : pool) t.join();
}

}  // namespace latharm::detail
