#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace latharm::detail {

// Process-wide worker cap. Defaults to min(8, hardware_concurrency) and can be
// lowered (e.g. by the CLI --threads flag). Never exceeds 8.
int max_threads();
void set_max_threads(int n);

// Splits [0, n) into contiguous chunks and runs body(begin, end) on each, using
// at most max_threads() workers. Chunk boundaries depend only on n and the
// thread cap, so deterministic bodies give deterministic results as long as
// per-chunk outputs are written to disjoint ranges or reduced in chunk order.
void parallel_chunks(Eigen::Index n, const std::function<void(Eigen::Index, Eigen::Index)>& body);

// Convenience: per-index variant.
template <class F>
void parallel_for(Eigen::Index n, F&& body) {
  parallel_chunks(n, [&body](Eigen::Index b, Eigen::Index e) {
    for (Eigen::Index i = b; i < e; ++i) body(i);
  });
}

}  // namespace latharm::detail
