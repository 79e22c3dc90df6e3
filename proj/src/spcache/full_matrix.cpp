#include "poolsim/spcache/full_matrix.hpp"

#include <algorithm>

#include "poolsim/common/parallel.hpp"
#include "poolsim/spcache/dijkstra.hpp"

namespace poolsim::spcache {

FullDistanceMatrix::FullDistanceMatrix(const geo::Digraph& g, int threads) : n_(g.node_count()), d_(n_ * n_) {
  if (threads == 1) {
    DijkstraWorkspace ws(n_);
    for (NodeId u = 0; u < n_; ++u) {
      const auto& row = ws.run(g, u);
      std::copy(row.begin(), row.end(), d_.begin() + static_cast<std::ptrdiff_t>(u * n_));
    }
    return;
  }
#pragma omp parallel num_threads(worker_threads(threads))
  {
    DijkstraWorkspace ws(n_);
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t ui = 0; ui < static_cast<std::int64_t>(n_); ++ui) {
      const auto& row = ws.run(g, static_cast<NodeId>(ui));
      std::copy(row.begin(), row.end(), d_.begin() + ui * static_cast<std::ptrdiff_t>(n_));
    }
  }
}

}  // namespace poolsim::spcache
