#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "poolsim/ilp/ilp.hpp"

namespace poolsim::ilp {

namespace {

class BranchAndBound {
 public:
  BranchAndBound(const RtvGraph& rtv, double c_ko_s, const IlpOptions& opts)
      : rtv_(rtv), opts_(opts), c_ko_(std::llround(c_ko_s * 1000.0)) {
    for (std::size_t k = 0; k < rtv.requests.size(); ++k) pos_[rtv.requests[k]] = k;
    const std::size_t n = rtv.requests.size();
    by_request_.resize(n);
    members_.resize(rtv.edges.size());
    std::size_t vehicles = 0;
    for (std::size_t e = 0; e < rtv.edges.size(); ++e) {
      for (RequestId r : rtv.trips[rtv.edges[e].trip].members) {
        const auto it = pos_.find(r);
        if (it == pos_.end()) throw std::invalid_argument("trip member outside the request window");
        members_[e].push_back(it->second);
        by_request_[it->second].push_back(e);
      }
      vehicles = std::max(vehicles, rtv.edges[e].vehicle + 1);
    }
    vehicle_used_.assign(vehicles, 0);
    covered_.assign(n, 0);
    lb_.assign(n, c_ko_);
    for (std::size_t e = 0; e < rtv.edges.size(); ++e) {
      const double share = static_cast<double>(rtv.edges[e].cost) / static_cast<double>(members_[e].size());
      for (std::size_t k : members_[e]) lb_[k] = std::min<std::int64_t>(lb_[k], static_cast<std::int64_t>(std::floor(share)));
    }
    for (auto& list : by_request_)
      std::stable_sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
        return static_cast<double>(rtv.edges[a].cost) / static_cast<double>(members_[a].size()) <
               static_cast<double>(rtv.edges[b].cost) / static_cast<double>(members_[b].size());
      });
  }

  AssignmentSolution solve() {
    greedy_incumbent();
    remaining_lb_ = 0;
    for (std::int64_t x : lb_) remaining_lb_ += x;
    start_ = std::chrono::steady_clock::now();
    aborted_ = false;
    dfs(0, 0);
    AssignmentSolution out;
    out.chosen_edges = best_edges_;
    std::sort(out.chosen_edges.begin(), out.chosen_edges.end());
    for (std::size_t k = 0; k < rtv_.requests.size(); ++k) {
      bool in = false;
      for (std::size_t e : best_edges_)
        for (std::size_t m : members_[e]) in |= m == k;
      if (!in) out.unserved.push_back(rtv_.requests[k]);
    }
    out.objective = static_cast<double>(best_) / 1000.0;
    out.optimal = !aborted_;
    out.nodes = nodes_;
    return out;
  }

 private:
  bool usable(std::size_t e) const {
    if (vehicle_used_[rtv_.edges[e].vehicle]) return false;
    for (std::size_t m : members_[e])
      if (covered_[m]) return false;
    return true;
  }

  void take(std::size_t e, bool on) {
    vehicle_used_[rtv_.edges[e].vehicle] = on;
    for (std::size_t m : members_[e]) {
      covered_[m] = on;
      remaining_lb_ += on ? -lb_[m] : lb_[m];
    }
  }

  void greedy_incumbent() {
    std::vector<std::size_t> order(rtv_.edges.size());
    for (std::size_t e = 0; e < order.size(); ++e) order[e] = e;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return static_cast<double>(rtv_.edges[a].cost) / static_cast<double>(members_[a].size()) <
             static_cast<double>(rtv_.edges[b].cost) / static_cast<double>(members_[b].size());
    });
    std::int64_t cost = 0;
    std::vector<std::size_t> chosen;
    for (std::size_t e : order) {
      if (!usable(e)) continue;
      if (rtv_.edges[e].cost >= c_ko_ * static_cast<std::int64_t>(members_[e].size())) continue;
      take(e, true);
      chosen.push_back(e);
      cost += rtv_.edges[e].cost;
    }
    for (std::size_t k = 0; k < covered_.size(); ++k)
      if (!covered_[k]) cost += c_ko_;
    for (std::size_t e : chosen) take(e, false);
    best_ = cost;
    best_edges_ = chosen;
  }

  bool out_of_budget() {
    if (aborted_) return true;
    if (nodes_ >= opts_.node_budget) return aborted_ = true;
    if (opts_.timeout_s > 0 && (nodes_ & 1023) == 0) {
      const std::chrono::duration<double> el = std::chrono::steady_clock::now() - start_;
      if (el.count() > opts_.timeout_s) return aborted_ = true;
    }
    return false;
  }

  void dfs(std::size_t k, std::int64_t cost) {
    while (k < covered_.size() && covered_[k]) ++k;
    if (cost + remaining_lb_ >= best_) return;
    if (k == covered_.size()) {
      best_ = cost;
      best_edges_ = current_;
      return;
    }
    ++nodes_;
    if (out_of_budget()) return;
    for (std::size_t e : by_request_[k]) {
      if (!usable(e)) continue;
      take(e, true);
      current_.push_back(e);
      dfs(k + 1, cost + rtv_.edges[e].cost);
      current_.pop_back();
      take(e, false);
      if (aborted_) return;
    }
    covered_[k] = 1;
    remaining_lb_ -= lb_[k];
    dfs(k + 1, cost + c_ko_);
    remaining_lb_ += lb_[k];
    covered_[k] = 0;
  }

  const RtvGraph& rtv_;
  const IlpOptions& opts_;
  std::int64_t c_ko_;
  std::map<RequestId, std::size_t> pos_;
  std::vector<std::vector<std::size_t>> by_request_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<char> vehicle_used_, covered_;
  std::vector<std::int64_t> lb_;
  std::int64_t remaining_lb_ = 0;
  std::int64_t best_ = 0;
  std::vector<std::size_t> best_edges_, current_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

AssignmentSolution solve_assignment(const RtvGraph& rtv, double c_ko_s, const IlpOptions& opts) {
  if (c_ko_s < 0) throw std::invalid_argument("c_ko must be non-negative");
  return BranchAndBound(rtv, c_ko_s, opts).solve();
}

std::vector<stars::RebalanceMove> rebalance_ilp(std::span<const Vehicle> fleet, std::span<const RequestId> unserved,
                                                const SchedulerContext& sc) {
  std::vector<std::size_t> idle;
  for (std::size_t i = 0; i < fleet.size(); ++i)
    if (fleet[i].idle() && fleet[i].state == domain::VehicleState::ForHire) idle.push_back(i);
  std::vector<stars::RebalanceMove> out;
  if (idle.empty() || unserved.empty()) return out;
  assign::CostMatrix m(idle.size(), unserved.size());
  for (std::size_t a = 0; a < idle.size(); ++a)
    for (std::size_t b = 0; b < unserved.size(); ++b) {
      const Vehicle& v = fleet[idle[a]];
      const Millimeters d = sc.oracle->dist(v.node(), (*sc.requests)[unserved[b]].origin);
      if (d != kUnreachable) m(a, b) = ms_to_seconds(travel_ms(d, v.speed));
    }
  const assign::Matching match = assign::min_cost_matching(m);
  for (std::size_t a = 0; a < idle.size(); ++a) {
    if (match.row_to_col[a] == assign::kUnmatched) continue;
    const NodeId target = (*sc.requests)[unserved[static_cast<std::size_t>(match.row_to_col[a])]].origin;
    if (target != fleet[idle[a]].node()) out.push_back({idle[a], target});
  }
  return out;
}

}  // namespace poolsim::ilp
