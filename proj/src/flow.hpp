// Copyright 2026 The ulearn Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dinic's max-flow on small integer networks. Internal.

#ifndef ULEARN_SRC_FLOW_HPP_
#define ULEARN_SRC_FLOW_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

namespace ulearn::internal {

class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes) : adj_(nodes) {}

  // Returns the arc id of the forward arc.
  std::size_t AddArc(std::size_t from, std::size_t to, std::int64_t cap) {
    const std::size_t id = arcs_.size();
    arcs_.push_back({to, cap, 0});
    adj_[from].push_back(id);
    arcs_.push_back({from, 0, 0});
    adj_[to].push_back(id + 1);
    return id;
  }

  std::int64_t Run(std::size_t s, std::size_t t) {
    std::int64_t total = 0;
    while (Levels(s, t)) {
      next_.assign(adj_.size(), 0);
      while (std::int64_t f = Push(s, t, std::numeric_limits<std::int64_t>::max())) total += f;
    }
    return total;
  }

  std::int64_t Flow(std::size_t arc) const { return arcs_[arc].flow; }

 private:
  struct Arc {
    std::size_t to;
    std::int64_t cap;
    std::int64_t flow;
  };

  bool Levels(std::size_t s, std::size_t t) {
    level_.assign(adj_.size(), -1);
    level_[s] = 0;
    std::queue<std::size_t> q;
    q.push(s);
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t id : adj_[u]) {
        const Arc& a = arcs_[id];
        if (a.flow < a.cap && level_[a.to] < 0) {
          level_[a.to] = level_[u] + 1;
          q.push(a.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  // Iterative-deepening push along level-increasing arcs.
  std::int64_t Push(std::size_t u, std::size_t t, std::int64_t limit) {
    if (u == t) return limit;
    for (; next_[u] < adj_[u].size(); ++next_[u]) {
      const std::size_t id = adj_[u][next_[u]];
      Arc& a = arcs_[id];
      if (a.flow >= a.cap || level_[a.to] != level_[u] + 1) continue;
      const std::int64_t f = Push(a.to, t, std::min(limit, a.cap - a.flow));
      if (f > 0) {
        a.flow += f;
        arcs_[id ^ 1].flow -= f;
        return f;
      }
    }
    return 0;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

}  // namespace ulearn::internal

#endif  // ULEARN_SRC_FLOW_HPP_
