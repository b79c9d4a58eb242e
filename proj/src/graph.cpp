#include "gnet/graph.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <string>

#include "gnet/errors.hpp"

namespace gnet {

namespace {

constexpr int kMaxMaskNodes = 64;
constexpr int kMaxCountNodes = 10;
constexpr int kMaxEnumerateNodes = 6;
constexpr int kMaxCachedNodes = 5;

}  // namespace

std::vector<NodeId> ParentSet::members() const {
  std::vector<NodeId> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (std::uint64_t rest = mask; rest; rest &= rest - 1) {
    out.push_back(std::countr_zero(rest));
  }
  return out;
}

Dag::Dag(int node_count) {
  if (node_count < 0) {
    throw InvalidArgument("node count must be non-negative");
  }
  if (node_count > kMaxMaskNodes) {
    throw TooLarge("graphs support at most 64 nodes");
  }
  m = node_count;
  parents.resize(static_cast<std::size_t>(node_count));
}

int Dag::edge_count() const {
  int total = 0;
  for (const ParentSet& p : parents) total += p.size();
  return total;
}

bool Dag::has_edge(NodeId from, NodeId to) const {
  if (from < 0 || from >= m || to < 0 || to >= m) return false;
  return parents[static_cast<std::size_t>(to)].contains(from);
}

void Dag::add_edge(NodeId from, NodeId to) {
  if (from < 0 || from >= m || to < 0 || to >= m) {
    throw InvalidArgument("edge endpoint out of range");
  }
  if (from == to) {
    throw InvalidArgument("self loops are not allowed");
  }
  parents[static_cast<std::size_t>(to)].add(from);
}

std::vector<std::pair<NodeId, NodeId>> Dag::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(static_cast<std::size_t>(edge_count()));
  for (NodeId to = 0; to < m; ++to) {
    for (NodeId from : parents[static_cast<std::size_t>(to)].members()) {
      out.emplace_back(from, to);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> validate_acyclic(const Dag& dag) {
  const int m = dag.m;
  if (static_cast<int>(dag.parents.size()) != m) {
    throw DimensionMismatch("parent array length differs from node count");
  }
  const std::uint64_t in_range =
      m == kMaxMaskNodes ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  for (NodeId v = 0; v < m; ++v) {
    const std::uint64_t mask = dag.parents[static_cast<std::size_t>(v)].mask;
    if (mask & ~in_range) {
      throw DimensionMismatch("parent set of node " + std::to_string(v) +
                              " references a node out of range");
    }
    if ((mask >> v) & 1u) {
      throw CycleError("node " + std::to_string(v) + " lists itself as a parent");
    }
  }

  std::vector<int> pending(static_cast<std::size_t>(m));
  for (NodeId v = 0; v < m; ++v) {
    pending[static_cast<std::size_t>(v)] = dag.parents[static_cast<std::size_t>(v)].size();
  }
  std::vector<bool> placed(static_cast<std::size_t>(m), false);
  std::vector<NodeId> order;
  order.reserve(static_cast<std::size_t>(m));
  for (int step = 0; step < m; ++step) {
    NodeId pick = -1;
    for (NodeId v = 0; v < m; ++v) {
      if (!placed[static_cast<std::size_t>(v)] && pending[static_cast<std::size_t>(v)] == 0) {
        pick = v;
        break;
      }
    }
    if (pick < 0) {
      // Every unplaced node still waits on an unplaced parent, so walking
      // parent links inside the unplaced set must loop within m hops.
      NodeId v = 0;
      while (placed[static_cast<std::size_t>(v)]) ++v;
      for (int hop = 0; hop < m; ++hop) {
        for (NodeId j : dag.parents[static_cast<std::size_t>(v)].members()) {
          if (!placed[static_cast<std::size_t>(j)]) {
            v = j;
            break;
          }
        }
      }
      throw CycleError("cycle through node " + std::to_string(v));
    }
    placed[static_cast<std::size_t>(pick)] = true;
    order.push_back(pick);
    for (NodeId v = 0; v < m; ++v) {
      if (!placed[static_cast<std::size_t>(v)] &&
          dag.parents[static_cast<std::size_t>(v)].contains(pick)) {
        --pending[static_cast<std::size_t>(v)];
      }
    }
  }
  return order;
}

int shd(const Dag& a, const Dag& b) {
  if (a.m != b.m) {
    throw DimensionMismatch("graphs differ in node count");
  }
  auto state = [](const Dag& g, NodeId i, NodeId j) {
    if (g.parents[static_cast<std::size_t>(j)].contains(i)) return 1;  // i -> j
    if (g.parents[static_cast<std::size_t>(i)].contains(j)) return 2;  // j -> i
    return 0;
  };
  int dist = 0;
  for (NodeId j = 0; j < a.m; ++j) {
    for (NodeId i = 0; i < j; ++i) {
      if (state(a, i, j) != state(b, i, j)) ++dist;
    }
  }
  return dist;
}

std::uint64_t count_dags(int m) {
  if (m < 0) throw InvalidArgument("node count must be non-negative");
  if (m > kMaxCountNodes) throw TooLarge("count_dags supports m <= 10");
  long long binom[kMaxCountNodes + 1][kMaxCountNodes + 1] = {};
  for (int n = 0; n <= kMaxCountNodes; ++n) {
    binom[n][0] = 1;
    for (int k = 1; k <= n; ++k) {
      binom[n][k] = binom[n - 1][k - 1] + (k <= n - 1 ? binom[n - 1][k] : 0);
    }
  }
  __int128 counts[kMaxCountNodes + 1] = {};
  counts[0] = 1;
  for (int n = 1; n <= m; ++n) {
    __int128 sum = 0;
    for (int k = 1; k <= n; ++k) {
      __int128 term = static_cast<__int128>(binom[n][k])
                      << (static_cast<unsigned>(k) * static_cast<unsigned>(n - k));
      term *= counts[n - k];
      sum += (k % 2 == 1) ? term : -term;
    }
    counts[n] = sum;
  }
  return static_cast<std::uint64_t>(counts[m]);
}

void for_each_dag(int m, const std::function<void(const Dag&)>& visit) {
  if (m < 0) throw InvalidArgument("node count must be non-negative");
  if (m > kMaxEnumerateNodes) throw TooLarge("DAG enumeration supports m <= 6");
  Dag dag(m);
  if (m == 0) {
    visit(dag);
    return;
  }
  std::vector<std::uint64_t> childmask(static_cast<std::size_t>(m), 0);

  // A new cycle must pass through the node just assigned, so it exists iff
  // some chosen parent is a descendant of that node in the partial graph.
  auto creates_cycle = [&](NodeId v) {
    const std::uint64_t want = dag.parents[static_cast<std::size_t>(v)].mask;
    std::uint64_t seen = 0;
    std::uint64_t frontier = childmask[static_cast<std::size_t>(v)];
    while (frontier) {
      if (frontier & want) return true;
      seen |= frontier;
      std::uint64_t next = 0;
      for (std::uint64_t rest = frontier; rest; rest &= rest - 1) {
        next |= childmask[static_cast<std::size_t>(std::countr_zero(rest))];
      }
      frontier = next & ~seen;
    }
    return false;
  };

  const std::uint64_t limit = std::uint64_t{1} << (m - 1);
  std::function<void(NodeId)> assign = [&](NodeId v) {
    if (v == m) {
      visit(dag);
      return;
    }
    for (std::uint64_t compressed = 0; compressed < limit; ++compressed) {
      const std::uint64_t mask = mask_insert_gap(compressed, v);
      dag.parents[static_cast<std::size_t>(v)].mask = mask;
      for (std::uint64_t rest = mask; rest; rest &= rest - 1) {
        childmask[static_cast<std::size_t>(std::countr_zero(rest))] |= std::uint64_t{1} << v;
      }
      if (!creates_cycle(v)) assign(v + 1);
      for (std::uint64_t rest = mask; rest; rest &= rest - 1) {
        childmask[static_cast<std::size_t>(std::countr_zero(rest))] &= ~(std::uint64_t{1} << v);
      }
    }
    dag.parents[static_cast<std::size_t>(v)].mask = 0;
  };
  assign(0);
}

std::vector<Dag> enumerate_dags(int m) {
  std::vector<Dag> out;
  if (m >= 0 && m <= kMaxEnumerateNodes) {
    out.reserve(static_cast<std::size_t>(count_dags(m)));
  }
  for_each_dag(m, [&](const Dag& d) { out.push_back(d); });
  return out;
}

const std::vector<Dag>& enumerate_dags_cached(int m) {
  if (m < 0) throw InvalidArgument("node count must be non-negative");
  if (m > kMaxCachedNodes) throw TooLarge("cached DAG enumeration supports m <= 5");
  static std::array<std::vector<Dag>, kMaxCachedNodes + 1> cache;
  static std::array<std::once_flag, kMaxCachedNodes + 1> built;
  std::call_once(built[static_cast<std::size_t>(m)],
                 [m] { cache[static_cast<std::size_t>(m)] = enumerate_dags(m); });
  return cache[static_cast<std::size_t>(m)];
}

}  // namespace gnet
