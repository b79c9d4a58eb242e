#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace gnet {

using NodeId = int;

/// Parent set of a node, stored as a bitmask over node ids (limits graphs
/// to 64 nodes). The implicit intercept regressor is not part of the mask;
/// k() counts it, so k = |parents| + 1.
struct ParentSet {
  std::uint64_t mask = 0;

  int size() const { return std::popcount(mask); }
  int k() const { return size() + 1; }
  bool contains(NodeId j) const { return (mask >> j) & 1u; }
  void add(NodeId j) { mask |= std::uint64_t{1} << j; }
  void remove(NodeId j) { mask &= ~(std::uint64_t{1} << j); }
  /// Member node ids in ascending order.
  std::vector<NodeId> members() const;

  bool operator==(const ParentSet&) const = default;
};

/// Directed graph over m nodes, stored child-side: parents[i] holds the
/// nodes with an edge into i. Mutation does not enforce acyclicity; call
/// validate_acyclic before relying on DAG-ness.
struct Dag {
  int m = 0;
  std::vector<ParentSet> parents;

  Dag() = default;
  explicit Dag(int node_count);

  int edge_count() const;
  bool has_edge(NodeId from, NodeId to) const;
  void add_edge(NodeId from, NodeId to);
  /// All edges as (from, to), sorted lexicographically.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  bool operator==(const Dag&) const = default;
};

/// Checks structural validity and returns a topological order (parents
/// before children; ties broken toward the smallest node id, so the order
/// is canonical). Throws CycleError naming a node on a cycle, or
/// DimensionMismatch if a parent mask references a node >= m.
std::vector<NodeId> validate_acyclic(const Dag& dag);

/// Structural Hamming distance between two DAGs on the same node set:
/// per unordered pair, 0 if the edge state is identical, 1 if the edge is
/// missing from exactly one graph or oppositely directed.
int shd(const Dag& a, const Dag& b);

/// Number of labelled DAGs on m nodes by the alternating recurrence
/// a(n) = sum_k (-1)^(k+1) C(n,k) 2^(k(n-k)) a(n-k). m <= 10 so the
/// result fits in 64 bits.
std::uint64_t count_dags(int m);

/// Visits every labelled DAG on m nodes exactly once, in lexicographic
/// order of the parent-mask tuple (mask_0, ..., mask_{m-1}). m <= 6.
void for_each_dag(int m, const std::function<void(const Dag&)>& visit);

/// Materializes the full enumeration. m <= 6.
std::vector<Dag> enumerate_dags(int m);

/// Shared lazily-built enumeration cache for desk-scale m. m <= 5.
const std::vector<Dag>& enumerate_dags_cached(int m);

/// Inserts a zero bit at position `gap`, shifting higher bits up. Maps a
/// compressed mask over "all nodes except gap" to a full node mask.
inline std::uint64_t mask_insert_gap(std::uint64_t compressed, int gap) {
  const std::uint64_t low = compressed & ((std::uint64_t{1} << gap) - 1);
  return low | ((compressed >> gap) << (gap + 1));
}

/// Inverse of mask_insert_gap; bit `gap` of `full` must be clear.
inline std::uint64_t mask_remove_gap(std::uint64_t full, int gap) {
  const std::uint64_t low = full & ((std::uint64_t{1} << gap) - 1);
  return low | ((full >> (gap + 1)) << gap);
}

}  // namespace gnet
