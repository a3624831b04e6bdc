#pragma once

#include <array>
#include <string>
#include <vector>

#include "d2dsim/rng.hpp"

namespace d2dsim {

struct Node {
  double x = 0.0, y = 0.0;
};

struct NetworkGeometry {
  int n_requested = 0;
  int n = 0;          // actual node count (grid truncates to a full square)
  int side = 0;       // nodes per axis for grid layouts, 0 for uniform
  bool truncated = false;
  std::vector<Node> nodes;  // node id = index
};

// Regular grid on the unit square, spacing 1/side with nodes at cell centers.
// Non-square n is truncated to floor(sqrt(n))^2 and flagged.
NetworkGeometry grid_nodes(int n);

// n i.i.d. uniform points on the unit square.
NetworkGeometry uniform_nodes(int n, Rng& rng);

struct ClusterPartition {
  double side = 0.0;  // cluster edge length
  int ncx = 0, ncy = 0;
  std::vector<int> cluster_of;            // per node
  std::vector<std::vector<int>> members;  // per cluster, ascending node ids
  int cluster_count() const { return ncx * ncy; }
};

// Axis-aligned square cells of the given edge; the last row/column may be
// smaller when side does not divide 1.
ClusterPartition partition_clusters(const NetworkGeometry& geo, double cluster_side);

// TDMA reuse factor K = (ceil(sqrt(2)(1+delta)) + 1)^2.
int reuse_factor(double delta);

// Color = (row mod s)*s + (col mod s) with s = sqrt(K); K must be a square.
std::vector<int> color_clusters(const ClusterPartition& part, int K);

// Protocol model over a set of simultaneously active (tx, rx) pairs: every
// link must span at most r, and no *other* active transmitter may sit within
// (1+delta)*r of any receiver (boundary counts as interference).
bool protocol_feasible(const std::vector<Node>& nodes,
                       const std::vector<std::array<int, 2>>& active_tx_rx, double r,
                       double delta);

// node_id,x,y,cluster_id,color
std::string geometry_csv(const NetworkGeometry& geo, const ClusterPartition& part,
                         const std::vector<int>& colors);

}  // namespace d2dsim
