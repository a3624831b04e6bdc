#include "d2dsim/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "d2dsim/csv.hpp"

namespace d2dsim {

NetworkGeometry grid_nodes(int n) {
  if (n < 1) throw std::invalid_argument("grid_nodes: n must be >= 1");
  int side = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
  while ((side + 1) * (side + 1) <= n) ++side;  // guard fp sqrt at perfect squares
  NetworkGeometry geo;
  geo.n_requested = n;
  geo.side = side;
  geo.n = side * side;
  geo.truncated = geo.n != n;
  geo.nodes.reserve(static_cast<std::size_t>(geo.n));
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      geo.nodes.push_back({(c + 0.5) / side, (r + 0.5) / side});
    }
  }
  return geo;
}

NetworkGeometry uniform_nodes(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("uniform_nodes: n must be >= 1");
  NetworkGeometry geo;
  geo.n_requested = n;
  geo.n = n;
  geo.side = 0;
  geo.nodes.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = rng.next_double();
    double y = rng.next_double();
    geo.nodes.push_back({x, y});
  }
  return geo;
}

ClusterPartition partition_clusters(const NetworkGeometry& geo, double cluster_side) {
  if (!(cluster_side > 0.0 && cluster_side <= 1.0))
    throw std::invalid_argument("partition_clusters: cluster_side must be in (0,1]");
  ClusterPartition part;
  part.side = cluster_side;
  // 1/(1/k) can land just above k in floating point; the epsilon keeps exact
  // divisors from spawning an empty extra row
  int cells = static_cast<int>(std::ceil(1.0 / cluster_side - 1e-9));
  part.ncx = part.ncy = cells;
  part.cluster_of.resize(static_cast<std::size_t>(geo.n));
  part.members.assign(static_cast<std::size_t>(cells) * cells, {});
  for (int i = 0; i < geo.n; ++i) {
    int cx = static_cast<int>(geo.nodes[i].x / cluster_side);
    int cy = static_cast<int>(geo.nodes[i].y / cluster_side);
    if (cx >= cells) cx = cells - 1;
    if (cy >= cells) cy = cells - 1;
    int id = cy * cells + cx;
    part.cluster_of[i] = id;
    part.members[static_cast<std::size_t>(id)].push_back(i);
  }
  return part;
}

int reuse_factor(double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("reuse_factor: delta must be >= 0");
  int k = static_cast<int>(std::ceil(std::sqrt(2.0) * (1.0 + delta)));
  return (k + 1) * (k + 1);
}

std::vector<int> color_clusters(const ClusterPartition& part, int K) {
  int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(K))));
  if (s < 1 || s * s != K) throw std::invalid_argument("color_clusters: K must be a positive square");
  std::vector<int> colors(static_cast<std::size_t>(part.cluster_count()));
  for (int cy = 0; cy < part.ncy; ++cy) {
    for (int cx = 0; cx < part.ncx; ++cx) {
      colors[static_cast<std::size_t>(cy) * part.ncx + cx] = (cy % s) * s + (cx % s);
    }
  }
  return colors;
}

bool protocol_feasible(const std::vector<Node>& nodes,
                       const std::vector<std::array<int, 2>>& active, double r,
                       double delta) {
  if (!(r > 0.0) || !(delta >= 0.0))
    throw std::invalid_argument("protocol_feasible: need r > 0 and delta >= 0");
  auto d2 = [&](int a, int b) {
    double dx = nodes[a].x - nodes[b].x;
    double dy = nodes[a].y - nodes[b].y;
    return dx * dx + dy * dy;
  };
  double r2 = r * r;
  double guard2 = (1.0 + delta) * r * (1.0 + delta) * r;
  for (const auto& [tx, rx] : active) {
    if (d2(tx, rx) > r2) return false;
    for (const auto& [tx2, rx2] : active) {
      (void)rx2;
      if (tx2 == tx) continue;
      if (d2(tx2, rx) <= guard2) return false;
    }
  }
  return true;
}

std::string geometry_csv(const NetworkGeometry& geo, const ClusterPartition& part,
                         const std::vector<int>& colors) {
  CsvWriter w({"node_id", "x", "y", "cluster_id", "color"});
  for (int i = 0; i < geo.n; ++i) {
    int c = part.cluster_of[i];
    w.row({std::to_string(i), fmt_double(geo.nodes[i].x), fmt_double(geo.nodes[i].y),
           std::to_string(c), std::to_string(colors[static_cast<std::size_t>(c)])});
  }
  return w.str();
}

}  // namespace d2dsim
