#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "lightcone/errors.hpp"

namespace lightcone {

/// Subdivided icosahedron reprojected to the unit sphere. Triangles keep a
/// consistent outward (counterclockwise from outside) orientation.
struct SphereMesh {
  int level = 0;
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<int, 2>> edges;  // unique pairs, first < second

  int euler_characteristic() const {
    return static_cast<int>(vertices.size()) - static_cast<int>(edges.size()) +
           static_cast<int>(triangles.size());
  }

  std::vector<std::vector<int>> vertex_neighbors() const {
    std::vector<std::vector<int>> nbr(vertices.size());
    for (const auto& e : edges) {
      nbr[e[0]].push_back(e[1]);
      nbr[e[1]].push_back(e[0]);
    }
    return nbr;
  }
};

inline SphereMesh build_icosphere(int level) {
  if (level < 0 || level > 8) throw LevelOutOfRange(level);

  SphereMesh m;
  m.level = level;
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  const double raw[12][3] = {{-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0},
                             {0, -1, t}, {0, 1, t},   {0, -1, -t}, {0, 1, -t},
                             {t, 0, -1}, {t, 0, 1},   {-t, 0, -1}, {-t, 0, 1}};
  for (const auto& v : raw)
    m.vertices.push_back(Eigen::Vector3d(v[0], v[1], v[2]).normalized());
  m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                 {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                 {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                 {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int pass = 0; pass < level; ++pass) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int idx = static_cast<int>(m.vertices.size());
      m.vertices.push_back((m.vertices[a] + m.vertices[b]).normalized());
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(m.triangles.size() * 4);
    for (const auto& tr : m.triangles) {
      const int a = tr[0], b = tr[1], c = tr[2];
      const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      next.push_back({a, ab, ca});
      next.push_back({b, bc, ab});
      next.push_back({c, ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.triangles = std::move(next);
  }

  std::map<std::pair<int, int>, bool> seen;
  for (const auto& tr : m.triangles)
    for (int i = 0; i < 3; ++i) {
      const auto key = std::minmax(tr[i], tr[(i + 1) % 3]);
      if (!seen.emplace(key, true).second) continue;
      m.edges.push_back({key.first, key.second});
    }
  return m;
}

}  // namespace lightcone
