#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rb/vec3.hpp"

namespace rb {

// Static 3-d tree for exact nearest-neighbour queries. Built once, then
// read-only, so concurrent queries are safe.
class KdTree {
 public:
  explicit KdTree(std::span<const Vec3> points);

  struct Hit {
    std::size_t index = 0;
    double squared_distance = 0.0;
  };

  // Ties resolve toward the lower point index.
  Hit nearest(Vec3 query) const;

  std::size_t size() const noexcept { return points_.size(); }

 private:
  struct Node {
    // Leaf when left == -1; [begin, end) indexes order_.
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::uint8_t axis = 0;
    double split = 0.0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end, int depth);
  void search(std::int32_t node, Vec3 query, Hit& best) const;

  std::vector<Vec3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace rb
