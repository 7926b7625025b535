#include "rb/kdtree.hpp"

#include <algorithm>
#include <limits>

#include "rb/error.hpp"

namespace rb {

namespace {
constexpr std::uint32_t kLeafSize = 8;
}

KdTree::KdTree(std::span<const Vec3> points) : points_(points.begin(), points.end()) {
  if (points_.empty()) fail("empty point cloud");
  order_.resize(points_.size());
  for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
  nodes_.reserve(2 * points_.size() / kLeafSize + 1);
  build(0, static_cast<std::uint32_t>(order_.size()), 0);
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end, int depth) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({});
  nodes_[id].begin = begin;
  nodes_[id].end = end;
  if (end - begin <= kLeafSize) return id;

  // Split the widest axis at the median.
  Vec3 lo = points_[order_[begin]];
  Vec3 hi = lo;
  for (std::uint32_t i = begin; i < end; ++i) {
    const Vec3 p = points_[order_[i]];
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  int axis = 0;
  for (int a = 1; a < 3; ++a) {
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
  }
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t l, std::uint32_t r) { return points_[l][axis] < points_[r][axis]; });
  const double split = points_[order_[mid]][axis];
  const std::int32_t left = build(begin, mid, depth + 1);
  const std::int32_t right = build(mid, end, depth + 1);
  nodes_[id].left = left;
  nodes_[id].right = right;
  nodes_[id].axis = static_cast<std::uint8_t>(axis);
  nodes_[id].split = split;
  return id;
}

void KdTree::search(std::int32_t node_id, Vec3 query, Hit& best) const {
  const Node& node = nodes_[node_id];
  if (node.left < 0) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const std::uint32_t idx = order_[i];
      const double d = squared_distance(query, points_[idx]);
      if (d < best.squared_distance || (d == best.squared_distance && idx < best.index)) {
        best = {idx, d};
      }
    }
    return;
  }
  // Left holds coordinates <= split, right >= split.
  const double delta = query[node.axis] - node.split;
  const std::int32_t near = delta < 0.0 ? node.left : node.right;
  const std::int32_t far = delta < 0.0 ? node.right : node.left;
  search(near, query, best);
  if (delta * delta <= best.squared_distance) search(far, query, best);
}

KdTree::Hit KdTree::nearest(Vec3 query) const {
  Hit best{std::numeric_limits<std::size_t>::max(), std::numeric_limits<double>::infinity()};
  search(0, query, best);
  return best;
}

}  // namespace rb
