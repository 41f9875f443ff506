#include "ecrseg/morphology.hpp"

#include <algorithm>
#include <numeric>

#include "ecrseg/parallel.hpp"

namespace ecrseg {

StructuringElement StructuringElement::cube(int k) {
  if (k < 1) throw ConfigError("structuring element size must be >= 1");
  const int lo = -(k / 2);
  const int hi = k - 1 - (k / 2);
  StructuringElement se;
  se.name = "cube" + std::to_string(k);
  se.offsets.reserve(std::size_t(k) * k * k);
  for (int z = lo; z <= hi; ++z)
    for (int y = lo; y <= hi; ++y)
      for (int x = lo; x <= hi; ++x) se.offsets.push_back({x, y, z});
  return se;
}

StructuringElement StructuringElement::reflected() const {
  StructuringElement se;
  se.name = name + "_reflected";
  se.offsets.reserve(offsets.size());
  for (const Index3& o : offsets) se.offsets.push_back({-o[0], -o[1], -o[2]});
  return se;
}

Mask erode(const Mask& m, const StructuringElement& se) {
  if (se.offsets.empty()) throw ConfigError("erode: empty structuring element");
  const Index3 d = m.geom.dims;
  Mask out(m.geom);
  parallel_for(d[2], [&](std::int64_t zb, std::int64_t ze) {
    for (int z = int(zb); z < int(ze); ++z)
      for (int y = 0; y < d[1]; ++y)
        for (int x = 0; x < d[0]; ++x) {
          bool keep = true;
          for (const Index3& o : se.offsets) {
            const int px = x + o[0], py = y + o[1], pz = z + o[2];
            if (!m.geom.contains(px, py, pz) || !m.at(px, py, pz)) {
              keep = false;
              break;
            }
          }
          out.at(x, y, z) = keep;
        }
  });
  return out;
}

Mask dilate(const Mask& m, const StructuringElement& se) {
  if (se.offsets.empty()) throw ConfigError("dilate: empty structuring element");
  const Index3 d = m.geom.dims;
  Mask out(m.geom);
  parallel_for(d[2], [&](std::int64_t zb, std::int64_t ze) {
    for (int z = int(zb); z < int(ze); ++z)
      for (int y = 0; y < d[1]; ++y)
        for (int x = 0; x < d[0]; ++x) {
          bool hit = false;
          for (const Index3& o : se.offsets) {
            const int px = x - o[0], py = y - o[1], pz = z - o[2];
            if (m.geom.contains(px, py, pz) && m.at(px, py, pz)) {
              hit = true;
              break;
            }
          }
          out.at(x, y, z) = hit;
        }
  });
  return out;
}

namespace {

// union-find with path halving
struct DisjointSet {
  std::vector<std::int32_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::int32_t find(std::int32_t i) {
    while (parent[std::size_t(i)] != i) {
      parent[std::size_t(i)] = parent[std::size_t(parent[std::size_t(i)])];
      i = parent[std::size_t(i)];
    }
    return i;
  }
  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::size_t(std::max(a, b))] = std::min(a, b);
  }
};

}  // namespace

Mask largest_connected_component(const Mask& m) {
  const Index3 d = m.geom.dims;
  Mask out(m.geom);

  // dense provisional labels for set voxels, single raster pass over the
  // 13 already-visited 26-neighbors
  std::vector<std::int32_t> label(m.data.size(), -1);
  std::int32_t next = 0;
  for (std::size_t i = 0; i < m.data.size(); ++i) {
    if (m.data[i]) label[i] = next++;
  }
  if (next == 0) return out;  // empty input stays empty

  DisjointSet ds(std::size_t(next));
  std::int64_t i = 0;
  for (int z = 0; z < d[2]; ++z)
    for (int y = 0; y < d[1]; ++y)
      for (int x = 0; x < d[0]; ++x, ++i) {
        if (!m.data[std::size_t(i)]) continue;
        for (int dz = -1; dz <= 0; ++dz)
          for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
              if (dz == 0 && (dy > 0 || (dy == 0 && dx >= 0))) continue;
              const int px = x + dx, py = y + dy, pz = z + dz;
              if (!m.geom.contains(px, py, pz)) continue;
              const std::int64_t j = m.geom.index(px, py, pz);
              if (m.data[std::size_t(j)]) {
                ds.unite(label[std::size_t(i)], label[std::size_t(j)]);
              }
            }
      }

  // per-root count and smallest linear index
  std::vector<std::int64_t> count(std::size_t(next), 0);
  std::vector<std::int64_t> min_index(std::size_t(next), -1);
  for (std::size_t v = 0; v < m.data.size(); ++v) {
    if (!m.data[v]) continue;
    const std::int32_t root = ds.find(label[v]);
    ++count[std::size_t(root)];
    if (min_index[std::size_t(root)] < 0) min_index[std::size_t(root)] = std::int64_t(v);
  }
  std::int32_t best = -1;
  for (std::int32_t r = 0; r < next; ++r) {
    if (count[std::size_t(r)] == 0) continue;
    if (best < 0 || count[std::size_t(r)] > count[std::size_t(best)] ||
        (count[std::size_t(r)] == count[std::size_t(best)] &&
         min_index[std::size_t(r)] < min_index[std::size_t(best)])) {
      best = r;
    }
  }
  for (std::size_t v = 0; v < m.data.size(); ++v) {
    if (m.data[v] && ds.find(label[v]) == best) out.data[v] = 1;
  }
  return out;
}

PostprocessResult postprocess(const Mask& raw, const StructuringElement& se) {
  PostprocessResult res;
  const Mask eroded = erode(raw, se);
  if (eroded.set_count() == 0) {
    res.mask = largest_connected_component(raw);
    res.degraded = true;
    return res;
  }
  res.mask = dilate(largest_connected_component(eroded), se);
  return res;
}

}  // namespace ecrseg
