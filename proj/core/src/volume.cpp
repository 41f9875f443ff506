#include "ecrseg/volume.hpp"

#include <algorithm>
#include <string>

namespace ecrseg {

std::int64_t Mask::set_count() const {
  std::int64_t n = 0;
  for (std::uint8_t v : data) n += (v != 0);
  return n;
}

void require_same_geometry(const Geometry& a, const Geometry& b, const char* where) {
  if (!(a == b)) {
    throw GeometryMismatch(std::string(where) + ": grids do not share dims/spacing/origin");
  }
}

Region lesion_bounding_region(const Mask& lesion, int margin) {
  const Index3 d = lesion.geom.dims;
  Index3 lo = {d[0], d[1], d[2]};
  Index3 hi = {-1, -1, -1};
  std::int64_t i = 0;
  for (int z = 0; z < d[2]; ++z)
    for (int y = 0; y < d[1]; ++y)
      for (int x = 0; x < d[0]; ++x, ++i) {
        if (!lesion.data[std::size_t(i)]) continue;
        lo[0] = std::min(lo[0], x); hi[0] = std::max(hi[0], x);
        lo[1] = std::min(lo[1], y); hi[1] = std::max(hi[1], y);
        lo[2] = std::min(lo[2], z); hi[2] = std::max(hi[2], z);
      }
  if (hi[0] < 0) throw EmptyMask("lesion_bounding_region: mask has no set voxel");
  Region r;
  for (int a = 0; a < 3; ++a) {
    r.lo[a] = std::max(lo[a] - margin, 0);
    r.hi[a] = std::min(hi[a] + margin, d[a] - 1);
  }
  return r;
}

namespace {

template <typename Grid>
Grid crop_grid(const Grid& g, const Region& r) {
  if (!r.within(g.geom.dims)) {
    throw RegionOutOfBounds("crop: region exceeds grid bounds");
  }
  Geometry out_geom;
  out_geom.dims = r.extent();
  out_geom.spacing = g.geom.spacing;
  for (int a = 0; a < 3; ++a) {
    out_geom.origin[a] = g.geom.origin[a] + r.lo[a] * g.geom.spacing;
  }
  Grid out(out_geom);
  std::int64_t o = 0;
  for (int z = r.lo[2]; z <= r.hi[2]; ++z)
    for (int y = r.lo[1]; y <= r.hi[1]; ++y) {
      const std::int64_t row = g.geom.index(r.lo[0], y, z);
      for (int x = 0; x < out_geom.dims[0]; ++x, ++o) {
        out.data[std::size_t(o)] = g.data[std::size_t(row + x)];
      }
    }
  return out;
}

}  // namespace

Volume crop(const Volume& v, const Region& r) { return crop_grid(v, r); }
Mask crop(const Mask& m, const Region& r) { return crop_grid(m, r); }

}  // namespace ecrseg
