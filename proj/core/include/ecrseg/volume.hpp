#ifndef ECRSEG_VOLUME_HPP
#define ECRSEG_VOLUME_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "ecrseg/errors.hpp"

namespace ecrseg {

using Index3 = std::array<int, 3>;

/// Shared grid description for volumes and masks. Spacing is isotropic,
/// in mm per voxel; the scanner default is 0.076 mm (76 um).
struct Geometry {
  Index3 dims{0, 0, 0};
  double spacing = 0.076;
  std::array<double, 3> origin{0.0, 0.0, 0.0};

  std::int64_t voxel_count() const {
    return std::int64_t(dims[0]) * dims[1] * dims[2];
  }
  bool contains(int x, int y, int z) const {
    return x >= 0 && x < dims[0] && y >= 0 && y < dims[1] && z >= 0 && z < dims[2];
  }
  // x-fastest linearization; fixed so component tie-breaking is reproducible
  std::int64_t index(int x, int y, int z) const {
    return x + std::int64_t(dims[0]) * (y + std::int64_t(dims[1]) * z);
  }
  Index3 unindex(std::int64_t i) const {
    const int x = int(i % dims[0]);
    const std::int64_t r = i / dims[0];
    return {x, int(r % dims[1]), int(r / dims[1])};
  }
  bool operator==(const Geometry&) const = default;
};

/// Inclusive axis-aligned voxel box.
struct Region {
  Index3 lo{0, 0, 0};
  Index3 hi{0, 0, 0};

  Index3 extent() const {
    return {hi[0] - lo[0] + 1, hi[1] - lo[1] + 1, hi[2] - lo[2] + 1};
  }
  std::int64_t voxel_count() const {
    const Index3 e = extent();
    return std::int64_t(e[0]) * e[1] * e[2];
  }
  bool contains(int x, int y, int z) const {
    return x >= lo[0] && x <= hi[0] && y >= lo[1] && y <= hi[1] && z >= lo[2] && z <= hi[2];
  }
  bool within(const Index3& dims) const {
    for (int a = 0; a < 3; ++a)
      if (lo[a] < 0 || hi[a] >= dims[a] || lo[a] > hi[a]) return false;
    return true;
  }
  static Region full(const Index3& dims) {
    return Region{{0, 0, 0}, {dims[0] - 1, dims[1] - 1, dims[2] - 1}};
  }
  bool operator==(const Region&) const = default;
};

/// 3-D scalar grid, 64-bit values, x-fastest layout. Immutable by
/// convention once built; concurrent reads are safe.
struct Volume {
  Geometry geom;
  std::vector<double> data;

  Volume() = default;
  Volume(Geometry g, double fill = 0.0)
      : geom(g), data(std::size_t(g.voxel_count()), fill) {}

  double& at(int x, int y, int z) { return data[std::size_t(geom.index(x, y, z))]; }
  double at(int x, int y, int z) const { return data[std::size_t(geom.index(x, y, z))]; }

  bool operator==(const Volume&) const = default;
};

/// Binary grid aligned with a companion Volume; voxels are 0 or 1.
struct Mask {
  Geometry geom;
  std::vector<std::uint8_t> data;

  Mask() = default;
  Mask(Geometry g, std::uint8_t fill = 0)
      : geom(g), data(std::size_t(g.voxel_count()), fill) {}

  std::uint8_t& at(int x, int y, int z) { return data[std::size_t(geom.index(x, y, z))]; }
  std::uint8_t at(int x, int y, int z) const { return data[std::size_t(geom.index(x, y, z))]; }

  std::int64_t set_count() const;

  bool operator==(const Mask&) const = default;
};

/// Throws GeometryMismatch unless the two grids agree exactly.
void require_same_geometry(const Geometry& a, const Geometry& b, const char* where);

/// Componentwise min/max box of set voxels, expanded by `margin` on all six
/// faces and clamped to the mask bounds. Throws EmptyMask.
Region lesion_bounding_region(const Mask& lesion, int margin);

Volume crop(const Volume& v, const Region& r);
Mask crop(const Mask& m, const Region& r);

}  // namespace ecrseg

#endif
