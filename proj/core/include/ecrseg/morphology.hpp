#ifndef ECRSEG_MORPHOLOGY_HPP
#define ECRSEG_MORPHOLOGY_HPP

#include <string>
#include <vector>

#include "ecrseg/volume.hpp"

namespace ecrseg {

struct StructuringElement {
  std::vector<Index3> offsets;
  std::string name;

  /// k-wide cubic element: offsets in [-floor(k/2) .. k-1-floor(k/2)]^3.
  /// Even k gives the asymmetric span, e.g. cube6 = [-3..2]^3.
  static StructuringElement cube(int k);

  StructuringElement reflected() const;
};

/// Voxel v survives iff every v+o is in-bounds and set (out-of-bounds is
/// background, so boundary voxels erode away).
Mask erode(const Mask& m, const StructuringElement& se);

/// Adjoint of erode: voxel w set iff some in-bounds w-o is set.
Mask dilate(const Mask& m, const StructuringElement& se);

/// Keeps the 26-connected component with the most voxels; ties go to the
/// component containing the smallest linear index. Empty input stays empty.
Mask largest_connected_component(const Mask& m);

struct PostprocessResult {
  Mask mask;
  bool degraded = false;  // erosion emptied the mask; fell back to plain LCC
};

/// erode -> largest component -> dilate with the same element; if erosion
/// empties the mask the result is largest_connected_component(raw) and the
/// degraded flag is set.
PostprocessResult postprocess(const Mask& raw, const StructuringElement& se = StructuringElement::cube(6));

}  // namespace ecrseg

#endif
