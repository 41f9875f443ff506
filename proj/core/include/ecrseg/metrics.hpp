#ifndef ECRSEG_METRICS_HPP
#define ECRSEG_METRICS_HPP

#include "ecrseg/volume.hpp"

namespace ecrseg {

/// 2|A∩B| / (|A|+|B|); both empty -> 1.0 by convention.
double dice(const Mask& a, const Mask& b);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

/// Per-class (lesion, background) precision and recall over the domain
/// voxels, averaged with weights proportional to each class's true voxel
/// count. A class with zero predicted positives contributes precision 0.
PrecisionRecall weighted_precision_recall(const Mask& pred, const Mask& truth,
                                          const Mask& domain);

}  // namespace ecrseg

#endif
