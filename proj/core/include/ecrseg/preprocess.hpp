#ifndef ECRSEG_PREPROCESS_HPP
#define ECRSEG_PREPROCESS_HPP

#include "ecrseg/volume.hpp"

namespace ecrseg {

struct PreprocessParams {
  double lo_pct = 5.0;
  double hi_pct = 95.0;
  double sigma = 1.0;     // voxels
  double truncate = 3.0;  // kernel half-width = ceil(truncate * sigma)

  void validate() const;
};

/// Linear-interpolation quantile over all voxels: rank q/100*(n-1) between
/// adjacent order statistics.
double quantile(const std::vector<double>& values, double pct);

/// Clamps every voxel into [P_lo, P_hi] of the whole volume.
Volume percentile_clip(const Volume& v, double lo_pct, double hi_pct);

/// (x - min) / (max - min); all zeros when the volume is constant.
Volume normalize_unit(const Volume& v);

/// Separable sampled-Gaussian convolution, kernel normalized to sum 1,
/// half-sample symmetric reflection at the boundaries (edge repeated), which
/// keeps the global mean exact.
Volume gaussian_smooth(const Volume& v, double sigma, double truncate = 3.0);

/// clip -> normalize -> smooth
Volume preprocess(const Volume& v, const PreprocessParams& p = {});

}  // namespace ecrseg

#endif
