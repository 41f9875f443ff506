#ifndef ECRSEG_TEXTURE_HPP
#define ECRSEG_TEXTURE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ecrseg/volume.hpp"

namespace ecrseg {

/// The 13 unique 3-D directions (one per axis/diagonal class, no
/// antiparallel duplicates), shared by co-occurrence and run-length passes.
const std::vector<Index3>& thirteen_directions();

struct TextureParams {
  int radius = 5;  // cubic neighborhood of side 2r+1
  int n_bins = 16;
  std::pair<double, double> value_range = {0.0, 1.0};
  std::vector<Index3> offsets = thirteen_directions();

  void validate() const;
};

/// Gray levels discretized to 1-based bins inside the valid mask.
struct QuantizedVolume {
  Geometry geom;
  int n_bins = 0;
  std::vector<std::uint16_t> bins;  // 1..n_bins
  Mask valid;
};

/// bin = min(n_bins, floor((x - min)/(max - min) * n_bins) + 1), values
/// clamped into the range first; x == max maps to n_bins.
QuantizedVolume quantize(const Volume& v, const Mask& mask, int n_bins,
                         std::pair<double, double> value_range);

/// Symmetric normalized co-occurrence table for one neighborhood.
struct GlcmMatrix {
  int n_bins = 0;
  std::vector<double> p;       // n_bins x n_bins, row-major, 1-based accessors
  std::int64_t n_pairs = 0;    // total accumulated count (the normalizer)

  explicit GlcmMatrix(int bins = 0) : n_bins(bins), p(std::size_t(bins) * bins, 0.0) {}
  double at(int i, int j) const { return p[std::size_t(i - 1) * n_bins + (j - 1)]; }
  double& at(int i, int j) { return p[std::size_t(i - 1) * n_bins + (j - 1)]; }
};

/// Run-length counts: r(i,j) = maximal runs of level i with length j voxels.
struct RlmMatrix {
  int n_bins = 0;
  int max_run = 0;  // 2*radius + 1
  std::vector<std::int64_t> r;
  std::int64_t n_runs = 0;

  RlmMatrix(int bins = 0, int max_run_len = 0)
      : n_bins(bins), max_run(max_run_len), r(std::size_t(bins) * max_run_len, 0) {}
  std::int64_t at(int i, int j) const { return r[std::size_t(i - 1) * max_run + (j - 1)]; }
  std::int64_t& at(int i, int j) { return r[std::size_t(i - 1) * max_run + (j - 1)]; }
};

GlcmMatrix glcm_at(const QuantizedVolume& q, Index3 center, int radius,
                   const std::vector<Index3>& offsets);
RlmMatrix glrlm_at(const QuantizedVolume& q, Index3 center, int radius,
                   const std::vector<Index3>& offsets);

struct GlcmFeatures {
  double energy = 0, entropy = 0, correlation = 0, inverse_difference_moment = 0,
         inertia = 0, cluster_shade = 0, cluster_prominence = 0, haralick_correlation = 0;
};

struct GlrlmFeatures {
  double sre = 0, lre = 0, gln = 0, rln = 0, lgre = 0, hgre = 0, srlge = 0, srhge = 0,
         lrlge = 0, lrhge = 0;
};

/// All eight co-occurrence statistics; zero-pair neighborhoods and zero
/// marginal variance give 0 for every affected feature.
GlcmFeatures glcm_features(const GlcmMatrix& m);

/// All ten run statistics; zero runs give all zeros.
GlrlmFeatures glrlm_features(const RlmMatrix& m);

// ---- feature name registry ----
const std::vector<std::string>& glcm_feature_names();   // 8 names
const std::vector<std::string>& glrlm_feature_names();  // 10 names
std::vector<std::string> all_feature_names();           // 18 names
std::vector<std::string> default_feature_selection();   // {lgre, hgre}
bool is_glcm_feature(const std::string& name);
bool is_texture_feature(const std::string& name);
double feature_value(const GlcmFeatures& g, const GlrlmFeatures& r, const std::string& name);
/// Splits "lgre,hgre" and validates every token.
std::vector<std::string> parse_feature_selection(const std::string& csv);

/// One volume per feature, all sharing the source geometry.
struct FeatureMapStack {
  std::vector<std::string> names;
  std::vector<Volume> maps;

  const Volume& map(const std::string& name) const;  // throws MissingFeatureMap
  const Volume* find(const std::string& name) const;
  bool empty() const { return maps.empty(); }
  const Geometry& geom() const;
};

/// Evaluates the selected features at every in-mask voxel (restricted to
/// eval_region when given; neighborhoods still read the full volume).
/// Unevaluated voxels hold 0.
FeatureMapStack feature_maps(const Volume& v, const Mask& mask, const TextureParams& params,
                             const std::vector<std::string>& selection = default_feature_selection(),
                             const Region* eval_region = nullptr);

}  // namespace ecrseg

#endif
