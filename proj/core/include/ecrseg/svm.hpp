#ifndef ECRSEG_SVM_HPP
#define ECRSEG_SVM_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ecrseg/texture.hpp"
#include "ecrseg/volume.hpp"

namespace ecrseg {

/// Per-feature mean and population standard deviation; zero scales are
/// applied as 1 so constant columns standardize to zero.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  std::size_t dim() const { return mean.size(); }
  void apply(std::vector<double>& row) const;
  double apply_one(double x, std::size_t feature) const;
};

struct RowProvenance {
  std::int32_t case_index = 0;
  std::int64_t voxel = 0;
};

struct TrainingSet {
  std::vector<std::string> feature_names;
  std::vector<double> samples;  // n x d, row-major
  std::vector<std::uint8_t> labels;  // 1 = lesion, 0 = healthy
  std::vector<RowProvenance> provenance;
  std::vector<std::string> case_ids;  // indexed by RowProvenance::case_index

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return feature_names.size(); }
  const double* row(std::size_t i) const { return samples.data() + i * dim(); }

  /// Appends another set with the same feature order.
  void append(const TrainingSet& other);
};

struct SvmModel {
  std::vector<std::string> feature_names;
  std::vector<double> weights;
  double bias = 0.0;
  Standardizer standardizer;
  double c = 1.0;
  std::uint64_t seed = 0;
  TextureParams texture;  // extraction settings the model expects

  double decision(const double* raw_row) const;
};

struct SvmTrainInfo {
  std::vector<double> objective;  // one entry per accepted epoch
  int epochs = 0;
  bool converged = false;
};

/// Rows = every voxel of (lesion bbox + margin) ∩ tooth, label = lesion
/// membership, features in stack order.
TrainingSet assemble_training_set(const FeatureMapStack& maps, const Mask& tooth,
                                  const Mask& lesion, int margin = 5,
                                  const std::string& case_id = "case");

Standardizer fit_standardizer(const TrainingSet& ts);

/// Minimizes 0.5*||w||^2 + c * sum hinge(1 - y*(w.x+b)) on standardized
/// features by batch subgradient descent with a backtracking line search;
/// only improving steps are accepted, so the recorded objective is
/// non-increasing. Deterministic regardless of seed (kept for the model
/// record). Stops at relative objective change < 1e-6 or 10^4 epochs.
SvmModel train_linear_svm(const TrainingSet& ts, double c = 1.0, std::uint64_t seed = 0,
                          SvmTrainInfo* info = nullptr);

/// Lesion iff in tooth mask and decision > 0 (exact zero is background).
Mask predict_mask(const SvmModel& model, const FeatureMapStack& maps, const Mask& tooth);

void save_model(const SvmModel& model, const std::filesystem::path& path);
SvmModel load_model(const std::filesystem::path& path);

}  // namespace ecrseg

#endif
