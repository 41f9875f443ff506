#include "ecrseg/svm.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ecrseg/parallel.hpp"

namespace ecrseg {

using nlohmann::json;

void Standardizer::apply(std::vector<double>& row) const {
  for (std::size_t f = 0; f < row.size(); ++f) row[f] = apply_one(row[f], f);
}

double Standardizer::apply_one(double x, std::size_t feature) const {
  const double s = scale[feature];
  return (x - mean[feature]) / (s > 0.0 ? s : 1.0);
}

void TrainingSet::append(const TrainingSet& other) {
  if (feature_names.empty()) {
    feature_names = other.feature_names;
  } else if (feature_names != other.feature_names) {
    throw Error("TrainingSet::append: feature order differs");
  }
  const std::int32_t case_offset = std::int32_t(case_ids.size());
  case_ids.insert(case_ids.end(), other.case_ids.begin(), other.case_ids.end());
  samples.insert(samples.end(), other.samples.begin(), other.samples.end());
  labels.insert(labels.end(), other.labels.begin(), other.labels.end());
  provenance.reserve(provenance.size() + other.provenance.size());
  for (RowProvenance p : other.provenance) {
    p.case_index += case_offset;
    provenance.push_back(p);
  }
}

double SvmModel::decision(const double* raw_row) const {
  double acc = bias;
  for (std::size_t f = 0; f < weights.size(); ++f) {
    acc += weights[f] * standardizer.apply_one(raw_row[f], f);
  }
  return acc;
}

TrainingSet assemble_training_set(const FeatureMapStack& maps, const Mask& tooth,
                                  const Mask& lesion, int margin,
                                  const std::string& case_id) {
  if (maps.empty()) throw Error("assemble_training_set: empty feature stack");
  require_same_geometry(maps.geom(), tooth.geom, "assemble_training_set");
  require_same_geometry(maps.geom(), lesion.geom, "assemble_training_set");
  const Region region = lesion_bounding_region(lesion, margin);  // throws EmptyMask

  TrainingSet ts;
  ts.feature_names = maps.names;
  ts.case_ids = {case_id};
  std::vector<const double*> src(maps.maps.size());
  for (std::size_t k = 0; k < maps.maps.size(); ++k) src[k] = maps.maps[k].data.data();

  for (int z = region.lo[2]; z <= region.hi[2]; ++z)
    for (int y = region.lo[1]; y <= region.hi[1]; ++y)
      for (int x = region.lo[0]; x <= region.hi[0]; ++x) {
        const std::int64_t i = tooth.geom.index(x, y, z);
        if (!tooth.data[std::size_t(i)]) continue;
        for (std::size_t k = 0; k < src.size(); ++k) ts.samples.push_back(src[k][i]);
        ts.labels.push_back(lesion.data[std::size_t(i)] ? 1 : 0);
        ts.provenance.push_back({0, i});
      }
  return ts;
}

Standardizer fit_standardizer(const TrainingSet& ts) {
  const std::size_t n = ts.size(), d = ts.dim();
  if (n < 2) throw TooFewSamples("fit_standardizer: need at least 2 samples");
  Standardizer s;
  s.mean.assign(d, 0.0);
  s.scale.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = ts.row(i);
    for (std::size_t f = 0; f < d; ++f) s.mean[f] += row[f];
  }
  for (std::size_t f = 0; f < d; ++f) s.mean[f] /= double(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = ts.row(i);
    for (std::size_t f = 0; f < d; ++f) {
      const double dx = row[f] - s.mean[f];
      s.scale[f] += dx * dx;
    }
  }
  for (std::size_t f = 0; f < d; ++f) s.scale[f] = std::sqrt(s.scale[f] / double(n));
  return s;
}

namespace {

double svm_objective(const std::vector<double>& x, const std::vector<std::int8_t>& y,
                     std::size_t n, std::size_t d, const std::vector<double>& w, double b,
                     double c) {
  double obj = 0.0;
  for (std::size_t f = 0; f < d; ++f) obj += 0.5 * w[f] * w[f];
  double hinge = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = b;
    const double* row = x.data() + i * d;
    for (std::size_t k = 0; k < d; ++k) f += w[k] * row[k];
    const double m = 1.0 - double(y[i]) * f;
    if (m > 0.0) hinge += m;
  }
  return obj + c * hinge;
}

}  // namespace

SvmModel train_linear_svm(const TrainingSet& ts, double c, std::uint64_t seed,
                          SvmTrainInfo* info) {
  const std::size_t n = ts.size(), d = ts.dim();
  if (n < 2) throw TooFewSamples("train_linear_svm: need at least 2 samples");
  bool has_pos = false, has_neg = false;
  for (std::uint8_t l : ts.labels) (l ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) throw SingleClass("train_linear_svm: both classes required");
  for (double v : ts.samples) {
    if (!std::isfinite(v)) throw NonFiniteFeature("train_linear_svm: non-finite feature value");
  }

  SvmModel model;
  model.feature_names = ts.feature_names;
  model.c = c;
  model.seed = seed;
  model.standardizer = fit_standardizer(ts);

  // standardized copy
  std::vector<double> x(ts.samples);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < d; ++f) {
      x[i * d + f] = model.standardizer.apply_one(x[i * d + f], f);
    }
  }
  std::vector<std::int8_t> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = ts.labels[i] ? 1 : -1;

  std::vector<double> w(d, 0.0), gw(d), w_try(d);
  double b = 0.0;
  double obj = svm_objective(x, y, n, d, w, b, c);
  double step = 1.0 / double(n);

  const int max_epochs = 10000;
  const double rel_tol = 1e-6;
  SvmTrainInfo local;
  SvmTrainInfo& diag = info ? *info : local;
  diag.objective.clear();
  diag.converged = false;

  for (int epoch = 0; epoch < max_epochs; ++epoch) {
    // batch subgradient (margin exactly 1 contributes nothing, which keeps
    // the solver exactly antisymmetric under label flips)
    std::fill(gw.begin(), gw.end(), 0.0);
    double gb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double f = b;
      const double* row = x.data() + i * d;
      for (std::size_t k = 0; k < d; ++k) f += w[k] * row[k];
      if (double(y[i]) * f < 1.0) {
        for (std::size_t k = 0; k < d; ++k) gw[k] -= c * double(y[i]) * row[k];
        gb -= c * double(y[i]);
      }
    }
    for (std::size_t k = 0; k < d; ++k) gw[k] += w[k];

    // backtracking line search; accept only improving steps
    double eta = step * 2.0;
    double obj_try = obj;
    double b_try = b;
    bool accepted = false;
    while (eta >= 1e-16) {
      for (std::size_t k = 0; k < d; ++k) w_try[k] = w[k] - eta * gw[k];
      b_try = b - eta * gb;
      obj_try = svm_objective(x, y, n, d, w_try, b_try, c);
      if (obj_try < obj) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) {  // no descent along the subgradient; treat as converged
      diag.converged = true;
      break;
    }
    w = w_try;
    b = b_try;
    step = eta;
    diag.objective.push_back(obj_try);
    diag.epochs = epoch + 1;
    const double rel = (obj - obj_try) / std::max(std::abs(obj), 1e-300);
    obj = obj_try;
    if (rel < rel_tol) {
      diag.converged = true;
      break;
    }
  }

  model.weights = w;
  model.bias = b;
  return model;
}

Mask predict_mask(const SvmModel& model, const FeatureMapStack& maps, const Mask& tooth) {
  require_same_geometry(maps.geom(), tooth.geom, "predict_mask");
  std::vector<const double*> src(model.feature_names.size());
  for (std::size_t f = 0; f < model.feature_names.size(); ++f) {
    src[f] = maps.map(model.feature_names[f]).data.data();  // throws MissingFeatureMap
  }
  Mask out(tooth.geom);
  const std::int64_t nvox = tooth.geom.voxel_count();
  parallel_for(nvox, [&](std::int64_t begin, std::int64_t end) {
    std::vector<double> row(src.size());
    for (std::int64_t i = begin; i < end; ++i) {
      if (!tooth.data[std::size_t(i)]) continue;
      for (std::size_t f = 0; f < src.size(); ++f) row[f] = src[f][i];
      out.data[std::size_t(i)] = model.decision(row.data()) > 0.0;
    }
  });
  return out;
}

void save_model(const SvmModel& model, const std::filesystem::path& path) {
  json j;
  j["format"] = "ecrseg-svm-model";
  j["version"] = 1;
  j["feature_names"] = model.feature_names;
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["standardizer"] = {{"mean", model.standardizer.mean}, {"scale", model.standardizer.scale}};
  j["c"] = model.c;
  j["seed"] = model.seed;
  j["texture"] = {{"radius", model.texture.radius},
                  {"bins", model.texture.n_bins},
                  {"range", {model.texture.value_range.first, model.texture.value_range.second}}};
  std::ofstream out(path);
  if (!out) throw IoFailure("save_model: cannot open " + path.string());
  out << j.dump(2) << "\n";
}

SvmModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("load_model: cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw MalformedHeader("load_model: bad JSON in " + path.string() + ": " + e.what());
  }
  if (j.value("format", "") != "ecrseg-svm-model") {
    throw MalformedHeader("load_model: not an svm model file: " + path.string());
  }
  SvmModel m;
  m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  m.weights = j.at("weights").get<std::vector<double>>();
  m.bias = j.at("bias").get<double>();
  m.standardizer.mean = j.at("standardizer").at("mean").get<std::vector<double>>();
  m.standardizer.scale = j.at("standardizer").at("scale").get<std::vector<double>>();
  m.c = j.value("c", 1.0);
  m.seed = j.value("seed", std::uint64_t(0));
  if (j.contains("texture")) {
    m.texture.radius = j["texture"].value("radius", 5);
    m.texture.n_bins = j["texture"].value("bins", 16);
    if (j["texture"].contains("range")) {
      m.texture.value_range = {j["texture"]["range"][0].get<double>(),
                               j["texture"]["range"][1].get<double>()};
    }
  }
  if (m.weights.size() != m.feature_names.size() ||
      m.standardizer.mean.size() != m.feature_names.size() ||
      m.standardizer.scale.size() != m.feature_names.size()) {
    throw MalformedHeader("load_model: inconsistent dimensions in " + path.string());
  }
  return m;
}

}  // namespace ecrseg
