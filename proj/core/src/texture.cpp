#include "ecrseg/texture.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ecrseg/parallel.hpp"

namespace ecrseg {

const std::vector<Index3>& thirteen_directions() {
  static const std::vector<Index3> dirs = {
      {1, 0, 0},  {0, 1, 0},  {0, 0, 1},
      {1, 1, 0},  {1, -1, 0}, {1, 0, 1},  {1, 0, -1},
      {0, 1, 1},  {0, 1, -1},
      {1, 1, 1},  {1, 1, -1}, {1, -1, 1}, {1, -1, -1}};
  return dirs;
}

void TextureParams::validate() const {
  if (radius < 1) throw ConfigError("texture: radius must be >= 1");
  if (n_bins < 2) throw ConfigError("texture: n_bins must be >= 2");
  if (n_bins > 4096) throw ConfigError("texture: n_bins too large");
  if (!(value_range.first < value_range.second)) {
    throw DegenerateRange("texture: value_range must have min < max");
  }
  if (offsets.empty()) throw ConfigError("texture: offsets must be non-empty");
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const Index3& a = offsets[i];
    if (a[0] == 0 && a[1] == 0 && a[2] == 0) throw ConfigError("texture: zero offset");
    for (std::size_t j = i + 1; j < offsets.size(); ++j) {
      const Index3& b = offsets[j];
      if ((a[0] == -b[0] && a[1] == -b[1] && a[2] == -b[2]) ||
          (a[0] == b[0] && a[1] == b[1] && a[2] == b[2])) {
        throw ConfigError("texture: offsets must be pairwise distinct and non-antiparallel");
      }
    }
  }
}

QuantizedVolume quantize(const Volume& v, const Mask& mask, int n_bins,
                         std::pair<double, double> value_range) {
  require_same_geometry(v.geom, mask.geom, "quantize");
  const double mn = value_range.first, mx = value_range.second;
  if (mx == mn) throw DegenerateRange("quantize: value_range min == max");
  QuantizedVolume q;
  q.geom = v.geom;
  q.n_bins = n_bins;
  q.valid = mask;
  q.bins.resize(v.data.size());
  const double inv = 1.0 / (mx - mn);
  for (std::size_t i = 0; i < v.data.size(); ++i) {
    const double x = std::clamp(v.data[i], mn, mx);
    const int b = int(std::floor((x - mn) * inv * n_bins)) + 1;
    q.bins[i] = std::uint16_t(std::min(b, n_bins));
  }
  return q;
}

namespace {

struct Cube {
  Index3 lo, hi;
  bool contains(int x, int y, int z) const {
    return x >= lo[0] && x <= hi[0] && y >= lo[1] && y <= hi[1] && z >= lo[2] && z <= hi[2];
  }
};

Cube clipped_cube(const Geometry& g, Index3 center, int radius) {
  Cube c;
  for (int a = 0; a < 3; ++a) {
    c.lo[a] = std::max(center[a] - radius, 0);
    c.hi[a] = std::min(center[a] + radius, g.dims[a] - 1);
  }
  return c;
}

// Symmetric pair accumulation over one neighborhood. Counts land in m.p
// (normalized at the end); m must be sized for q.n_bins.
void glcm_fill(const QuantizedVolume& q, Index3 center, int radius,
               const std::vector<Index3>& offsets, GlcmMatrix& m) {
  std::fill(m.p.begin(), m.p.end(), 0.0);
  m.n_pairs = 0;
  const Cube cube = clipped_cube(q.geom, center, radius);
  const std::int64_t sx = 1;
  const std::int64_t sy = q.geom.dims[0];
  const std::int64_t sz = sy * q.geom.dims[1];
  const std::uint16_t* bins = q.bins.data();
  const std::uint8_t* valid = q.valid.data.data();
  const int n = m.n_bins;

  for (const Index3& d : offsets) {
    // box of voxels a with a and a+d both inside the cube
    Index3 blo, bhi;
    bool empty = false;
    for (int a = 0; a < 3; ++a) {
      blo[a] = std::max(cube.lo[a], cube.lo[a] - d[a]);
      bhi[a] = std::min(cube.hi[a], cube.hi[a] - d[a]);
      if (blo[a] > bhi[a]) empty = true;
    }
    if (empty) continue;
    const std::int64_t dstride = d[0] * sx + d[1] * sy + d[2] * sz;
    for (int z = blo[2]; z <= bhi[2]; ++z)
      for (int y = blo[1]; y <= bhi[1]; ++y) {
        std::int64_t idx = q.geom.index(blo[0], y, z);
        for (int x = blo[0]; x <= bhi[0]; ++x, ++idx) {
          const std::int64_t jdx = idx + dstride;
          if (!valid[idx] || !valid[jdx]) continue;
          const int bi = bins[idx] - 1;
          const int bj = bins[jdx] - 1;
          m.p[std::size_t(bi) * n + bj] += 1.0;
          m.p[std::size_t(bj) * n + bi] += 1.0;
          m.n_pairs += 2;
        }
      }
  }
  if (m.n_pairs > 0) {
    const double inv = 1.0 / double(m.n_pairs);
    for (double& v : m.p) v *= inv;
  }
}

// Maximal same-bin runs along every direction; in-neighborhood, in-mask
// segments only, counted once per direction.
void rlm_fill(const QuantizedVolume& q, Index3 center, int radius,
              const std::vector<Index3>& offsets, RlmMatrix& m) {
  std::fill(m.r.begin(), m.r.end(), 0);
  m.n_runs = 0;
  const Cube cube = clipped_cube(q.geom, center, radius);
  const std::int64_t sy = q.geom.dims[0];
  const std::int64_t sz = sy * q.geom.dims[1];
  const std::uint16_t* bins = q.bins.data();
  const std::uint8_t* valid = q.valid.data.data();

  for (const Index3& d : offsets) {
    const std::int64_t dstride = d[0] + d[1] * sy + d[2] * sz;
    for (int z = cube.lo[2]; z <= cube.hi[2]; ++z)
      for (int y = cube.lo[1]; y <= cube.hi[1]; ++y)
        for (int x = cube.lo[0]; x <= cube.hi[0]; ++x) {
          if (cube.contains(x - d[0], y - d[1], z - d[2])) continue;  // not a line start
          // length of the in-cube line from this start
          const int pos[3] = {x, y, z};
          int len = q.geom.dims[0] + q.geom.dims[1] + q.geom.dims[2];
          for (int a = 0; a < 3; ++a) {
            if (d[a] > 0) len = std::min(len, cube.hi[a] - pos[a] + 1);
            else if (d[a] < 0) len = std::min(len, pos[a] - cube.lo[a] + 1);
          }
          std::int64_t idx = q.geom.index(x, y, z);
          int run_bin = -1;
          int run_len = 0;
          for (int s = 0; s < len; ++s, idx += dstride) {
            if (valid[idx]) {
              const int b = bins[idx];
              if (b == run_bin) {
                ++run_len;
              } else {
                if (run_len > 0) { ++m.at(run_bin, run_len); ++m.n_runs; }
                run_bin = b;
                run_len = 1;
              }
            } else if (run_len > 0) {
              ++m.at(run_bin, run_len);
              ++m.n_runs;
              run_bin = -1;
              run_len = 0;
            }
          }
          if (run_len > 0) { ++m.at(run_bin, run_len); ++m.n_runs; }
        }
  }
}

void require_center_in_mask(const QuantizedVolume& q, Index3 center) {
  if (!q.geom.contains(center[0], center[1], center[2]) ||
      !q.valid.data[std::size_t(q.geom.index(center[0], center[1], center[2]))]) {
    throw CenterOutsideMask("texture: neighborhood center is outside the valid mask");
  }
}

}  // namespace

GlcmMatrix glcm_at(const QuantizedVolume& q, Index3 center, int radius,
                   const std::vector<Index3>& offsets) {
  require_center_in_mask(q, center);
  GlcmMatrix m(q.n_bins);
  glcm_fill(q, center, radius, offsets, m);
  return m;
}

RlmMatrix glrlm_at(const QuantizedVolume& q, Index3 center, int radius,
                   const std::vector<Index3>& offsets) {
  require_center_in_mask(q, center);
  RlmMatrix m(q.n_bins, 2 * radius + 1);
  rlm_fill(q, center, radius, offsets, m);
  return m;
}

GlcmFeatures glcm_features(const GlcmMatrix& m) {
  GlcmFeatures f;
  if (m.n_pairs == 0) return f;
  const int n = m.n_bins;

  std::vector<double> marginal(std::size_t(n), 0.0);
  for (int i = 1; i <= n; ++i) {
    double row = 0.0;
    for (int j = 1; j <= n; ++j) row += m.at(i, j);
    marginal[std::size_t(i - 1)] = row;
  }
  double mu = 0.0;
  for (int i = 1; i <= n; ++i) mu += i * marginal[std::size_t(i - 1)];
  double var = 0.0;
  for (int i = 1; i <= n; ++i) var += (i - mu) * (i - mu) * marginal[std::size_t(i - 1)];

  double corr_num = 0.0, ij_sum = 0.0;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      const double p = m.at(i, j);
      if (p == 0.0) continue;
      f.energy += p * p;
      f.entropy -= p * std::log2(p);
      const double dij = double(i - j);
      f.inverse_difference_moment += p / (1.0 + dij * dij);
      f.inertia += dij * dij * p;
      const double s = (i - mu) + (j - mu);
      f.cluster_shade += s * s * s * p;
      f.cluster_prominence += s * s * s * s * p;
      corr_num += (i - mu) * (j - mu) * p;
      ij_sum += double(i) * double(j) * p;
    }
  }
  if (var > 0.0) {
    f.correlation = corr_num / var;
    f.haralick_correlation = (ij_sum - mu * mu) / var;
  }
  return f;
}

GlrlmFeatures glrlm_features(const RlmMatrix& m) {
  GlrlmFeatures f;
  if (m.n_runs == 0) return f;
  const double inv_n = 1.0 / double(m.n_runs);

  std::vector<double> col(std::size_t(m.max_run), 0.0);
  for (int i = 1; i <= m.n_bins; ++i) {
    double row = 0.0;
    const double ii = double(i) * i;
    for (int j = 1; j <= m.max_run; ++j) {
      const double c = double(m.at(i, j));
      if (c == 0.0) continue;
      row += c;
      col[std::size_t(j - 1)] += c;
      const double jj = double(j) * j;
      f.sre += c / jj;
      f.lre += c * jj;
      f.lgre += c / ii;
      f.hgre += c * ii;
      f.srlge += c / (ii * jj);
      f.srhge += c * ii / jj;
      f.lrlge += c * jj / ii;
      f.lrhge += c * ii * jj;
    }
    f.gln += row * row;
  }
  for (double c : col) f.rln += c * c;

  f.sre *= inv_n;
  f.lre *= inv_n;
  f.gln *= inv_n;
  f.rln *= inv_n;
  f.lgre *= inv_n;
  f.hgre *= inv_n;
  f.srlge *= inv_n;
  f.srhge *= inv_n;
  f.lrlge *= inv_n;
  f.lrhge *= inv_n;
  return f;
}

// ---- name registry ----

const std::vector<std::string>& glcm_feature_names() {
  static const std::vector<std::string> names = {
      "energy", "entropy", "correlation", "idm",
      "inertia", "cluster_shade", "cluster_prominence", "haralick_correlation"};
  return names;
}

const std::vector<std::string>& glrlm_feature_names() {
  static const std::vector<std::string> names = {
      "sre", "lre", "gln", "rln", "lgre", "hgre", "srlge", "srhge", "lrlge", "lrhge"};
  return names;
}

std::vector<std::string> all_feature_names() {
  std::vector<std::string> all = glcm_feature_names();
  const auto& r = glrlm_feature_names();
  all.insert(all.end(), r.begin(), r.end());
  return all;
}

std::vector<std::string> default_feature_selection() { return {"lgre", "hgre"}; }

bool is_glcm_feature(const std::string& name) {
  const auto& g = glcm_feature_names();
  return std::find(g.begin(), g.end(), name) != g.end();
}

bool is_texture_feature(const std::string& name) {
  if (is_glcm_feature(name)) return true;
  const auto& r = glrlm_feature_names();
  return std::find(r.begin(), r.end(), name) != r.end();
}

double feature_value(const GlcmFeatures& g, const GlrlmFeatures& r, const std::string& name) {
  if (name == "energy") return g.energy;
  if (name == "entropy") return g.entropy;
  if (name == "correlation") return g.correlation;
  if (name == "idm") return g.inverse_difference_moment;
  if (name == "inertia") return g.inertia;
  if (name == "cluster_shade") return g.cluster_shade;
  if (name == "cluster_prominence") return g.cluster_prominence;
  if (name == "haralick_correlation") return g.haralick_correlation;
  if (name == "sre") return r.sre;
  if (name == "lre") return r.lre;
  if (name == "gln") return r.gln;
  if (name == "rln") return r.rln;
  if (name == "lgre") return r.lgre;
  if (name == "hgre") return r.hgre;
  if (name == "srlge") return r.srlge;
  if (name == "srhge") return r.srhge;
  if (name == "lrlge") return r.lrlge;
  if (name == "lrhge") return r.lrhge;
  throw Error("unknown texture feature '" + name + "'");
}

std::vector<std::string> parse_feature_selection(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    if (tok.empty()) continue;
    if (tok == "all") {
      for (const auto& n : all_feature_names()) out.push_back(n);
      continue;
    }
    if (!is_texture_feature(tok)) {
      throw ConfigError("unknown texture feature '" + tok + "'");
    }
    out.push_back(tok);
  }
  if (out.empty()) throw ConfigError("feature selection is empty");
  // drop duplicates, keep first occurrence
  std::vector<std::string> uniq;
  for (const auto& n : out) {
    if (std::find(uniq.begin(), uniq.end(), n) == uniq.end()) uniq.push_back(n);
  }
  return uniq;
}

const Volume& FeatureMapStack::map(const std::string& name) const {
  const Volume* v = find(name);
  if (!v) throw MissingFeatureMap("feature map '" + name + "' not present in stack");
  return *v;
}

const Volume* FeatureMapStack::find(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return &maps[i];
  }
  return nullptr;
}

const Geometry& FeatureMapStack::geom() const {
  if (maps.empty()) throw Error("feature map stack is empty");
  return maps.front().geom;
}

FeatureMapStack feature_maps(const Volume& v, const Mask& mask, const TextureParams& params,
                             const std::vector<std::string>& selection,
                             const Region* eval_region) {
  params.validate();
  require_same_geometry(v.geom, mask.geom, "feature_maps");
  bool want_glcm = false, want_rlm = false;
  for (const auto& name : selection) {
    if (!is_texture_feature(name)) throw ConfigError("unknown texture feature '" + name + "'");
    (is_glcm_feature(name) ? want_glcm : want_rlm) = true;
  }

  Region region = eval_region ? *eval_region : Region::full(v.geom.dims);
  if (!region.within(v.geom.dims)) {
    throw RegionOutOfBounds("feature_maps: eval region exceeds volume bounds");
  }

  const QuantizedVolume q = quantize(v, mask, params.n_bins, params.value_range);

  std::vector<std::int64_t> centers;
  for (int z = region.lo[2]; z <= region.hi[2]; ++z)
    for (int y = region.lo[1]; y <= region.hi[1]; ++y)
      for (int x = region.lo[0]; x <= region.hi[0]; ++x) {
        const std::int64_t i = v.geom.index(x, y, z);
        if (mask.data[std::size_t(i)]) centers.push_back(i);
      }

  FeatureMapStack stack;
  stack.names = selection;
  stack.maps.reserve(selection.size());
  for (std::size_t k = 0; k < selection.size(); ++k) stack.maps.emplace_back(v.geom, 0.0);

  std::vector<double*> out(selection.size());
  for (std::size_t k = 0; k < selection.size(); ++k) out[k] = stack.maps[k].data.data();

  parallel_for(std::int64_t(centers.size()), [&](std::int64_t begin, std::int64_t end) {
    GlcmMatrix gm(params.n_bins);
    RlmMatrix rm(params.n_bins, 2 * params.radius + 1);
    GlcmFeatures gf;
    GlrlmFeatures rf;
    for (std::int64_t c = begin; c < end; ++c) {
      const std::int64_t idx = centers[std::size_t(c)];
      const Index3 center = v.geom.unindex(idx);
      if (want_glcm) {
        glcm_fill(q, center, params.radius, params.offsets, gm);
        gf = glcm_features(gm);
      }
      if (want_rlm) {
        rlm_fill(q, center, params.radius, params.offsets, rm);
        rf = glrlm_features(rm);
      }
      for (std::size_t k = 0; k < selection.size(); ++k) {
        out[k][idx] = feature_value(gf, rf, selection[k]);
      }
    }
  });
  return stack;
}

}  // namespace ecrseg
