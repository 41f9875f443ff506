#include "ecrseg/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "ecrseg/parallel.hpp"

namespace ecrseg {

void PreprocessParams::validate() const {
  if (!(0.0 <= lo_pct && lo_pct < hi_pct && hi_pct <= 100.0)) {
    throw ConfigError("preprocess: need 0 <= lo_pct < hi_pct <= 100");
  }
  if (!(sigma > 0.0)) throw ConfigError("preprocess: sigma must be positive");
}

double quantile(const std::vector<double>& values, double pct) {
  std::vector<double> s(values);
  std::sort(s.begin(), s.end());
  const double rank = pct / 100.0 * double(s.size() - 1);
  const std::size_t lo = std::size_t(std::floor(rank));
  const double frac = rank - double(lo);
  if (lo + 1 >= s.size()) return s.back();
  return s[lo] + frac * (s[lo + 1] - s[lo]);
}

Volume percentile_clip(const Volume& v, double lo_pct, double hi_pct) {
  const double p_lo = quantile(v.data, lo_pct);
  const double p_hi = quantile(v.data, hi_pct);
  Volume out(v.geom);
  for (std::size_t i = 0; i < v.data.size(); ++i) {
    out.data[i] = std::clamp(v.data[i], p_lo, p_hi);
  }
  return out;
}

Volume normalize_unit(const Volume& v) {
  const auto [mn_it, mx_it] = std::minmax_element(v.data.begin(), v.data.end());
  const double mn = *mn_it, mx = *mx_it;
  Volume out(v.geom);
  if (mx == mn) return out;  // all zeros
  const double inv = 1.0 / (mx - mn);
  for (std::size_t i = 0; i < v.data.size(); ++i) {
    out.data[i] = (v.data[i] - mn) * inv;
  }
  return out;
}

namespace {

std::vector<double> gaussian_kernel(double sigma, double truncate) {
  const int h = int(std::ceil(truncate * sigma));
  std::vector<double> k(std::size_t(2 * h + 1));
  double sum = 0.0;
  for (int i = -h; i <= h; ++i) {
    const double w = std::exp(-0.5 * double(i) * double(i) / (sigma * sigma));
    k[std::size_t(i + h)] = w;
    sum += w;
  }
  for (double& w : k) w /= sum;
  return k;
}

// half-sample symmetric reflection: ..., 1, 0 | 0, 1, ..., n-1 | n-1, n-2, ...
int reflect(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -1 - i;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

// one separable pass along `axis`; lines are independent, so this splits
// across workers by line without affecting the result
void axis_pass(const Volume& in, Volume& out, int axis, const std::vector<double>& kernel) {
  const Index3 d = in.geom.dims;
  const int h = int(kernel.size() / 2);
  const int n = d[axis];

  // stride along the axis and the two perpendicular extents
  const std::int64_t sx = 1, sy = d[0], sz = std::int64_t(d[0]) * d[1];
  const std::int64_t stride = (axis == 0) ? sx : (axis == 1) ? sy : sz;
  const int pa = (axis == 0) ? 1 : 0;
  const int pb = (axis == 2) ? 1 : 2;
  const std::int64_t stride_a = (pa == 0) ? sx : (pa == 1) ? sy : sz;
  const std::int64_t stride_b = (pb == 1) ? sy : sz;
  const std::int64_t lines = std::int64_t(d[pa]) * d[pb];

  parallel_for(lines, [&](std::int64_t lbegin, std::int64_t lend) {
    std::vector<double> buf(std::size_t(n));
    for (std::int64_t l = lbegin; l < lend; ++l) {
      const std::int64_t ia = l % d[pa];
      const std::int64_t ib = l / d[pa];
      const std::int64_t base = ia * stride_a + ib * stride_b;
      for (int i = 0; i < n; ++i) buf[std::size_t(i)] = in.data[std::size_t(base + i * stride)];
      for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = -h; j <= h; ++j) {
          acc += kernel[std::size_t(j + h)] * buf[std::size_t(reflect(i + j, n))];
        }
        out.data[std::size_t(base + i * stride)] = acc;
      }
    }
  });
}

}  // namespace

Volume gaussian_smooth(const Volume& v, double sigma, double truncate) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian_smooth: sigma must be positive");
  const std::vector<double> kernel = gaussian_kernel(sigma, truncate);
  Volume a = v, b(v.geom);
  for (int axis = 0; axis < 3; ++axis) {
    axis_pass(a, b, axis, kernel);
    std::swap(a, b);
  }
  return a;
}

Volume preprocess(const Volume& v, const PreprocessParams& p) {
  p.validate();
  return gaussian_smooth(normalize_unit(percentile_clip(v, p.lo_pct, p.hi_pct)), p.sigma,
                         p.truncate);
}

}  // namespace ecrseg
