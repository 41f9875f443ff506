#include "ecrseg/metrics.hpp"

namespace ecrseg {

double dice(const Mask& a, const Mask& b) {
  require_same_geometry(a.geom, b.geom, "dice");
  std::int64_t na = 0, nb = 0, overlap = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const bool va = a.data[i] != 0, vb = b.data[i] != 0;
    na += va;
    nb += vb;
    overlap += (va && vb);
  }
  if (na + nb == 0) return 1.0;
  return 2.0 * double(overlap) / double(na + nb);
}

PrecisionRecall weighted_precision_recall(const Mask& pred, const Mask& truth,
                                          const Mask& domain) {
  require_same_geometry(pred.geom, truth.geom, "weighted_precision_recall");
  require_same_geometry(pred.geom, domain.geom, "weighted_precision_recall");
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < domain.data.size(); ++i) {
    if (!domain.data[i]) continue;
    const bool p = pred.data[i] != 0, t = truth.data[i] != 0;
    if (p && t) ++tp;
    else if (p && !t) ++fp;
    else if (!p && t) ++fn;
    else ++tn;
  }
  const std::int64_t total = tp + fp + fn + tn;
  PrecisionRecall pr;
  if (total == 0) return pr;

  const double support_lesion = double(tp + fn);
  const double support_bg = double(tn + fp);
  const double p_lesion = (tp + fp) > 0 ? double(tp) / double(tp + fp) : 0.0;
  const double r_lesion = (tp + fn) > 0 ? double(tp) / double(tp + fn) : 0.0;
  const double p_bg = (tn + fn) > 0 ? double(tn) / double(tn + fn) : 0.0;
  const double r_bg = (tn + fp) > 0 ? double(tn) / double(tn + fp) : 0.0;

  pr.precision = (support_lesion * p_lesion + support_bg * p_bg) / double(total);
  pr.recall = (support_lesion * r_lesion + support_bg * r_bg) / double(total);
  return pr;
}

}  // namespace ecrseg
