#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "immunoscan/error.hpp"
#include "immunoscan/panel.hpp"

namespace immunoscan {

/// Mean over years of each feature for one entity.
inline std::vector<double> average_feature_vector(const FeaturePanel& panel, std::string_view entity) {
  auto e = panel.find_entity(entity);
  if (!e) throw Error(ErrorKind::not_found, "'" + std::string(entity) + "'");
  const std::size_t Y = panel.year_count(), F = panel.feature_count();
  std::vector<double> out(F, 0.0);
  if (Y == 0) return out;
  for (std::size_t f = 0; f < F; ++f) {
    double sum = 0.0;
    for (std::size_t y = 0; y < Y; ++y) sum += panel.at(*e, y, f);
    out[f] = sum / static_cast<double>(Y);
  }
  return out;
}

/// Pearson product-moment correlation, clamped to [-1, 1].
inline double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::shape, "vectors differ in length");
  if (a.size() < 2) throw Error(ErrorKind::insufficient_features, "need at least 2 features");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0)
    throw Error(ErrorKind::undefined_correlation, "constant vector has no correlation");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

struct CorrelationReport {
  std::vector<std::string> entities;  // nonself order
  std::vector<double> r;
  std::vector<std::size_t> ordering;  // ascending r, most dissimilar first
};

/// Correlates the self's year-averaged feature vector with each candidate's.
inline CorrelationReport correlation_baseline(const FeaturePanel& panel, std::string_view self_id) {
  const auto self_vec = average_feature_vector(panel, self_id);
  CorrelationReport rep;
  for (const auto& id : panel.entities()) {
    if (id == self_id) continue;
    rep.entities.push_back(id);
    try {
      rep.r.push_back(pearson(self_vec, average_feature_vector(panel, id)));
    } catch (const Error& ex) {
      throw Error(ex.kind(), "entity '" + id + "': " + ex.what());
    }
  }
  if (rep.entities.empty()) throw Error(ErrorKind::no_candidates, "panel holds only the self entity");
  rep.ordering.resize(rep.entities.size());
  std::iota(rep.ordering.begin(), rep.ordering.end(), std::size_t{0});
  std::stable_sort(rep.ordering.begin(), rep.ordering.end(),
                   [&](std::size_t x, std::size_t y) { return rep.r[x] < rep.r[y]; });
  return rep;
}

}  // namespace immunoscan
