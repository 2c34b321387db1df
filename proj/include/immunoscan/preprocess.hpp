#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "immunoscan/error.hpp"
#include "immunoscan/panel.hpp"

namespace immunoscan {

enum class NormalizationScope { per_entity, global };

inline std::string_view to_string(NormalizationScope s) {
  return s == NormalizationScope::per_entity ? "per-entity" : "global";
}

/// Min-max scaled panel. `panel` keeps the source axes; `source` is whatever
/// label the caller used for the raw panel (file digest, path, ...).
struct NormalizedPanel {
  FeaturePanel panel;
  NormalizationScope scope = NormalizationScope::per_entity;
  std::string source;
  std::vector<std::string> warnings;
};

/// (x - min) / (max - min) per (entity, feature) series, or per feature over
/// all entities in global scope. Constant groups map to 0 and are reported.
inline NormalizedPanel normalize_minmax(const FeaturePanel& panel, NormalizationScope scope,
                                        std::string source = {}) {
  const std::size_t E = panel.entity_count(), Y = panel.year_count(), F = panel.feature_count();
  std::vector<double> out(panel.values().begin(), panel.values().end());
  std::vector<std::string> warnings;
  auto idx = [&](std::size_t e, std::size_t y, std::size_t f) { return (e * Y + y) * F + f; };

  auto scale_group = [&](std::size_t e_begin, std::size_t e_end, std::size_t f) {
    double lo = panel.at(e_begin, 0, f), hi = lo;
    for (std::size_t e = e_begin; e < e_end; ++e)
      for (std::size_t y = 0; y < Y; ++y) {
        lo = std::min(lo, panel.at(e, y, f));
        hi = std::max(hi, panel.at(e, y, f));
      }
    const double range = hi - lo;
    for (std::size_t e = e_begin; e < e_end; ++e)
      for (std::size_t y = 0; y < Y; ++y) {
        double v = range > 0.0 ? (panel.at(e, y, f) - lo) / range : 0.0;
        out[idx(e, y, f)] = std::clamp(v, 0.0, 1.0);
      }
    return range > 0.0;
  };

  if (Y > 0) {
    for (std::size_t f = 0; f < F; ++f) {
      if (scope == NormalizationScope::per_entity) {
        for (std::size_t e = 0; e < E; ++e)
          if (!scale_group(e, e + 1, f))
            warnings.push_back("constant series: entity '" + panel.entities()[e] +
                               "', feature '" + panel.features()[f] + "' normalized to 0");
      } else if (E > 0 && !scale_group(0, E, f)) {
        warnings.push_back("constant series: feature '" + panel.features()[f] +
                           "' is constant across all entities, normalized to 0");
      }
    }
  }
  return {panel.with_values(std::move(out)), scope, std::move(source), std::move(warnings)};
}

}  // namespace immunoscan
