#pragma once

// Random panels for property tests.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "immunoscan/panel.hpp"

namespace testgen {

inline immunoscan::FeaturePanel random_panel(std::mt19937_64& rng, std::size_t entities,
                                             std::size_t years, std::size_t features,
                                             double lo = -100.0, double hi = 100.0) {
  std::uniform_real_distribution<double> value(lo, hi);
  std::vector<std::string> ids, names;
  std::vector<int> yrs;
  for (std::size_t e = 0; e < entities; ++e) ids.push_back("E" + std::to_string(e));
  for (std::size_t f = 0; f < features; ++f) names.push_back("f" + std::to_string(f));
  for (std::size_t y = 0; y < years; ++y) yrs.push_back(2000 + static_cast<int>(y));
  std::vector<double> vals(entities * years * features);
  for (auto& v : vals) v = value(rng);
  return immunoscan::FeaturePanel(ids, yrs, names, vals);
}

/// Panel with small integer values so ties and constant series show up.
inline immunoscan::FeaturePanel lumpy_panel(std::mt19937_64& rng, std::size_t entities,
                                            std::size_t years, std::size_t features) {
  std::uniform_int_distribution<int> value(0, 4);
  auto p = random_panel(rng, entities, years, features);
  std::vector<double> vals(p.values().size());
  for (auto& v : vals) v = value(rng);
  return p.with_values(vals);
}

inline std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace testgen
