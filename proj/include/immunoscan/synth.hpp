#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "immunoscan/error.hpp"
#include "immunoscan/panel.hpp"
#include "immunoscan/rng.hpp"

namespace immunoscan {

/// Bank indicators used as default feature names.
inline constexpr std::array<std::string_view, 18> kDefaultFeatureNames{
    "offices",          "employees",         "business_per_employee", "profit_per_employee",
    "capital_reserves", "deposits",          "investments",           "advances",
    "interest_income",  "other_income",      "interest_expended",     "operating_expenses",
    "cost_of_funds",    "return_on_assets",  "wages_pct_expenses",    "return_on_advances_adj_cof",
    "crar",             "net_npa_ratio"};

struct SynthOptions {
  std::size_t entities = 8;
  std::size_t features = 18;
  std::size_t years = 4;
  int start_year = 2005;
  std::string self_id = "SELF";
  std::string outlier_id = "TGT";
  std::uint64_t seed = 0;
  double noise = 0.01;  // relative, uniform in [-noise, noise]

  void validate() const {
    if (entities < 2) throw Error(ErrorKind::invalid_parameter, "need at least 2 entities (self and outlier)");
    if (features < 1) throw Error(ErrorKind::invalid_parameter, "need at least 1 feature");
    if (years < 2) throw Error(ErrorKind::invalid_parameter, "need at least 2 years");
    if (self_id.empty() || outlier_id.empty() || self_id == outlier_id)
      throw Error(ErrorKind::invalid_parameter, "self and outlier ids must be distinct and non-empty");
    if (!(noise >= 0.0 && noise < 0.5)) throw Error(ErrorKind::invalid_parameter, "noise must be in [0, 0.5)");
  }
};

/// Panel with one self entity, entities-2 near copies of it (rescaled, with
/// small relative noise) and one outlier whose level sits far below the
/// self's and whose yearly pattern is the self's mirrored.
///
/// Each self feature follows level * (1 + amp * s_y) with s_y a sampled
/// sine over the years, phase 0 or pi. Those phases keep the mean growth of
/// the normalized series small, so the detector change term stays narrow.
inline FeaturePanel synthesize_panel(const SynthOptions& opt) {
  opt.validate();
  std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32)};
  std::mt19937_64 rng(seq);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng); };

  std::vector<std::string> ids{opt.self_id};
  for (std::size_t k = 1, made = 0; made + 2 < opt.entities; ++k) {
    std::string id = "N" + std::to_string(k);
    if (id == opt.self_id || id == opt.outlier_id) continue;
    ids.push_back(id);
    ++made;
  }
  ids.push_back(opt.outlier_id);

  std::vector<std::string> features;
  for (std::size_t f = 0; f < opt.features; ++f)
    features.push_back(f < kDefaultFeatureNames.size() ? std::string(kDefaultFeatureNames[f])
                                                       : "feature_" + std::to_string(f + 1));
  std::vector<int> years;
  for (std::size_t y = 0; y < opt.years; ++y) years.push_back(opt.start_year + static_cast<int>(y));

  const std::size_t E = ids.size(), Y = opt.years, F = opt.features;
  std::vector<double> level(F), amp(F), phase(F);
  for (std::size_t f = 0; f < F; ++f) {
    level[f] = std::pow(10.0, uniform(1.0, 4.0));
    amp[f] = uniform(0.2, 0.6);
    phase[f] = (rng() & 1u) ? std::numbers::pi : 0.0;
  }
  auto shape = [&](std::size_t f, std::size_t y) {
    return 0.5 + 0.5 * std::sin(2.0 * std::numbers::pi * static_cast<double>(y) / static_cast<double>(Y) + phase[f]);
  };

  std::vector<double> values(E * Y * F);
  for (std::size_t e = 0; e < E; ++e) {
    const bool is_self = e == 0, is_outlier = e + 1 == E;
    const double scale = is_self ? 1.0 : is_outlier ? 0.05 : uniform(0.8, 1.25);
    for (std::size_t y = 0; y < Y; ++y)
      for (std::size_t f = 0; f < F; ++f) {
        const double s = is_outlier ? 1.0 - shape(f, y) : shape(f, y);
        const double jitter = is_self ? 1.0 : 1.0 + uniform(-opt.noise, opt.noise);
        values[(e * Y + y) * F + f] = level[f] * scale * (1.0 + amp[f] * s) * jitter;
      }
  }
  return FeaturePanel(std::move(ids), std::move(years), std::move(features), std::move(values));
}

}  // namespace immunoscan
