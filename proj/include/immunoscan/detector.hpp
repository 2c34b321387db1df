#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "immunoscan/error.hpp"
#include "immunoscan/panel.hpp"
#include "immunoscan/preprocess.hpp"

namespace immunoscan {

enum class GrowthBasis { normalized, raw };

inline std::string_view to_string(GrowthBasis b) {
  return b == GrowthBasis::normalized ? "normalized" : "raw";
}

struct GrowthEstimate {
  double rate = 0.0;          // mean fractional growth per transition
  std::size_t used = 0;       // transitions averaged
  std::size_t skipped = 0;    // transitions with a zero baseline
};

/// Mean of (present - last) / last over consecutive years, as a fraction.
/// Transitions whose baseline is zero are left out; with none left the rate is 0.
inline GrowthEstimate mean_growth_rate(std::span<const double> series) {
  if (series.size() < 2)
    throw Error(ErrorKind::insufficient_history, "growth rate needs at least 2 years");
  GrowthEstimate g;
  double sum = 0.0;
  for (std::size_t j = 1; j < series.size(); ++j) {
    const double last = series[j - 1];
    if (last == 0.0) {
      ++g.skipped;
      continue;
    }
    sum += (series[j] - last) / last;
    ++g.used;
  }
  if (g.used > 0) g.rate = sum / static_cast<double>(g.used);
  return g;
}

struct FeatureStats {
  std::vector<double> mean;
  std::vector<double> stddev;  // population
  std::vector<double> growth;
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return mean.size(); }
};

/// Mean and population standard deviation of each normalized feature over
/// the self's years, plus the mean growth rate on the chosen basis.
inline FeatureStats feature_stats(const FeaturePanel& self_normalized, const FeaturePanel& self_raw,
                                  GrowthBasis basis) {
  if (self_normalized.entity_count() != 1 || self_raw.entity_count() != 1)
    throw Error(ErrorKind::shape, "feature_stats expects single-entity panels");
  if (!self_normalized.same_axes(self_raw))
    throw Error(ErrorKind::shape, "normalized and raw self panels have different axes");
  const std::size_t Y = self_normalized.year_count();
  if (Y < 2) throw Error(ErrorKind::insufficient_history, "need at least 2 years of self history");

  const std::size_t F = self_normalized.feature_count();
  FeatureStats s;
  s.mean.resize(F);
  s.stddev.resize(F);
  s.growth.resize(F);
  for (std::size_t f = 0; f < F; ++f) {
    const auto x = self_normalized.series(0, f);
    double mu = 0.0;
    for (double v : x) mu += v;
    mu /= static_cast<double>(Y);
    double ss = 0.0;
    for (double v : x) ss += (v - mu) * (v - mu);
    s.mean[f] = mu;
    s.stddev[f] = std::sqrt(ss / static_cast<double>(Y));

    const auto g = mean_growth_rate(basis == GrowthBasis::normalized ? x : self_raw.series(0, f));
    s.growth[f] = g.rate;
    const auto& name = self_normalized.features()[f];
    if (g.used == 0)
      s.warnings.push_back("growth rate of feature '" + name +
                           "' undefined (every transition has a zero baseline), using 0");
    else if (g.skipped > 0)
      s.warnings.push_back("growth rate of feature '" + name + "' skips " +
                           std::to_string(g.skipped) + " zero-baseline transition(s)");
  }
  return s;
}

/// Per-feature closed interval [lower, upper]. An interval with upper < lower
/// is empty and masks nothing.
struct DetectorSet {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> change;
  double n = 0.0;
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return lower.size(); }
  bool empty(std::size_t f) const { return upper[f] < lower[f]; }
  bool covers(std::size_t f, double x) const { return !empty(f) && lower[f] <= x && x <= upper[f]; }
};

/// lower = mu - n*sd - c, upper = mu + n*sd + c with c = u * growth.
inline DetectorSet detector_ranges(const FeatureStats& stats, double n, std::span<const double> u,
                                   std::span<const std::string> feature_names = {}) {
  if (!(n >= 0.0) || !std::isfinite(n))
    throw Error(ErrorKind::invalid_parameter, "span index n must be a finite value >= 0");
  if (u.size() != stats.size())
    throw Error(ErrorKind::invalid_parameter, "need one u value per feature");
  DetectorSet d;
  d.n = n;
  const std::size_t F = stats.size();
  d.lower.resize(F);
  d.upper.resize(F);
  d.change.resize(F);
  for (std::size_t f = 0; f < F; ++f) {
    if (!(u[f] >= -1.0 && u[f] <= 1.0))
      throw Error(ErrorKind::invalid_parameter, "u outside [-1, 1]");
    const double c = u[f] * stats.growth[f];
    const double half = n * stats.stddev[f];
    d.change[f] = c;
    d.lower[f] = stats.mean[f] - half - c;
    d.upper[f] = stats.mean[f] + half + c;
    if (stats.stddev[f] > 0.0 && n > stats.mean[f] / stats.stddev[f]) {
      std::string name = f < feature_names.size() ? feature_names[f] : "#" + std::to_string(f);
      d.warnings.push_back("n exceeds mean/stddev bound for feature '" + name + "'");
    }
  }
  return d;
}

/// Self matrix after masking. kept == false marks cells inside their detector.
struct AcceptedDetectors {
  std::size_t years = 0;
  std::size_t features = 0;
  std::vector<double> values;  // years x features, row-major
  std::vector<bool> kept;

  double value(std::size_t year, std::size_t feature) const { return values[year * features + feature]; }
  bool is_kept(std::size_t year, std::size_t feature) const { return kept[year * features + feature]; }

  std::vector<double> feature_column(std::size_t feature) const {
    std::vector<double> out(years);
    for (std::size_t y = 0; y < years; ++y) out[y] = value(y, feature);
    return out;
  }
};

inline AcceptedDetectors apply_mask(std::span<const double> self_matrix, std::size_t feature_count,
                                    const DetectorSet& ranges) {
  if (feature_count == 0 || feature_count != ranges.size() || self_matrix.size() % feature_count != 0)
    throw Error(ErrorKind::shape, "self matrix feature axis does not match detector set");
  AcceptedDetectors a;
  a.features = feature_count;
  a.years = self_matrix.size() / feature_count;
  a.values.assign(self_matrix.begin(), self_matrix.end());
  a.kept.assign(self_matrix.size(), true);
  for (std::size_t y = 0; y < a.years; ++y)
    for (std::size_t f = 0; f < feature_count; ++f) {
      const std::size_t k = y * feature_count + f;
      if (ranges.covers(f, self_matrix[k])) {
        a.kept[k] = false;
        a.values[k] = 0.0;
      }
    }
  return a;
}

inline AcceptedDetectors apply_mask(const FeaturePanel& self_panel, const DetectorSet& ranges) {
  if (self_panel.entity_count() != 1)
    throw Error(ErrorKind::shape, "apply_mask expects a single-entity panel");
  return apply_mask(self_panel.entity_block(0), self_panel.feature_count(), ranges);
}

}  // namespace immunoscan
