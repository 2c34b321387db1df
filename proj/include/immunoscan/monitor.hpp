#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "immunoscan/detector.hpp"
#include "immunoscan/error.hpp"
#include "immunoscan/panel.hpp"

namespace immunoscan {

enum class SimilarityMeasure { euclidean_distance, cosine_angle };

inline std::string_view to_string(SimilarityMeasure m) {
  return m == SimilarityMeasure::euclidean_distance ? "euclidean" : "cosine";
}

/// How masked self cells enter the comparison: as zeros over the full year
/// vector, or dropped together with the matching nonself years.
enum class MaskMode { zero_include, exclude };

inline std::string_view to_string(MaskMode m) {
  return m == MaskMode::zero_include ? "zero-include" : "exclude";
}

inline double feature_euclidean(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::shape, "vectors differ in length");
  double ss = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    ss += d * d;
  }
  return std::sqrt(ss);
}

/// Cosine of the angle between a and b clamped to [-1, 1]; nullopt when
/// either vector has zero norm.
inline std::optional<double> clamped_cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::shape, "vectors differ in length");
  double dot = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    dot += a[j] * b[j];
    aa += a[j] * a[j];
    bb += b[j] * b[j];
  }
  if (aa == 0.0 || bb == 0.0) return std::nullopt;
  return std::clamp(dot / (std::sqrt(aa) * std::sqrt(bb)), -1.0, 1.0);
}

/// Angle in radians, [0, pi]. nullopt for a zero-norm input.
inline std::optional<double> feature_cosine_angle(std::span<const double> a,
                                                  std::span<const double> b) {
  auto c = clamped_cosine(a, b);
  if (!c) return std::nullopt;
  return std::acos(*c);
}

struct DissimilarityScores {
  SimilarityMeasure measure = SimilarityMeasure::euclidean_distance;
  std::vector<std::string> entities;
  std::vector<std::string> features;
  std::vector<double> score;           // per entity
  std::vector<double> components;      // entity x feature
  std::vector<std::size_t> skipped_features;

  double component(std::size_t entity, std::size_t feature) const {
    return components[entity * features.size() + feature];
  }
};

inline DissimilarityScores score_entities(const AcceptedDetectors& accepted,
                                          const FeaturePanel& nonself, SimilarityMeasure measure,
                                          MaskMode mask_mode = MaskMode::zero_include) {
  const std::size_t Y = accepted.years, F = accepted.features, E = nonself.entity_count();
  if (nonself.year_count() != Y || nonself.feature_count() != F)
    throw Error(ErrorKind::shape, "accepted detectors and nonself panel axes differ");
  if (E == 0) throw Error(ErrorKind::no_candidates, "nonself panel is empty");

  DissimilarityScores out;
  out.measure = measure;
  out.entities = nonself.entities();
  out.features = nonself.features();
  out.components.assign(E * F, 0.0);

  std::vector<bool> skip(F, false);
  std::vector<double> s, t;
  s.reserve(Y);
  t.reserve(Y);
  for (std::size_t f = 0; f < F; ++f) {
    std::vector<std::size_t> years;
    for (std::size_t y = 0; y < Y; ++y)
      if (mask_mode == MaskMode::zero_include || accepted.is_kept(y, f)) years.push_back(y);
    s.clear();
    for (std::size_t y : years) s.push_back(accepted.value(y, f));

    if (measure == SimilarityMeasure::cosine_angle &&
        std::all_of(s.begin(), s.end(), [](double v) { return v == 0.0; })) {
      skip[f] = true;
      out.skipped_features.push_back(f);
      continue;
    }
    for (std::size_t e = 0; e < E; ++e) {
      t.clear();
      for (std::size_t y : years) t.push_back(nonself.at(e, y, f));
      double c;
      if (measure == SimilarityMeasure::euclidean_distance) {
        c = feature_euclidean(s, t);
      } else {
        c = feature_cosine_angle(s, t).value_or(std::numbers::pi / 2.0);
      }
      out.components[e * F + f] = c;
    }
  }

  const std::size_t used = F - out.skipped_features.size();
  if (used == 0)
    throw Error(ErrorKind::no_signal, "every feature of the self is fully masked; no angle is defined");
  out.score.assign(E, 0.0);
  for (std::size_t e = 0; e < E; ++e) {
    double sum = 0.0;
    for (std::size_t f = 0; f < F; ++f)
      if (!skip[f]) sum += out.components[e * F + f];
    out.score[e] = sum / static_cast<double>(used);
  }
  return out;
}

/// Rank 1 first. `order` holds entity indices into the scored panel.
struct TrialRanking {
  std::vector<std::size_t> order;
  std::vector<std::string> entities;
  std::vector<double> scores;
};

/// Sorts by score descending; equal scores keep panel order.
inline TrialRanking rank_entities(const DissimilarityScores& scores) {
  const std::size_t E = scores.score.size();
  TrialRanking r;
  r.order.resize(E);
  std::iota(r.order.begin(), r.order.end(), std::size_t{0});
  std::stable_sort(r.order.begin(), r.order.end(), [&](std::size_t a, std::size_t b) {
    return scores.score[a] > scores.score[b];
  });
  for (std::size_t e : r.order) {
    r.entities.push_back(scores.entities[e]);
    r.scores.push_back(scores.score[e]);
  }
  return r;
}

}  // namespace immunoscan
