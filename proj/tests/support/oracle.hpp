#pragma once

// Straight-line negative selection pipeline written from the formulas only.
// Test code: shares no code path with the library so the two can check each
// other. Per-entity min-max, population stddev, growth on normalized values,
// inclusive bounds, masked zeros kept in the year vectors.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace oracle {

using Cube = std::vector<std::vector<std::vector<double>>>;  // [entity][year][feature]

struct Outcome {
  std::vector<double> scores;       // per nonself, in panel order (self removed)
  std::vector<std::size_t> order;   // rank 1 first, indices into the nonself list
  bool no_signal = false;
};

inline Cube normalize_per_entity(const Cube& raw) {
  Cube out = raw;
  for (std::size_t e = 0; e < raw.size(); ++e) {
    const std::size_t Y = raw[e].size(), F = raw[e][0].size();
    for (std::size_t f = 0; f < F; ++f) {
      double lo = raw[e][0][f], hi = raw[e][0][f];
      for (std::size_t y = 0; y < Y; ++y) {
        if (raw[e][y][f] < lo) lo = raw[e][y][f];
        if (raw[e][y][f] > hi) hi = raw[e][y][f];
      }
      for (std::size_t y = 0; y < Y; ++y)
        out[e][y][f] = hi > lo ? (raw[e][y][f] - lo) / (hi - lo) : 0.0;
    }
  }
  return out;
}

/// cosine == false -> Euclidean distance, true -> angle.
inline Outcome run(const Cube& raw, std::size_t self, double n, const std::vector<double>& u,
                   bool cosine) {
  const Cube x = normalize_per_entity(raw);
  const std::size_t E = x.size(), Y = x[0].size(), F = x[0][0].size();

  // Step 3: detector interval per feature.
  std::vector<double> lower(F), upper(F);
  for (std::size_t i = 0; i < F; ++i) {
    double mu = 0.0;
    for (std::size_t j = 0; j < Y; ++j) mu += x[self][j][i];
    mu /= Y;
    double var = 0.0;
    for (std::size_t j = 0; j < Y; ++j) var += (x[self][j][i] - mu) * (x[self][j][i] - mu);
    const double sd = std::sqrt(var / Y);
    double gsum = 0.0;
    int gcount = 0;
    for (std::size_t j = 1; j < Y; ++j) {
      if (x[self][j - 1][i] == 0.0) continue;
      gsum += (x[self][j][i] - x[self][j - 1][i]) / x[self][j - 1][i];
      ++gcount;
    }
    const double g = gcount ? gsum / gcount : 0.0;
    const double C = u[i] * g;
    lower[i] = mu - n * sd - C;
    upper[i] = mu + n * sd + C;
  }

  // Step 4: accepted detectors.
  std::vector<std::vector<double>> acc(Y, std::vector<double>(F));
  for (std::size_t j = 0; j < Y; ++j)
    for (std::size_t i = 0; i < F; ++i) {
      const double v = x[self][j][i];
      const bool inside = lower[i] <= upper[i] && v >= lower[i] && v <= upper[i];
      acc[j][i] = inside ? 0.0 : v;
    }

  // Step 5: monitoring.
  Outcome out;
  for (std::size_t k = 0; k < E; ++k) {
    if (k == self) continue;
    double total = 0.0;
    int used = 0;
    for (std::size_t i = 0; i < F; ++i) {
      double dot = 0.0, ss = 0.0, aa = 0.0, bb = 0.0;
      for (std::size_t j = 0; j < Y; ++j) {
        const double a = acc[j][i], b = x[k][j][i];
        ss += (a - b) * (a - b);
        dot += a * b;
        aa += a * a;
        bb += b * b;
      }
      if (!cosine) {
        total += std::sqrt(ss);
        ++used;
      } else if (aa > 0.0) {
        double c = bb > 0.0 ? dot / (std::sqrt(aa) * std::sqrt(bb)) : 0.0;
        c = std::min(1.0, std::max(-1.0, c));
        total += bb > 0.0 ? std::acos(c) : std::numbers::pi / 2.0;
        ++used;
      }
    }
    if (used == 0) {
      out.no_signal = true;
      return out;
    }
    out.scores.push_back(total / used);
  }

  // Selection sort, strictly greater wins so earlier entities win ties.
  std::vector<bool> taken(out.scores.size(), false);
  for (std::size_t r = 0; r < out.scores.size(); ++r) {
    std::size_t best = out.scores.size();
    for (std::size_t k = 0; k < out.scores.size(); ++k) {
      if (taken[k]) continue;
      if (best == out.scores.size() || out.scores[k] > out.scores[best]) best = k;
    }
    taken[best] = true;
    out.order.push_back(best);
  }
  return out;
}

}  // namespace oracle
