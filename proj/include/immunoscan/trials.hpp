#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "immunoscan/detector.hpp"
#include "immunoscan/error.hpp"
#include "immunoscan/monitor.hpp"
#include "immunoscan/panel.hpp"
#include "immunoscan/preprocess.hpp"
#include "immunoscan/rng.hpp"

namespace immunoscan {

/// zero pins u to 0 in every trial (deterministic detectors).
enum class UMode { uniform, ternary, zero };
enum class UScope { per_feature, global };

inline std::string_view to_string(UMode m) {
  switch (m) {
    case UMode::uniform: return "uniform";
    case UMode::ternary: return "ternary";
    case UMode::zero: return "zero";
  }
  return "?";
}

inline std::string_view to_string(UScope s) {
  return s == UScope::per_feature ? "per-feature" : "global";
}

struct TrialConfig {
  double n = 0.45;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  UMode u_mode = UMode::uniform;
  UScope u_scope = UScope::per_feature;
  GrowthBasis growth_basis = GrowthBasis::normalized;
  NormalizationScope scope = NormalizationScope::per_entity;
  std::vector<SimilarityMeasure> measures{SimilarityMeasure::euclidean_distance,
                                          SimilarityMeasure::cosine_angle};
  MaskMode mask_mode = MaskMode::zero_include;

  void validate() const {
    if (!(n >= 0.0) || !std::isfinite(n))
      throw Error(ErrorKind::invalid_parameter, "n must be a finite value >= 0");
    if (trials < 1) throw Error(ErrorKind::invalid_parameter, "trials must be >= 1");
    if (measures.empty()) throw Error(ErrorKind::invalid_parameter, "at least one measure is required");
    for (std::size_t i = 0; i < measures.size(); ++i)
      for (std::size_t k = i + 1; k < measures.size(); ++k)
        if (measures[i] == measures[k])
          throw Error(ErrorKind::invalid_parameter, "measure listed twice");
  }
};

inline std::vector<double> draw_u(std::mt19937_64& substream, UMode mode, std::size_t count,
                                  UScope scope) {
  std::vector<double> u(count, 0.0);
  if (mode == UMode::zero || count == 0) return u;
  const std::size_t draws = scope == UScope::global ? 1 : count;
  for (std::size_t i = 0; i < draws; ++i)
    u[i] = mode == UMode::uniform ? -1.0 + 2.0 * unit_uniform(substream)
                                  : static_cast<double>(uniform_ternary(substream) - 1);
  if (scope == UScope::global) std::fill(u.begin() + 1, u.end(), u[0]);
  return u;
}

/// Normalized self/nonself matrices plus the raw self series used for the
/// growth basis.
struct PreparedData {
  FeaturePanel self_normalized;
  FeaturePanel self_raw;
  FeaturePanel nonself_normalized;
  FeaturePanel nonself_raw;
  NormalizationScope scope = NormalizationScope::per_entity;
  std::vector<std::string> warnings;
};

/// Normalizes the whole panel (global scope pools the self with the
/// candidates) and then splits it.
inline PreparedData prepare(const FeaturePanel& panel, std::string_view self_id,
                            NormalizationScope scope) {
  auto raw = split_self_nonself(panel, self_id);
  auto normalized = normalize_minmax(panel, scope);
  auto norm_split = split_self_nonself(normalized.panel, self_id);
  return {std::move(norm_split.self_panel), std::move(raw.self_panel),
          std::move(norm_split.nonself_panel), std::move(raw.nonself_panel), scope,
          std::move(normalized.warnings)};
}

struct RankFrequencyTable {
  SimilarityMeasure measure = SimilarityMeasure::euclidean_distance;
  std::vector<std::string> entities;
  std::vector<std::uint64_t> counts;  // rank x entity, rank 1 in row 0
  std::uint64_t trials = 0;

  std::size_t size() const noexcept { return entities.size(); }
  std::uint64_t count(std::size_t rank_row, std::size_t entity) const {
    return counts[rank_row * entities.size() + entity];
  }
  std::uint64_t& count(std::size_t rank_row, std::size_t entity) {
    return counts[rank_row * entities.size() + entity];
  }

  bool doubly_stochastic() const {
    const std::size_t K = size();
    for (std::size_t i = 0; i < K; ++i) {
      std::uint64_t row = 0, col = 0;
      for (std::size_t k = 0; k < K; ++k) {
        row += count(i, k);
        col += count(k, i);
      }
      if (row != trials || col != trials) return false;
    }
    return true;
  }

  friend bool operator==(const RankFrequencyTable&, const RankFrequencyTable&) = default;
};

struct TrialRecord {
  std::vector<double> u;
  std::vector<TrialRanking> rankings;            // per measure, config order
  std::vector<std::vector<double>> entity_scores;  // per measure, nonself order
};

struct TrialResult {
  std::vector<RankFrequencyTable> tables;  // per measure, config order
  std::vector<TrialRecord> records;        // filled only when requested
};

struct RunOptions {
  unsigned workers = 1;
  bool record = false;
};

/// One trial of detector generation, masking and monitoring for each measure.
inline TrialRecord run_single_trial(const TrialConfig& config, const PreparedData& data,
                                    const FeatureStats& stats, std::uint64_t trial) {
  auto substream = trial_substream(config.seed, trial);
  TrialRecord rec;
  rec.u = draw_u(substream, config.u_mode, stats.size(), config.u_scope);
  const auto ranges = detector_ranges(stats, config.n, rec.u);
  const auto accepted = apply_mask(data.self_normalized, ranges);
  for (auto measure : config.measures) {
    auto scores = score_entities(accepted, data.nonself_normalized, measure, config.mask_mode);
    rec.rankings.push_back(rank_entities(scores));
    rec.entity_scores.push_back(std::move(scores.score));
  }
  return rec;
}

/// Every trial draws from its own substream and lands in its own slot;
/// counting happens afterwards in trial order, so the tables do not depend
/// on the worker count.
inline TrialResult run_trials(const TrialConfig& config, const PreparedData& data,
                              RunOptions options = {}) {
  config.validate();
  if (config.scope != data.scope)
    throw Error(ErrorKind::invalid_parameter, "data was prepared with a different normalization scope");
  const auto stats = feature_stats(data.self_normalized, data.self_raw, config.growth_basis);

  const std::size_t T = static_cast<std::size_t>(config.trials);
  std::vector<TrialRecord> records(T);
  std::vector<std::optional<Error>> failures(T);

  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t t = first; t < T; t += stride) {
      try {
        records[t] = run_single_trial(config, data, stats, t);
      } catch (const Error& ex) {
        failures[t] = ex;
        return;
      } catch (const std::exception& ex) {
        failures[t] = Error(ErrorKind::invalid_parameter, ex.what());
        return;
      }
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(T)));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }
  for (std::size_t t = 0; t < T; ++t)
    if (failures[t])
      throw Error(failures[t]->kind(), "trial " + std::to_string(t) + ": " + failures[t]->what());

  TrialResult result;
  const std::size_t K = data.nonself_normalized.entity_count();
  for (std::size_t m = 0; m < config.measures.size(); ++m) {
    RankFrequencyTable table;
    table.measure = config.measures[m];
    table.entities = data.nonself_normalized.entities();
    table.counts.assign(K * K, 0);
    table.trials = config.trials;
    for (const auto& rec : records) {
      const auto& order = rec.rankings[m].order;
      for (std::size_t rank = 0; rank < K; ++rank) ++table.count(rank, order[rank]);
    }
    result.tables.push_back(std::move(table));
  }
  if (options.record) result.records = std::move(records);
  return result;
}

struct TrialSummary {
  std::vector<std::string> entities;
  std::vector<std::size_t> modal_rank;  // 1-based
  std::vector<double> top1_share;
  std::vector<double> mean_rank;
};

inline TrialSummary summarize(const RankFrequencyTable& table) {
  if (table.trials == 0) throw Error(ErrorKind::invalid_parameter, "table has no trials");
  const std::size_t K = table.size();
  if (table.counts.size() != K * K) throw Error(ErrorKind::shape, "count matrix is not ranks x entities");
  TrialSummary s;
  s.entities = table.entities;
  const double T = static_cast<double>(table.trials);
  for (std::size_t e = 0; e < K; ++e) {
    std::size_t mode = 0;
    std::uint64_t weighted = 0;
    for (std::size_t r = 0; r < K; ++r) {
      if (table.count(r, e) > table.count(mode, e)) mode = r;
      weighted += (r + 1) * table.count(r, e);
    }
    s.modal_rank.push_back(mode + 1);
    s.top1_share.push_back(static_cast<double>(table.count(0, e)) / T);
    s.mean_rank.push_back(static_cast<double>(weighted) / T);
  }
  return s;
}

/// `rank,<entity>,...` header, then one row of counts per rank.
inline void write_rank_csv(std::ostream& out, const RankFrequencyTable& table) {
  out << "rank";
  for (const auto& e : table.entities) out << ',' << e;
  out << '\n';
  for (std::size_t r = 0; r < table.size(); ++r) {
    out << r + 1;
    for (std::size_t e = 0; e < table.size(); ++e) out << ',' << table.count(r, e);
    out << '\n';
  }
}

inline RankFrequencyTable parse_rank_csv(std::istream& in, SimilarityMeasure measure) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::parse, "line 1: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = detail::split_fields(line);
  if (header.empty() || header[0] != "rank") throw Error(ErrorKind::parse, "line 1: header must start with 'rank'");

  RankFrequencyTable table;
  table.measure = measure;
  for (std::size_t i = 1; i < header.size(); ++i) table.entities.emplace_back(header[i]);
  const std::size_t K = table.size();
  table.counts.assign(K * K, 0);
  for (std::size_t r = 0; r < K; ++r) {
    if (!std::getline(in, line)) throw Error(ErrorKind::parse, "missing row for rank " + std::to_string(r + 1));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = detail::split_fields(line);
    const std::string where = "line " + std::to_string(r + 2) + ": ";
    if (fields.size() != K + 1) throw Error(ErrorKind::parse, where + "wrong column count");
    auto rank = detail::parse_number<std::size_t>(fields[0]);
    if (!rank || *rank != r + 1) throw Error(ErrorKind::parse, where + "ranks must run 1..K");
    for (std::size_t e = 0; e < K; ++e) {
      auto c = detail::parse_number<std::uint64_t>(fields[e + 1]);
      if (!c) throw Error(ErrorKind::parse, where + "non-integer count");
      table.count(r, e) = *c;
    }
  }
  std::uint64_t first_row = 0;
  for (std::size_t e = 0; e < K; ++e) first_row += K ? table.count(0, e) : 0;
  table.trials = first_row;
  return table;
}

struct DetectorSnapshot {
  FeatureStats stats;
  DetectorSet ranges;
  AcceptedDetectors accepted;
};

/// Detector ranges and accepted matrix with u = 0.
inline DetectorSnapshot detector_snapshot(const PreparedData& data, double n, GrowthBasis basis) {
  auto stats = feature_stats(data.self_normalized, data.self_raw, basis);
  std::vector<double> zeros(stats.size(), 0.0);
  auto ranges = detector_ranges(stats, n, zeros, data.self_normalized.features());
  auto accepted = apply_mask(data.self_normalized, ranges);
  return {std::move(stats), std::move(ranges), std::move(accepted)};
}

}  // namespace immunoscan
