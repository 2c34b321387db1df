#pragma once

#include <openssl/evp.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "immunoscan/baseline.hpp"
#include "immunoscan/detector.hpp"
#include "immunoscan/error.hpp"
#include "immunoscan/trials.hpp"
#include "json.hpp"

namespace immunoscan {

inline constexpr std::string_view kToolName = "immunoscan";
inline constexpr std::string_view kToolVersion = "0.1.0";

inline std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::io, "sha256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

enum class BaselineBasis { normalized, raw };

inline std::string_view to_string(BaselineBasis b) {
  return b == BaselineBasis::normalized ? "normalized" : "raw";
}

inline nlohmann::json config_json(const TrialConfig& c) {
  nlohmann::json measures = nlohmann::json::array();
  for (auto m : c.measures) measures.push_back(to_string(m));
  return {{"n", c.n},
          {"trials", c.trials},
          {"seed", c.seed},
          {"u_mode", to_string(c.u_mode)},
          {"u_scope", to_string(c.u_scope)},
          {"growth_basis", to_string(c.growth_basis)},
          {"norm_scope", to_string(c.scope)},
          {"measures", measures},
          {"mask_mode", to_string(c.mask_mode)},
          {"stddev", "population"}};
}

inline nlohmann::json snapshot_json(const DetectorSnapshot& snap, const FeaturePanel& self_normalized) {
  nlohmann::json features = nlohmann::json::array();
  for (std::size_t f = 0; f < snap.ranges.size(); ++f) {
    features.push_back({{"name", self_normalized.features()[f]},
                        {"mean", snap.stats.mean[f]},
                        {"stddev", snap.stats.stddev[f]},
                        {"growth", snap.stats.growth[f]},
                        {"lower", snap.ranges.lower[f]},
                        {"upper", snap.ranges.upper[f]},
                        {"empty", snap.ranges.empty(f)}});
  }
  nlohmann::json mask = nlohmann::json::array(), accepted = nlohmann::json::array();
  for (std::size_t y = 0; y < snap.accepted.years; ++y) {
    nlohmann::json mrow = nlohmann::json::array(), vrow = nlohmann::json::array();
    for (std::size_t f = 0; f < snap.accepted.features; ++f) {
      mrow.push_back(snap.accepted.is_kept(y, f));
      vrow.push_back(snap.accepted.value(y, f));
    }
    mask.push_back(std::move(mrow));
    accepted.push_back(std::move(vrow));
  }
  return {{"entity", self_normalized.entities().at(0)},
          {"n", snap.ranges.n},
          {"u", 0.0},
          {"years", self_normalized.years()},
          {"features", features},
          {"mask", mask},
          {"accepted", accepted}};
}

inline nlohmann::json table_json(const RankFrequencyTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < t.size(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t e = 0; e < t.size(); ++e) row.push_back(t.count(r, e));
    rows.push_back(std::move(row));
  }
  return {{"measure", to_string(t.measure)}, {"trials", t.trials}, {"entities", t.entities}, {"counts", rows}};
}

inline nlohmann::json summary_json(const TrialSummary& s) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t e = 0; e < s.entities.size(); ++e)
    out.push_back({{"entity", s.entities[e]},
                   {"modal_rank", s.modal_rank[e]},
                   {"top1_share", s.top1_share[e]},
                   {"mean_rank", s.mean_rank[e]}});
  return out;
}

inline nlohmann::json baseline_json(const CorrelationReport& rep, BaselineBasis basis) {
  nlohmann::json entries = nlohmann::json::array(), ordering = nlohmann::json::array();
  for (std::size_t e = 0; e < rep.entities.size(); ++e)
    entries.push_back({{"entity", rep.entities[e]}, {"r", rep.r[e]}});
  for (std::size_t e : rep.ordering) ordering.push_back(rep.entities[e]);
  return {{"basis", to_string(basis)},
          {"entries", entries},
          {"ordering", ordering},
          {"lowest_r", rep.entities[rep.ordering.front()]},
          {"highest_r", rep.entities[rep.ordering.back()]}};
}

/// Entity holding the most rank-1 counts; ties go to the earlier entity.
inline std::string rank1_majority(const RankFrequencyTable& t) {
  std::size_t best = 0;
  for (std::size_t e = 1; e < t.size(); ++e)
    if (t.count(0, e) > t.count(0, best)) best = e;
  return t.entities.at(best);
}

}  // namespace immunoscan
