#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "immunoscan/error.hpp"

namespace immunoscan {

/// Dense entity x year x feature tensor. Values are stored row-major with the
/// feature axis fastest, so one entity's (year, feature) matrix is contiguous.
class FeaturePanel {
 public:
  FeaturePanel() = default;

  FeaturePanel(std::vector<std::string> entities, std::vector<int> years,
               std::vector<std::string> features, std::vector<double> values)
      : entities_(std::move(entities)),
        years_(std::move(years)),
        features_(std::move(features)),
        values_(std::move(values)) {
    validate();
  }

  const std::vector<std::string>& entities() const noexcept { return entities_; }
  const std::vector<int>& years() const noexcept { return years_; }
  const std::vector<std::string>& features() const noexcept { return features_; }
  std::span<const double> values() const noexcept { return values_; }

  std::size_t entity_count() const noexcept { return entities_.size(); }
  std::size_t year_count() const noexcept { return years_.size(); }
  std::size_t feature_count() const noexcept { return features_.size(); }

  double at(std::size_t entity, std::size_t year, std::size_t feature) const {
    return values_[index(entity, year, feature)];
  }

  /// Year-ordered series of one (entity, feature) pair.
  std::vector<double> series(std::size_t entity, std::size_t feature) const {
    std::vector<double> out(year_count());
    for (std::size_t y = 0; y < year_count(); ++y) out[y] = at(entity, y, feature);
    return out;
  }

  /// years x features block of one entity.
  std::span<const double> entity_block(std::size_t entity) const {
    const std::size_t stride = year_count() * feature_count();
    return std::span<const double>(values_).subspan(entity * stride, stride);
  }

  std::optional<std::size_t> find_entity(std::string_view id) const {
    auto it = std::find(entities_.begin(), entities_.end(), id);
    if (it == entities_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - entities_.begin());
  }

  /// Sub-panel holding the listed entities, in the listed order.
  FeaturePanel select(std::span<const std::size_t> entity_indices) const {
    std::vector<std::string> ids;
    std::vector<double> vals;
    ids.reserve(entity_indices.size());
    vals.reserve(entity_indices.size() * year_count() * feature_count());
    for (std::size_t e : entity_indices) {
      if (e >= entity_count()) throw Error(ErrorKind::not_found, "entity index out of range");
      ids.push_back(entities_[e]);
      auto block = entity_block(e);
      vals.insert(vals.end(), block.begin(), block.end());
    }
    return FeaturePanel(std::move(ids), years_, features_, std::move(vals));
  }

  /// Same axes, different values. Used by transforms that keep the shape.
  FeaturePanel with_values(std::vector<double> values) const {
    return FeaturePanel(entities_, years_, features_, std::move(values));
  }

  bool same_axes(const FeaturePanel& other) const {
    return years_ == other.years_ && features_ == other.features_;
  }

  friend bool operator==(const FeaturePanel&, const FeaturePanel&) = default;

 private:
  std::size_t index(std::size_t e, std::size_t y, std::size_t f) const {
    return (e * year_count() + y) * feature_count() + f;
  }

  void validate() const {
    if (values_.size() != entities_.size() * years_.size() * features_.size())
      throw Error(ErrorKind::invalid_panel, "value count does not match axis sizes");
    if (std::unordered_set<std::string>(entities_.begin(), entities_.end()).size() !=
        entities_.size())
      throw Error(ErrorKind::invalid_panel, "duplicate entity identifier");
    if (std::unordered_set<std::string>(features_.begin(), features_.end()).size() !=
        features_.size())
      throw Error(ErrorKind::invalid_panel, "duplicate feature name");
    for (std::size_t i = 1; i < years_.size(); ++i)
      if (years_[i] <= years_[i - 1])
        throw Error(ErrorKind::invalid_panel, "years must be strictly increasing");
    for (double v : values_)
      if (!std::isfinite(v)) throw Error(ErrorKind::invalid_panel, "non-finite value");
  }

  std::vector<std::string> entities_;
  std::vector<int> years_;
  std::vector<std::string> features_;
  std::vector<double> values_;
};

struct PanelSplit {
  FeaturePanel self_panel;
  FeaturePanel nonself_panel;
};

inline constexpr std::string_view kPanelCsvHeader = "entity,year,feature,value";

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

inline void write_double(std::ostream& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, ptr - buf);
}

}  // namespace detail

/// Reads the long format `entity,year,feature,value`. Entities and features
/// keep first-appearance order, years are sorted ascending.
inline FeaturePanel parse_panel_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto strip_cr = [](std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  };

  if (!std::getline(in, line)) throw Error(ErrorKind::parse, "line 1: missing header");
  ++line_no;
  strip_cr(line);
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (line != kPanelCsvHeader)
    throw Error(ErrorKind::parse, "line 1: header must be '" + std::string(kPanelCsvHeader) + "'");

  std::vector<std::string> entities, features;
  std::unordered_map<std::string, std::size_t> entity_idx, feature_idx;
  std::map<int, std::size_t> year_set;
  struct Cell {
    std::size_t e;
    int year;
    std::size_t f;
    double v;
    std::size_t line;
  };
  std::vector<Cell> cells;

  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    auto fields = detail::split_fields(line);
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (fields.size() != 4)
      throw Error(ErrorKind::parse,
                  where + "expected 4 columns, got " + std::to_string(fields.size()));
    if (fields[0].empty()) throw Error(ErrorKind::parse, where + "empty entity");
    if (fields[2].empty()) throw Error(ErrorKind::parse, where + "empty feature");
    auto year = detail::parse_number<int>(fields[1]);
    if (!year) throw Error(ErrorKind::parse, where + "non-integer year '" + std::string(fields[1]) + "'");
    auto value = detail::parse_number<double>(fields[3]);
    if (!value || !std::isfinite(*value))
      throw Error(ErrorKind::parse, where + "non-numeric value '" + std::string(fields[3]) + "'");

    auto intern = [](std::string_view key, std::vector<std::string>& names,
                     std::unordered_map<std::string, std::size_t>& idx) {
      auto [it, inserted] = idx.try_emplace(std::string(key), names.size());
      if (inserted) names.emplace_back(key);
      return it->second;
    };
    std::size_t e = intern(fields[0], entities, entity_idx);
    std::size_t f = intern(fields[2], features, feature_idx);
    year_set.emplace(*year, 0);
    cells.push_back({e, *year, f, *value, line_no});
  }

  std::vector<int> years;
  for (auto& [y, slot] : year_set) {
    slot = years.size();
    years.push_back(y);
  }

  const std::size_t total = entities.size() * years.size() * features.size();
  std::vector<double> values(total, 0.0);
  std::vector<std::size_t> seen(total, 0);
  for (const auto& c : cells) {
    std::size_t idx = (c.e * years.size() + year_set.at(c.year)) * features.size() + c.f;
    if (seen[idx] != 0)
      throw Error(ErrorKind::duplicate_cell,
                  "line " + std::to_string(c.line) + ": (" + entities[c.e] + ", " +
                      std::to_string(c.year) + ", " + features[c.f] + ") already given on line " +
                      std::to_string(seen[idx]));
    seen[idx] = c.line;
    values[idx] = c.v;
  }
  for (std::size_t e = 0; e < entities.size(); ++e)
    for (std::size_t y = 0; y < years.size(); ++y)
      for (std::size_t f = 0; f < features.size(); ++f)
        if (seen[(e * years.size() + y) * features.size() + f] == 0)
          throw Error(ErrorKind::incomplete_panel, "no value for (" + entities[e] + ", " +
                                                       std::to_string(years[y]) + ", " +
                                                       features[f] + ")");
  if (total == 0) throw Error(ErrorKind::incomplete_panel, "panel has no rows");

  return FeaturePanel(std::move(entities), std::move(years), std::move(features),
                      std::move(values));
}

/// Writes one row per cell in entity, year, feature order. Values use the
/// shortest representation that round-trips.
inline void write_panel_csv(std::ostream& out, const FeaturePanel& panel) {
  auto check = [](const std::string& id) {
    if (id.empty() || id.find_first_of(",\r\n") != std::string::npos)
      throw Error(ErrorKind::invalid_panel, "identifier not representable in CSV: '" + id + "'");
  };
  for (const auto& e : panel.entities()) check(e);
  for (const auto& f : panel.features()) check(f);

  out << kPanelCsvHeader << '\n';
  for (std::size_t e = 0; e < panel.entity_count(); ++e)
    for (std::size_t y = 0; y < panel.year_count(); ++y)
      for (std::size_t f = 0; f < panel.feature_count(); ++f) {
        out << panel.entities()[e] << ',' << panel.years()[y] << ',' << panel.features()[f] << ',';
        detail::write_double(out, panel.at(e, y, f));
        out << '\n';
      }
}

inline PanelSplit split_self_nonself(const FeaturePanel& panel, std::string_view self_id) {
  auto self_index = panel.find_entity(self_id);
  if (!self_index) throw Error(ErrorKind::not_found, "'" + std::string(self_id) + "'");
  if (panel.entity_count() < 2)
    throw Error(ErrorKind::no_candidates, "panel holds only the self entity");

  std::vector<std::size_t> others;
  for (std::size_t e = 0; e < panel.entity_count(); ++e)
    if (e != *self_index) others.push_back(e);
  const std::size_t self_only[] = {*self_index};
  return {panel.select(self_only), panel.select(others)};
}

}  // namespace immunoscan
