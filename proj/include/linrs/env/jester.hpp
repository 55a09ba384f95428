#pragma once

// Jester joke ratings as an 8-armed contextual bandit: 32 joke ratings form
// the user's context, the remaining 8 jokes are the arms and their ratings
// are the (deterministic) rewards.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "linrs/bandit.hpp"
#include "linrs/env/environment.hpp"
#include "linrs/error.hpp"

namespace linrs {

namespace jester {

inline constexpr double kMinRating = -10.0;
inline constexpr double kMaxRating = 10.0;
inline constexpr double kClampSlack = 1e-6;
// Jester exports mark "not rated" with 99.
inline constexpr double kMissingMarker = 99.0;

}  // namespace jester

/// Which file columns (0-based) hold context ratings and action ratings.
struct JesterColumns {
  std::vector<std::size_t> features;
  std::vector<std::size_t> actions;

  /// First 32 columns are features, the next 8 are actions.
  static JesterColumns standard() {
    JesterColumns c;
    c.features.resize(32);
    std::iota(c.features.begin(), c.features.end(), std::size_t{0});
    c.actions.resize(8);
    std::iota(c.actions.begin(), c.actions.end(), std::size_t{32});
    return c;
  }

  std::size_t required_width() const {
    std::size_t w = 0;
    for (auto c : features) w = std::max(w, c + 1);
    for (auto c : actions) w = std::max(w, c + 1);
    return w;
  }
};

struct JesterRow {
  Vector features;
  std::vector<double> actions;
};

struct JesterData {
  std::vector<JesterRow> rows;
  std::size_t excluded = 0;  // users with a missing rating in the used columns
};

namespace jester {

// Parses one rating cell. Returns NaN for a missing rating.
inline double parse_rating(const std::string& cell, std::size_t line_no, std::size_t col) {
  std::size_t begin = cell.find_first_not_of(" \t");
  if (begin == std::string::npos) return std::nan("");
  std::size_t end = cell.find_last_not_of(" \t");
  const std::string s = cell.substr(begin, end - begin + 1);
  double v = 0.0;
  try {
    std::size_t used = 0;
    v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    throw ParseError("jester: line " + std::to_string(line_no) + " column " +
                     std::to_string(col + 1) + ": not a number '" + s + "'");
  }
  if (std::isnan(v) || v == kMissingMarker) return std::nan("");
  if (v < kMinRating - kClampSlack || v > kMaxRating + kClampSlack)
    throw DataError("jester: line " + std::to_string(line_no) + " column " +
                    std::to_string(col + 1) + ": rating " + s + " outside [-10, 10]");
  return std::clamp(v, kMinRating, kMaxRating);
}

}  // namespace jester

/// One user per line, comma-separated ratings. Users with any missing rating
/// among the selected columns are excluded.
inline JesterData load_jester(std::istream& in, const JesterColumns& columns = JesterColumns::standard()) {
  if (columns.features.empty() || columns.actions.empty())
    throw ConfigError("jester: column lists must be non-empty");
  const std::size_t width = columns.required_width();
  JesterData data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() < width)
      throw FormatError("jester: line " + std::to_string(line_no) + " has " +
                        std::to_string(cells.size()) + " columns, needs " + std::to_string(width));

    JesterRow row;
    row.features.resize(static_cast<Eigen::Index>(columns.features.size()));
    row.actions.resize(columns.actions.size());
    bool complete = true;
    for (std::size_t i = 0; i < columns.features.size(); ++i) {
      const double v = jester::parse_rating(cells[columns.features[i]], line_no, columns.features[i]);
      complete = complete && !std::isnan(v);
      row.features[static_cast<Eigen::Index>(i)] = v;
    }
    for (std::size_t i = 0; i < columns.actions.size(); ++i) {
      const double v = jester::parse_rating(cells[columns.actions[i]], line_no, columns.actions[i]);
      complete = complete && !std::isnan(v);
      row.actions[i] = v;
    }
    if (complete)
      data.rows.push_back(std::move(row));
    else
      ++data.excluded;
  }
  return data;
}

inline JesterData load_jester(const std::string& path,
                              const JesterColumns& columns = JesterColumns::standard()) {
  std::ifstream in(path);
  if (!in) throw DataError("jester dataset not found: " + path);
  return load_jester(in, columns);
}

inline EnvironmentRound jester_round(const JesterRow& row) {
  EnvironmentRound round{ContextMatrix::shared(row.features, row.actions.size()), row.actions, {}};
  round.sample_reward = [ratings = row.actions](std::size_t arm) { return ratings.at(arm); };
  return round;
}

class JesterEnvironment final : public Environment {
 public:
  explicit JesterEnvironment(JesterData data) : data_(std::move(data)) {
    if (data_.rows.empty()) throw InvalidArgument("JesterEnvironment: no rows");
  }

  std::string_view name() const override { return "jester"; }
  std::size_t arms() const override { return data_.rows.front().actions.size(); }
  std::size_t dim() const override {
    return static_cast<std::size_t>(data_.rows.front().features.size());
  }
  std::size_t rows() const override { return data_.rows.size(); }
  bool shuffle_rows() const override { return true; }
  EnvironmentRound round(std::size_t row, Rng&) const override {
    return jester_round(data_.rows.at(row));
  }

  const JesterData& data() const noexcept { return data_; }

 private:
  JesterData data_;
};

}  // namespace linrs
