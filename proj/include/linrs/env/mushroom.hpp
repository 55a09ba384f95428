#pragma once

// UCI Mushroom as a two-armed contextual bandit (arm 0 = eat, 1 = no eat).
//
//                 eat                      no eat
//   edible        +5                       0
//   poisonous     +5 or -35 (p = 0.5)      0

#include <array>
#include <cstddef>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "linrs/bandit.hpp"
#include "linrs/env/environment.hpp"
#include "linrs/error.hpp"

namespace linrs {

namespace mushroom {

inline constexpr std::size_t kAttributes = 22;
inline constexpr std::size_t kEncodedDim = 117;
inline constexpr std::size_t kEat = 0;
inline constexpr std::size_t kNoEat = 1;

inline constexpr double kEdibleReward = 5.0;
inline constexpr double kPoisonWinReward = 5.0;
inline constexpr double kPoisonLossReward = -35.0;
inline constexpr double kPoisonProbability = 0.5;

// Category symbols that occur in the canonical file, per attribute, in the
// order of the dataset documentation. '?' (missing stalk-root) is its own
// category. Together they give 117 indicator columns.
inline constexpr std::array<std::string_view, kAttributes> kVocabulary = {
    "bcxfks",     // cap-shape
    "fgys",       // cap-surface
    "nbcgrpuewy", // cap-color
    "tf",         // bruises
    "alcyfmnps",  // odor
    "af",         // gill-attachment
    "cw",         // gill-spacing
    "bn",         // gill-size
    "knbhgropuewy",  // gill-color
    "et",         // stalk-shape
    "bcer?",      // stalk-root
    "fyks",       // stalk-surface-above-ring
    "fyks",       // stalk-surface-below-ring
    "nbcgopewy",  // stalk-color-above-ring
    "nbcgopewy",  // stalk-color-below-ring
    "p",          // veil-type
    "nowy",       // veil-color
    "not",        // ring-number
    "eflnp",      // ring-type
    "knbhrouwy",  // spore-print-color
    "acnsvy",     // population
    "glmpuwd",    // habitat
};

}  // namespace mushroom

struct MushroomRow {
  bool edible = false;
  std::array<char, mushroom::kAttributes> attributes{};
  Vector features;  // one-hot, mushroom::kEncodedDim entries
};

struct MushroomData {
  std::vector<MushroomRow> rows;
  std::size_t edible = 0;
  std::size_t poisonous = 0;
};

namespace mushroom {

struct Encoder {
  std::array<std::size_t, kAttributes> offsets{};
  std::size_t dim = 0;

  Encoder() {
    for (std::size_t i = 0; i < kAttributes; ++i) {
      offsets[i] = dim;
      dim += symbols(i).size();
    }
  }

  static std::string_view symbols(std::size_t attribute) { return kVocabulary[attribute]; }

  /// Column of (attribute, symbol), or npos when the symbol is unknown.
  std::size_t column(std::size_t attribute, char symbol) const {
    const auto pos = symbols(attribute).find(symbol);
    return pos == std::string_view::npos ? std::string::npos : offsets[attribute] + pos;
  }
};

inline const Encoder& encoder() {
  static const Encoder e;
  return e;
}

}  // namespace mushroom

/// Parses the canonical comma-separated file: class symbol (e/p) followed by
/// 22 single-character attribute symbols per line. Blank lines are skipped.
inline MushroomData load_mushroom(std::istream& in) {
  const auto& enc = mushroom::encoder();
  if (enc.dim != mushroom::kEncodedDim)
    throw FormatError("mushroom: encoded dimension " + std::to_string(enc.dim) + " != 117");
  MushroomData data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != mushroom::kAttributes + 1)
      throw FormatError("mushroom: line " + std::to_string(line_no) + " has " +
                        std::to_string(fields.size()) + " columns, expected 23");
    MushroomRow row;
    if (fields[0] == "e") {
      row.edible = true;
    } else if (fields[0] != "p") {
      throw ParseError("mushroom: line " + std::to_string(line_no) +
                       " column 1: unknown class '" + fields[0] + "'");
    }
    row.features = Vector::Zero(static_cast<Eigen::Index>(enc.dim));
    for (std::size_t i = 0; i < mushroom::kAttributes; ++i) {
      const auto& f = fields[i + 1];
      const std::size_t col = f.size() == 1 ? enc.column(i, f[0]) : std::string::npos;
      if (col == std::string::npos)
        throw ParseError("mushroom: line " + std::to_string(line_no) + " column " +
                         std::to_string(i + 2) + ": unknown symbol '" + f + "'");
      row.attributes[i] = f[0];
      row.features[static_cast<Eigen::Index>(col)] = 1.0;
    }
    (row.edible ? data.edible : data.poisonous) += 1;
    data.rows.push_back(std::move(row));
  }
  return data;
}

inline MushroomData load_mushroom(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("mushroom dataset not found: " + path);
  return load_mushroom(in);
}

inline EnvironmentRound mushroom_round(const MushroomRow& row, Rng& rng) {
  EnvironmentRound round{ContextMatrix::shared(row.features, 2),
                         row.edible ? std::vector<double>{mushroom::kEdibleReward, 0.0}
                                    : std::vector<double>{
                                          mushroom::kPoisonProbability * mushroom::kPoisonWinReward +
                                              (1.0 - mushroom::kPoisonProbability) *
                                                  mushroom::kPoisonLossReward,
                                          0.0},
                         {}};
  round.sample_reward = [edible = row.edible, &rng](std::size_t arm) {
    if (arm == mushroom::kNoEat) return 0.0;
    if (arm != mushroom::kEat) throw InvalidArgument("mushroom: arm out of range");
    if (edible) return mushroom::kEdibleReward;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(rng) < mushroom::kPoisonProbability ? mushroom::kPoisonWinReward
                                                 : mushroom::kPoisonLossReward;
  };
  return round;
}

class MushroomEnvironment final : public Environment {
 public:
  explicit MushroomEnvironment(MushroomData data) : data_(std::move(data)) {
    if (data_.rows.empty()) throw InvalidArgument("MushroomEnvironment: no rows");
  }

  std::string_view name() const override { return "mushroom"; }
  std::size_t arms() const override { return 2; }
  std::size_t dim() const override { return mushroom::kEncodedDim; }
  std::size_t rows() const override { return data_.rows.size(); }
  bool shuffle_rows() const override { return true; }
  EnvironmentRound round(std::size_t row, Rng& rng) const override {
    return mushroom_round(data_.rows.at(row), rng);
  }

  const MushroomData& data() const noexcept { return data_; }

 private:
  MushroomData data_;
};

}  // namespace linrs
