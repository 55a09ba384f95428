#pragma once

#include <cstddef>
#include <string_view>

#include "linrs/bandit.hpp"

namespace linrs {

/// Immutable source of bandit rounds. Row presentation order is chosen by the
/// harness; rng drives reward realization only.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t arms() const = 0;
  virtual std::size_t dim() const = 0;
  virtual std::size_t rows() const = 0;
  /// Whether replications see rows in a seeded random order.
  virtual bool shuffle_rows() const = 0;
  /// The returned sampler may draw from rng and must not outlive it.
  virtual EnvironmentRound round(std::size_t row, Rng& rng) const = 0;
};

}  // namespace linrs
