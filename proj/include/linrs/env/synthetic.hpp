#pragma once

// Linear-sigmoid synthetic environment with a constant optimal aspiration level.
//
// Reward probability of arm a in round t:
//     p_{t,a} = sigmoid(x_{t,a}^T theta*_a + eps_t),   eps_t ~ N(0, noise_var)
// with theta*_a ~ N(0, sigma I) and contexts uniform in [0, 1]^d. A dataset
// keeps only rounds where p_first > aleph_opt > p_second, so the midpoint
// aspiration separates the optimal arm from the rest in every row.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "linrs/bandit.hpp"
#include "linrs/env/environment.hpp"
#include "linrs/error.hpp"
#include "linrs/numerics.hpp"

namespace linrs {

struct SyntheticSpec {
  std::size_t dim = 128;
  std::size_t arms = 8;
  double sigma = 0.01;      // per-coordinate variance of theta*
  double noise_var = 0.1;   // variance of the shared per-round eps
  double aleph_opt = 0.5;
  std::size_t rows = 50000;
  std::uint64_t seed = 0;

  // theta* search: each draw is scored on a pilot of candidate rounds; the
  // search stops at the first draw reaching target_acceptance or when the
  // candidate budget is spent, keeping the best draw seen.
  std::size_t pilot_draws = 20000;
  double target_acceptance = 0.01;
  std::uint64_t candidate_budget = 10'000'000;
  double min_acceptance = 1e-6;

  void validate() const {
    if (dim == 0) throw ConfigError("synthetic: d must be positive");
    if (arms < 2) throw ConfigError("synthetic: k must be at least 2");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("synthetic: sigma must be positive");
    if (!(noise_var > 0.0) || !std::isfinite(noise_var))
      throw ConfigError("synthetic: noise_var must be positive");
    if (!(aleph_opt > 0.0 && aleph_opt < 1.0))
      throw ConfigError("synthetic: aleph_opt must lie in (0, 1)");
    if (pilot_draws == 0) throw ConfigError("synthetic: pilot_draws must be positive");
  }
};

struct FilteredDataset {
  SyntheticSpec spec;
  std::vector<float> contexts;  // rows x arms x dim, row-major
  std::vector<double> means;    // rows x arms
  std::vector<Vector> parameters;  // theta*_a; empty when loaded from file
  std::uint64_t candidates = 0;
  double acceptance_rate = 0.0;

  std::size_t rows() const noexcept {
    return spec.arms == 0 ? 0 : means.size() / spec.arms;
  }

  std::span<const float> context_block(std::size_t row) const {
    const std::size_t block = spec.arms * spec.dim;
    return {contexts.data() + row * block, block};
  }

  std::span<const double> row_means(std::size_t row) const {
    return {means.data() + row * spec.arms, spec.arms};
  }

  ContextMatrix context_matrix(std::size_t row) const {
    const auto block = context_block(row);
    RowMajorMatrix m(static_cast<Eigen::Index>(spec.arms), static_cast<Eigen::Index>(spec.dim));
    for (std::size_t i = 0; i < block.size(); ++i) m.data()[i] = static_cast<double>(block[i]);
    return ContextMatrix(std::move(m));
  }
};

/// k independent draws of N(0, sigma I).
inline std::vector<Vector> sample_parameters(const SyntheticSpec& spec, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(spec.sigma));
  std::vector<Vector> params;
  params.reserve(spec.arms);
  for (std::size_t a = 0; a < spec.arms; ++a) {
    Vector theta(static_cast<Eigen::Index>(spec.dim));
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta[i] = normal(rng);
    params.push_back(std::move(theta));
  }
  return params;
}

/// sigmoid(x_a^T theta_a + noise) for every arm, with one shared noise draw.
inline std::vector<double> true_means(const ContextMatrix& contexts,
                                      std::span<const Vector> params, double noise) {
  if (params.size() != contexts.arms())
    throw InvalidArgument("true_means: parameter count does not match arms");
  std::vector<double> p(contexts.arms());
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (static_cast<std::size_t>(params[a].size()) != contexts.dim())
      throw InvalidArgument("true_means: parameter dimension mismatch");
    p[a] = sigmoid(contexts.row(a).dot(params[a]) + noise);
  }
  return p;
}

/// Strict bracket p_first > aleph > p_second.
inline bool passes_filter(std::span<const double> means, double aleph) {
  if (means.size() < 2) return false;
  double first = -std::numeric_limits<double>::infinity();
  double second = first;
  for (double p : means) {
    if (p > first) {
      second = first;
      first = p;
    } else if (p > second) {
      second = p;
    }
  }
  return first > aleph && aleph > second;
}

namespace detail {

// Draws one candidate round into (contexts, means); contexts are rounded to
// float so stored rows reproduce their means exactly.
inline void draw_candidate(const SyntheticSpec& spec, std::span<const Vector> params, Rng& rng,
                           std::vector<float>& contexts, std::vector<double>& means) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, std::sqrt(spec.noise_var));
  for (auto& c : contexts) c = static_cast<float>(uniform(rng));
  const double eps = noise(rng);
  for (std::size_t a = 0; a < spec.arms; ++a) {
    const float* x = contexts.data() + a * spec.dim;
    const Vector& theta = params[a];
    double z = 0.0;
    for (std::size_t i = 0; i < spec.dim; ++i)
      z += static_cast<double>(x[i]) * theta[static_cast<Eigen::Index>(i)];
    means[a] = sigmoid(z + eps);
  }
}

}  // namespace detail

inline FilteredDataset build_filtered_dataset(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<float> ctx(spec.arms * spec.dim);
  std::vector<double> means(spec.arms);

  FilteredDataset out;
  out.spec = spec;
  if (spec.rows == 0) return out;

  // theta* search
  std::uint64_t spent = 0;
  double best_rate = -1.0;
  std::vector<Vector> best_params;
  std::vector<float> best_ctx;
  std::vector<double> best_means;
  std::uint64_t best_draws = 0;
  while (spent < spec.candidate_budget) {
    auto params = sample_parameters(spec, rng);
    const std::uint64_t draws = std::min<std::uint64_t>(spec.pilot_draws, spec.candidate_budget - spent);
    std::vector<float> kept_ctx;
    std::vector<double> kept_means;
    std::uint64_t accepted = 0;
    for (std::uint64_t i = 0; i < draws; ++i) {
      detail::draw_candidate(spec, params, rng, ctx, means);
      if (passes_filter(means, spec.aleph_opt)) {
        ++accepted;
        if (kept_means.size() / spec.arms < spec.rows) {
          kept_ctx.insert(kept_ctx.end(), ctx.begin(), ctx.end());
          kept_means.insert(kept_means.end(), means.begin(), means.end());
        }
      }
    }
    spent += draws;
    const double rate = static_cast<double>(accepted) / static_cast<double>(draws);
    if (rate > best_rate) {
      best_rate = rate;
      best_params = std::move(params);
      best_ctx = std::move(kept_ctx);
      best_means = std::move(kept_means);
      best_draws = draws;
    }
    if (rate >= spec.target_acceptance) break;
  }

  auto infeasible = [&](double rate) {
    std::ostringstream msg;
    msg << "synthetic filter infeasible: acceptance rate " << rate << " below "
        << spec.min_acceptance << " (sigma=" << spec.sigma << ", aleph_opt=" << spec.aleph_opt
        << ", d=" << spec.dim << ", k=" << spec.arms << ")";
    return InfeasibleError(msg.str());
  };
  if (best_rate < spec.min_acceptance || best_means.empty()) throw infeasible(std::max(best_rate, 0.0));

  out.parameters = std::move(best_params);
  out.contexts = std::move(best_ctx);
  out.means = std::move(best_means);
  std::uint64_t drawn = best_draws;
  std::uint64_t accepted = out.rows();
  out.contexts.reserve(spec.rows * spec.arms * spec.dim);
  out.means.reserve(spec.rows * spec.arms);
  while (out.rows() < spec.rows) {
    detail::draw_candidate(spec, out.parameters, rng, ctx, means);
    ++drawn;
    if (passes_filter(means, spec.aleph_opt)) {
      ++accepted;
      out.contexts.insert(out.contexts.end(), ctx.begin(), ctx.end());
      out.means.insert(out.means.end(), means.begin(), means.end());
    }
    if (drawn >= spec.candidate_budget &&
        static_cast<double>(accepted) / static_cast<double>(drawn) < spec.min_acceptance)
      throw infeasible(static_cast<double>(accepted) / static_cast<double>(drawn));
  }
  out.candidates = spent + (drawn - best_draws);
  out.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(drawn);
  return out;
}

/// Bernoulli(p) reward.
inline double bernoulli_reward(double p, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng) < p ? 1.0 : 0.0;
}

/// Round for step t (rows consumed in order, wrapping past the end).
inline EnvironmentRound environment_round(const FilteredDataset& dataset, std::size_t t, Rng& rng) {
  const std::size_t n = dataset.rows();
  if (n == 0) throw InvalidArgument("environment_round: empty dataset");
  const std::size_t row = t % n;
  const auto means = dataset.row_means(row);
  EnvironmentRound round{dataset.context_matrix(row),
                         std::vector<double>(means.begin(), means.end()), {}};
  round.sample_reward = [p = round.true_means, &rng](std::size_t arm) {
    return bernoulli_reward(p.at(arm), rng);
  };
  return round;
}

class SyntheticEnvironment final : public Environment {
 public:
  explicit SyntheticEnvironment(FilteredDataset dataset) : data_(std::move(dataset)) {
    if (data_.rows() == 0) throw InvalidArgument("SyntheticEnvironment: empty dataset");
  }

  std::string_view name() const override { return "synthetic"; }
  std::size_t arms() const override { return data_.spec.arms; }
  std::size_t dim() const override { return data_.spec.dim; }
  std::size_t rows() const override { return data_.rows(); }
  bool shuffle_rows() const override { return false; }
  EnvironmentRound round(std::size_t row, Rng& rng) const override {
    return environment_round(data_, row, rng);
  }

  const FilteredDataset& dataset() const noexcept { return data_; }

 private:
  FilteredDataset data_;
};

/// Knows theta* and picks argmax_a x_a^T theta*_a. The shared noise term
/// is monotone across arms, so this is the arm with the largest mean.
class SyntheticOracle final : public Policy {
 public:
  explicit SyntheticOracle(std::vector<Vector> parameters) : params_(std::move(parameters)) {}

  std::string_view name() const override { return "oracle"; }
  std::size_t select(const ContextMatrix& ctx) override { return greedy_arm(ctx); }
  void observe(const ContextMatrix&, std::size_t, double) override {}
  std::size_t greedy_arm(const ContextMatrix& ctx) const override {
    if (params_.size() != ctx.arms()) throw InvalidArgument("SyntheticOracle: arm count mismatch");
    std::vector<double> z(ctx.arms());
    for (std::size_t a = 0; a < z.size(); ++a) z[a] = ctx.row(a).dot(params_[a]);
    return argmax(std::span<const double>(z));
  }
  void reset(std::uint64_t) override {}

 private:
  std::vector<Vector> params_;
};

// ---------------------------------------------------------------------------
// Binary dataset file (little-endian):
//   magic "LINRSDS1"
//   u64 d, u64 k, u64 n, f64 aleph_opt, u64 seed, f64 sigma, f64 noise_var
//   n rows of: k*d f32 contexts, k f64 means
// ---------------------------------------------------------------------------

inline constexpr char kDatasetMagic[8] = {'L', 'I', 'N', 'R', 'S', 'D', 'S', '1'};

namespace detail {

static_assert(std::endian::native == std::endian::little,
              "dataset files are written in native little-endian order");

template <class T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw FormatError("dataset file: truncated header");
  return v;
}

}  // namespace detail

inline void save_dataset(std::ostream& out, const FilteredDataset& data) {
  out.write(kDatasetMagic, sizeof(kDatasetMagic));
  detail::write_pod<std::uint64_t>(out, data.spec.dim);
  detail::write_pod<std::uint64_t>(out, data.spec.arms);
  detail::write_pod<std::uint64_t>(out, data.rows());
  detail::write_pod<double>(out, data.spec.aleph_opt);
  detail::write_pod<std::uint64_t>(out, data.spec.seed);
  detail::write_pod<double>(out, data.spec.sigma);
  detail::write_pod<double>(out, data.spec.noise_var);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto block = data.context_block(r);
    out.write(reinterpret_cast<const char*>(block.data()),
              static_cast<std::streamsize>(block.size() * sizeof(float)));
    const auto m = data.row_means(r);
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(m.size() * sizeof(double)));
  }
  if (!out) throw DataError("dataset file: write failed");
}

inline void save_dataset(const std::string& path, const FilteredDataset& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open for writing: " + path);
  save_dataset(out, data);
}

inline FilteredDataset load_dataset(std::istream& in) {
  char magic[sizeof(kDatasetMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kDatasetMagic, sizeof(magic)) != 0)
    throw FormatError("dataset file: bad magic");
  FilteredDataset data;
  data.spec.dim = detail::read_pod<std::uint64_t>(in);
  data.spec.arms = detail::read_pod<std::uint64_t>(in);
  const auto n = detail::read_pod<std::uint64_t>(in);
  data.spec.aleph_opt = detail::read_pod<double>(in);
  data.spec.seed = detail::read_pod<std::uint64_t>(in);
  data.spec.sigma = detail::read_pod<double>(in);
  data.spec.noise_var = detail::read_pod<double>(in);
  data.spec.rows = n;
  if (data.spec.dim == 0 || data.spec.arms == 0) throw FormatError("dataset file: zero shape");
  const std::size_t row_bytes = data.spec.arms * (data.spec.dim * sizeof(float) + sizeof(double));
  const auto here = in.tellg();
  if (here != std::streampos(-1)) {
    in.seekg(0, std::ios::end);
    const auto remaining = static_cast<std::uint64_t>(in.tellg() - here);
    in.seekg(here);
    if (remaining != n * row_bytes)
      throw FormatError("dataset file: header declares " + std::to_string(n) + " rows but body holds " +
                        std::to_string(remaining) + " bytes");
  }
  data.contexts.resize(n * data.spec.arms * data.spec.dim);
  data.means.resize(n * data.spec.arms);
  const std::size_t block = data.spec.arms * data.spec.dim;
  for (std::size_t r = 0; r < n; ++r) {
    in.read(reinterpret_cast<char*>(data.contexts.data() + r * block),
            static_cast<std::streamsize>(block * sizeof(float)));
    in.read(reinterpret_cast<char*>(data.means.data() + r * data.spec.arms),
            static_cast<std::streamsize>(data.spec.arms * sizeof(double)));
    if (!in) throw FormatError("dataset file: truncated at row " + std::to_string(r));
  }
  return data;
}

inline FilteredDataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("dataset not found: " + path);
  return load_dataset(in);
}

}  // namespace linrs
