#pragma once

/*
 Synthetic multi-output-dependence data and the single- to multi-output
 derivation transform.

 Synthetic data: c centroids in input space, each holding one or more
 probability vectors (distributions over complete output vectors). An
 instance picks a centroid uniformly, perturbs its center, picks one of the
 centroid's probability vectors uniformly and samples an output vector from
 it. Several probability vectors per centroid make one region of input space
 carry several correct output vectors.

   real:    centers uniform in [0,1]^n, Gaussian(0, sigma) perturbation
   nominal: centers uniform over {0,1,2,3}, perturbation uniform over
            {-1,0,+1}, clamped back to [0,3]

 ceil(multiplier * c) probability vectors are dealt round-robin to the
 centroids, so every centroid gets at least one. Each distribution has a
 support of 2-4 distinct output vectors with flat-Dirichlet weights.
*/

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hmonn/dataset.hpp"
#include "hmonn/error.hpp"
#include "hmonn/seed.hpp"

namespace hmonn {

enum class FeatureType { Real, Nominal };

inline const char* to_string(FeatureType t) { return t == FeatureType::Real ? "real" : "nominal"; }

struct SyntheticConfig {
  FeatureType kind = FeatureType::Real;
  std::size_t outputs = 2;
  std::int32_t values_per_output = 4;
  std::size_t centroids = 2;
  double multiplier = 1.0;
  std::size_t instances = 5000;
  double sigma = 0.05;  // real kind only
  std::uint64_t seed = 0;

  static constexpr std::int32_t kNominalInputArity = 4;

  [[nodiscard]] std::size_t input_count() const noexcept { return 3 * outputs; }

  [[nodiscard]] std::size_t probability_vector_count() const {
    return static_cast<std::size_t>(std::ceil(multiplier * static_cast<double>(centroids) - 1e-9));
  }

  void validate() const {
    if (outputs < 1) throw PreconditionError("synthetic config needs at least one output");
    if (values_per_output < 2) throw PreconditionError("outputs need at least 2 values");
    if (centroids < 1) throw PreconditionError("synthetic config needs at least one centroid");
    if (!(multiplier >= 1.0)) throw PreconditionError("probability-vector multiplier must be at least 1");
    const double pv = multiplier * static_cast<double>(centroids);
    if (std::fabs(pv - std::round(pv)) > 1e-9)
      throw PreconditionError("multiplier x centroids must be an integer");
    if (instances < 1) throw PreconditionError("synthetic config needs at least one instance");
    if (kind == FeatureType::Real && !(sigma >= 0.0)) throw PreconditionError("sigma must be non-negative");
  }

  [[nodiscard]] std::string digest() const {
    std::ostringstream s;
    s << "synthetic kind=" << to_string(kind) << " outputs=" << outputs << " values=" << values_per_output
      << " centroids=" << centroids << " multiplier=" << multiplier << " instances=" << instances;
    if (kind == FeatureType::Real) s << " sigma=" << sigma;
    s << " seed=" << seed;
    return s.str();
  }
};

struct ProbabilityVector {
  std::vector<OutputVector> support;  // distinct output vectors
  std::vector<double> weights;        // sums to 1
};

struct Centroid {
  std::vector<double> center;  // nominal kind: integral values in {0..3}
  std::vector<ProbabilityVector> distributions;
};

namespace detail {

template <class Rng>
ProbabilityVector random_distribution(const SyntheticConfig& cfg, Rng& rng) {
  // Distinct output vectors available: values^outputs (capped to avoid overflow).
  double space = std::pow(static_cast<double>(cfg.values_per_output), static_cast<double>(cfg.outputs));
  const std::size_t max_support = static_cast<std::size_t>(std::min(4.0, space));
  std::uniform_int_distribution<std::size_t> size_dist(std::min<std::size_t>(2, max_support), max_support);
  std::uniform_int_distribution<std::int32_t> value(0, cfg.values_per_output - 1);
  std::exponential_distribution<double> gamma1(1.0);

  ProbabilityVector pv;
  const std::size_t s = size_dist(rng);
  while (pv.support.size() < s) {
    OutputVector y(cfg.outputs);
    for (auto& v : y) v = value(rng);
    if (std::find(pv.support.begin(), pv.support.end(), y) == pv.support.end()) pv.support.push_back(std::move(y));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    pv.weights.push_back(gamma1(rng));
    total += pv.weights.back();
  }
  for (auto& w : pv.weights) w /= total;
  return pv;
}

template <class Rng>
std::size_t sample_index(const std::vector<double>& weights, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = u(rng), acc = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    acc += weights[i];
    if (r < acc) return i;
  }
  return weights.size() - 1;
}

}  // namespace detail

// The hidden generative structure of a synthetic dataset.
inline std::vector<Centroid> synthetic_centroids(const SyntheticConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(derive_seed(cfg.seed, {1}));
  std::vector<Centroid> cs(cfg.centroids);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> level(0, SyntheticConfig::kNominalInputArity - 1);
  for (auto& c : cs) {
    c.center.resize(cfg.input_count());
    for (auto& x : c.center) x = cfg.kind == FeatureType::Real ? unit(rng) : static_cast<double>(level(rng));
  }
  const std::size_t pvs = cfg.probability_vector_count();
  for (std::size_t p = 0; p < pvs; ++p) cs[p % cfg.centroids].distributions.push_back(detail::random_distribution(cfg, rng));
  return cs;
}

inline Schema synthetic_schema(const SyntheticConfig& cfg) {
  std::vector<Column> in, out;
  for (std::size_t i = 0; i < cfg.input_count(); ++i)
    in.push_back({"x" + std::to_string(i), cfg.kind == FeatureType::Real
                                              ? real_kind()
                                              : nominal_kind(SyntheticConfig::kNominalInputArity)});
  for (std::size_t j = 0; j < cfg.outputs; ++j) out.push_back({"y" + std::to_string(j), nominal_kind(cfg.values_per_output)});
  return Schema(std::move(in), std::move(out));
}

inline Dataset generate_synthetic(const SyntheticConfig& cfg) {
  const auto centroids = synthetic_centroids(cfg);
  std::mt19937_64 rng(derive_seed(cfg.seed, {2}));
  std::uniform_int_distribution<std::size_t> pick_centroid(0, centroids.size() - 1);
  std::normal_distribution<double> noise(0.0, cfg.sigma);
  std::uniform_int_distribution<int> step(-1, 1);

  std::vector<Instance> rows;
  rows.reserve(cfg.instances);
  for (std::size_t n = 0; n < cfg.instances; ++n) {
    const Centroid& c = centroids[pick_centroid(rng)];
    Instance inst;
    inst.inputs.reserve(c.center.size());
    for (double x : c.center) {
      if (cfg.kind == FeatureType::Real) {
        inst.inputs.emplace_back(cfg.sigma > 0.0 ? x + noise(rng) : x);
      } else {
        const int v = std::clamp(static_cast<int>(x) + step(rng), 0, SyntheticConfig::kNominalInputArity - 1);
        inst.inputs.emplace_back(static_cast<std::int32_t>(v));
      }
    }
    std::uniform_int_distribution<std::size_t> pick_pv(0, c.distributions.size() - 1);
    const ProbabilityVector& pv = c.distributions[pick_pv(rng)];
    inst.outputs = pv.support[detail::sample_index(pv.weights, rng)];
    rows.push_back(std::move(inst));
  }
  return Dataset(synthetic_schema(cfg), std::move(rows), cfg.digest());
}

inline Dataset generate_real(SyntheticConfig cfg) {
  if (cfg.kind != FeatureType::Real) throw PreconditionError("generate_real needs a real-kind config");
  return generate_synthetic(cfg);
}

inline Dataset generate_nominal(SyntheticConfig cfg) {
  if (cfg.kind != FeatureType::Nominal) throw PreconditionError("generate_nominal needs a nominal-kind config");
  return generate_synthetic(cfg);
}

inline constexpr std::size_t kGridOutputs[] = {2, 3, 4};
inline constexpr std::size_t kGridCentroids[] = {2, 4, 6, 8};
inline constexpr double kGridMultipliers[] = {1.0, 1.5, 2.0};

// The 36 configurations: outputs {2,3,4} x centroids {2,4,6,8} x multiplier
// {1, 1.5, 2}, in that nesting order, each with its own derived seed.
inline std::vector<SyntheticConfig> grid_configs(FeatureType kind, std::uint64_t master_seed, double sigma = 0.05,
                                                 std::size_t instances = 5000) {
  std::vector<SyntheticConfig> out;
  for (auto o : kGridOutputs)
    for (auto c : kGridCentroids)
      for (auto m : kGridMultipliers) {
        SyntheticConfig cfg;
        cfg.kind = kind;
        cfg.outputs = o;
        cfg.centroids = c;
        cfg.multiplier = m;
        cfg.instances = instances;
        cfg.sigma = sigma;
        cfg.seed = derive_seed(master_seed, {static_cast<std::uint64_t>(kind), o, c, static_cast<std::uint64_t>(m * 2)});
        out.push_back(cfg);
      }
  return out;
}

inline std::vector<Dataset> generate_grid(FeatureType kind, std::uint64_t master_seed, double sigma = 0.05,
                                          std::size_t instances = 5000) {
  std::vector<Dataset> out;
  for (const auto& cfg : grid_configs(kind, master_seed, sigma, instances)) out.push_back(generate_synthetic(cfg));
  return out;
}

// ---------------------------------------------------------------------------
// Derivation of multi-output datasets from single-output ones.

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline std::vector<std::size_t> nominal_input_positions(const Schema& s) {
  std::vector<std::size_t> pos;
  for (std::size_t i = 0; i < s.input_count(); ++i)
    if (s.inputs()[i].nominal()) pos.push_back(i);
  return pos;
}

inline void check_derivable(const Dataset& d, std::size_t num_outputs) {
  if (num_outputs < 2 || num_outputs > 4) throw PreconditionError("derived datasets have 2, 3 or 4 outputs");
  if (d.schema().output_count() != 1) throw PreconditionError("derivation needs a single-output dataset");
  if (d.schema().nominal_input_count() < num_outputs - 1)
    throw PreconditionError("too few nominal input features: need " + std::to_string(num_outputs - 1) + ", have " +
                            std::to_string(d.schema().nominal_input_count()));
}

// Every (num_outputs - 1)-subset of the nominal input columns, as input
// positions, in lexicographic order.
inline std::vector<std::vector<std::size_t>> derivation_subsets(const Dataset& d, std::size_t num_outputs) {
  check_derivable(d, num_outputs);
  const auto nominal = nominal_input_positions(d.schema());
  const std::size_t r = num_outputs - 1;
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  const std::size_t n = nominal.size();
  while (true) {
    std::vector<std::size_t> subset;
    for (auto i : idx) subset.push_back(nominal[i]);
    out.push_back(std::move(subset));
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

// Promotes the given nominal input columns to outputs. Outputs are the
// promoted columns in original order followed by the original class; the
// remaining inputs keep their order.
inline Dataset derive_dataset(const Dataset& d, const std::vector<std::size_t>& promoted) {
  const Schema& s = d.schema();
  if (s.output_count() != 1) throw PreconditionError("derivation needs a single-output dataset");
  std::vector<bool> is_promoted(s.input_count(), false);
  for (auto p : promoted) {
    if (p >= s.input_count() || !s.inputs()[p].nominal())
      throw PreconditionError("only nominal input columns can be promoted to outputs");
    is_promoted[p] = true;
  }
  std::vector<std::size_t> sorted = promoted;
  std::sort(sorted.begin(), sorted.end());

  std::vector<Column> in, out;
  for (std::size_t i = 0; i < s.input_count(); ++i)
    if (!is_promoted[i]) in.push_back(s.inputs()[i]);
  for (auto p : sorted) out.push_back(s.inputs()[p]);
  out.push_back(s.outputs()[0]);

  std::vector<Instance> rows;
  rows.reserve(d.size());
  for (const auto& inst : d.instances()) {
    Instance r;
    r.inputs.reserve(in.size());
    for (std::size_t i = 0; i < s.input_count(); ++i)
      if (!is_promoted[i]) r.inputs.push_back(inst.inputs[i]);
    for (auto p : sorted) {
      const Cell& c = inst.inputs[p];
      r.outputs.push_back(is_missing(c) ? kMissingLabel : std::get<std::int32_t>(c));
    }
    r.outputs.push_back(inst.outputs[0]);
    rows.push_back(std::move(r));
  }
  std::string prov = d.provenance() + " | derived outputs=";
  for (std::size_t j = 0; j < out.size(); ++j) prov += (j ? "," : "") + out[j].name;
  return Dataset(Schema(std::move(in), std::move(out)), std::move(rows), std::move(prov));
}

inline std::vector<Dataset> derive_multi_output(const Dataset& d, std::size_t num_outputs) {
  std::vector<Dataset> out;
  for (const auto& subset : derivation_subsets(d, num_outputs)) out.push_back(derive_dataset(d, subset));
  return out;
}

}  // namespace hmonn
