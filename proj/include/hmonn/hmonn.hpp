#pragma once

/*
 Hierarchical multi-output nearest neighbor model.

 Layer one is the naive model: one MLP per output, whose argmax predictions
 form an initial output vector. Layer two is a nearest-neighbor vote over
 the stored training pairs (input, true output vector), where the query is
 (input, initial prediction) and the distance weighs input disagreement
 against output disagreement:

   d(a, b) = sqrt( theta * sum_i dx_i^2 + (1 - theta) * sum_j dy_j^2 )

 dx_i is the difference of normalized reals or the 0/1 overlap of nominal
 inputs; dy_j is the 0/1 overlap of outputs. The most frequent output vector
 among the k nearest pairs is returned.

 Tie rules:
  * neighbors are ordered by (distance, store index);
  * vote ties go to the candidate whose nearest supporting neighbor comes
    first in that order.
*/

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "hmonn/dataset.hpp"
#include "hmonn/encoding.hpp"
#include "hmonn/naive.hpp"

namespace hmonn {

inline double mod_distance(const PairView& a, const PairView& b, double theta) {
  double dx = 0.0;
  for (std::size_t i = 0; i < a.input.real.size(); ++i) {
    const double d = a.input.real[i] - b.input.real[i];
    dx += d * d;
  }
  std::size_t nominal_mismatch = 0;
  for (std::size_t i = 0; i < a.input.nominal.size(); ++i)
    nominal_mismatch += a.input.nominal[i] != b.input.nominal[i] ? 1 : 0;
  dx += static_cast<double>(nominal_mismatch);
  std::size_t output_mismatch = 0;
  for (std::size_t j = 0; j < a.outputs.size(); ++j) output_mismatch += a.outputs[j] != b.outputs[j] ? 1 : 0;
  return std::sqrt(theta * dx + (1.0 - theta) * static_cast<double>(output_mismatch));
}

inline double mod_distance(const EncodedPair& a, const EncodedPair& b, double theta) {
  return mod_distance(a.view(), b.view(), theta);
}

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;

  bool operator==(const Neighbor&) const = default;
};

inline bool neighbor_before(const Neighbor& a, const Neighbor& b) noexcept {
  return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
}

// Anything indexable whose elements view as encoded pairs: PairStore,
// std::vector<EncodedPair>, std::span<const PairView>, ...
template <class Store>
concept PairSource = requires(const Store& s, std::size_t i) {
  { s.size() } -> std::convertible_to<std::size_t>;
  { as_view(s[i]) } -> std::same_as<PairView>;
};

// Exhaustive scan returning the k smallest distances, ascending, with ties
// broken by store index.
template <PairSource Store>
std::vector<Neighbor> knn_search(const Store& store, const PairView& query, std::size_t k, double theta) {
  if (k == 0) throw PreconditionError("k must be at least 1");
  if (k > store.size()) throw PreconditionError("k exceeds the number of stored pairs");
  if (!(theta >= 0.0 && theta <= 1.0)) throw PreconditionError("theta must lie in [0,1]");
  std::vector<Neighbor> all(store.size());
  for (std::size_t i = 0; i < store.size(); ++i) all[i] = {i, mod_distance(as_view(store[i]), query, theta)};
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), neighbor_before);
  all.resize(k);
  return all;
}

// Most frequent output vector among `neighbors`, which must be in search order.
template <PairSource Store>
OutputVector majority_vector(const Store& store, std::span<const Neighbor> neighbors) {
  if (neighbors.empty()) throw PreconditionError("majority vote over an empty neighborhood");
  struct Candidate {
    std::span<const std::int32_t> outputs;
    std::size_t votes;
    std::size_t first_rank;
  };
  std::vector<Candidate> candidates;
  for (std::size_t r = 0; r < neighbors.size(); ++r) {
    auto out = as_view(store[neighbors[r].index]).outputs;
    auto it = std::find_if(candidates.begin(), candidates.end(),
                           [&](const Candidate& c) { return std::ranges::equal(c.outputs, out); });
    if (it == candidates.end())
      candidates.push_back({out, 1, r});
    else
      ++it->votes;
  }
  const Candidate* best = &candidates.front();
  for (const auto& c : candidates)
    if (c.votes > best->votes || (c.votes == best->votes && c.first_rank < best->first_rank)) best = &c;
  return OutputVector(best->outputs.begin(), best->outputs.end());
}

struct HmonnConfig {
  std::size_t k = 7;
  double theta = 0.5;
  MlpConfig mlp;

  void validate() const {
    if (k < 1) throw PreconditionError("k must be at least 1");
    if (!(theta >= 0.0 && theta <= 1.0)) throw PreconditionError("theta must lie in [0,1]");
    mlp.validate();
  }
};

struct HmonnModel {
  NaiveModel naive;
  PairStore store;  // training pairs with their true output vectors
  HmonnConfig config;

  bool operator==(const HmonnModel& o) const {
    return naive == o.naive && store == o.store && config.k == o.config.k && config.theta == o.config.theta;
  }
};

inline HmonnModel train_hmonn(const Dataset& dataset, const HmonnConfig& config) {
  config.validate();
  if (dataset.empty()) throw PreconditionError("train_hmonn needs a non-empty dataset");
  if (config.k > dataset.size()) throw PreconditionError("k exceeds the number of training instances");
  auto [encoder, pairs] = encode(dataset);
  HmonnModel m;
  m.naive = train_naive(encoder, pairs, resolve_hidden(dataset.schema(), config.mlp));
  m.store = std::move(pairs);
  m.config = config;
  return m;
}

struct HmonnPrediction {
  OutputVector initial;  // naive layer
  std::vector<Neighbor> neighbors;
  OutputVector refined;
};

inline HmonnPrediction explain_hmonn(const HmonnModel& model, const InputView& encoded) {
  HmonnPrediction p;
  p.initial = predict_naive(model.naive, encoded);
  const PairView query{encoded, p.initial};
  p.neighbors = knn_search(model.store, query, model.config.k, model.config.theta);
  p.refined = majority_vector(model.store, p.neighbors);
  return p;
}

inline HmonnPrediction explain_hmonn(const HmonnModel& model, std::span<const Cell> inputs) {
  const EncodedPair e = model.naive.encoder.encode_inputs(inputs);
  return explain_hmonn(model, e.input());
}

inline OutputVector predict_hmonn(const HmonnModel& model, std::span<const Cell> inputs) {
  return explain_hmonn(model, inputs).refined;
}

inline void save_hmonn(std::ostream& out, const HmonnModel& m) {
  out << "hmonn-model 1\n";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", m.config.theta);
  out << "k " << m.config.k << "\ntheta " << buf << '\n';
  save_naive(out, m.naive);
  const auto& l = m.store.layout();
  out << "store " << m.store.size() << '\n';
  for (std::size_t i = 0; i < m.store.size(); ++i) {
    auto p = m.store[i];
    for (double v : p.input.real) {
      std::snprintf(buf, sizeof buf, "%a", v);
      out << buf << ' ';
    }
    for (auto v : p.input.nominal) out << v << ' ';
    for (std::size_t j = 0; j < l.output_width(); ++j) out << p.outputs[j] << (j + 1 == l.output_width() ? '\n' : ' ');
  }
}

inline HmonnModel load_hmonn(std::istream& in) {
  detail::expect_token(in, "hmonn-model");
  if (detail::read_int(in) != 1) throw ParseError("unsupported HMONN model format version");
  HmonnModel m;
  detail::expect_token(in, "k");
  m.config.k = detail::read_size(in);
  detail::expect_token(in, "theta");
  m.config.theta = detail::read_double(in);
  m.naive = load_naive(in);
  const auto& layout = m.naive.encoder.layout();
  m.store = PairStore(layout);
  detail::expect_token(in, "store");
  const auto n = detail::read_size(in);
  m.store.reserve(n);
  EncodedPair p;
  p.real.resize(layout.real_width);
  p.nominal.resize(layout.nominal_width());
  p.outputs.resize(layout.output_width());
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : p.real) v = detail::read_double(in);
    for (auto& v : p.nominal) v = static_cast<std::int32_t>(detail::read_int(in));
    for (auto& v : p.outputs) v = static_cast<std::int32_t>(detail::read_int(in));
    m.store.push_back(p);
  }
  return m;
}

}  // namespace hmonn
