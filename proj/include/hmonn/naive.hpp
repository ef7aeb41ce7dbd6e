#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "hmonn/dataset.hpp"
#include "hmonn/encoding.hpp"
#include "hmonn/mlp.hpp"
#include "hmonn/seed.hpp"

namespace hmonn {

// Two hidden nodes per attribute, outputs included.
inline int hidden_node_count(const Schema& schema) {
  return static_cast<int>(2 * (schema.input_count() + schema.output_count()));
}

// One independently trained MLP per output column; predictions are concatenated.
struct NaiveModel {
  Encoder encoder;
  std::vector<MlpModel> models;

  bool operator==(const NaiveModel&) const = default;
};

// Output j is trained with seed derive_seed(config.seed, {j}).
inline NaiveModel train_naive(const Encoder& encoder, const PairStore& pairs, const MlpConfig& config) {
  NaiveModel model{encoder, {}};
  const auto outputs = pairs.layout().output_width();
  model.models.reserve(outputs);
  for (std::size_t j = 0; j < outputs; ++j) {
    MlpConfig c = config;
    c.seed = derive_seed(config.seed, {j});
    model.models.push_back(train_mlp(pairs, j, c));
  }
  return model;
}

inline MlpConfig resolve_hidden(const Schema& schema, MlpConfig config) {
  if (config.hidden_nodes == 0) config.hidden_nodes = hidden_node_count(schema);
  return config;
}

inline NaiveModel train_naive(const Dataset& dataset, const MlpConfig& config) {
  if (dataset.empty()) throw PreconditionError("train_naive needs a non-empty dataset");
  auto [encoder, pairs] = encode(dataset);
  return train_naive(encoder, pairs, resolve_hidden(dataset.schema(), config));
}

inline OutputVector predict_naive(const NaiveModel& model, const InputView& encoded) {
  OutputVector out;
  out.reserve(model.models.size());
  for (const auto& m : model.models) out.push_back(m.predict(encoded));
  return out;
}

inline OutputVector predict_naive(const NaiveModel& model, std::span<const Cell> inputs) {
  const EncodedPair p = model.encoder.encode_inputs(inputs);
  return predict_naive(model, p.input());
}

namespace detail {

inline void save_encoder(std::ostream& out, const Encoder& e) {
  const auto& l = e.layout();
  out << "encoder " << l.slots.size() << '\n';
  for (const auto& s : l.slots) out << (s.real ? 'r' : 'n') << ' ' << s.index << '\n';
  out << "nominal_arity " << l.nominal_arity.size();
  for (auto a : l.nominal_arity) out << ' ' << a;
  out << "\noutput_arity " << l.output_arity.size();
  for (auto a : l.output_arity) out << ' ' << a;
  out << '\n';
  write_doubles(out, "mins", e.mins());
  write_doubles(out, "maxs", e.maxs());
}

inline Encoder load_encoder(std::istream& in) {
  expect_token(in, "encoder");
  EncodedLayout l;
  l.slots.resize(read_size(in));
  for (auto& s : l.slots) {
    auto kind = read_token(in);
    if (kind != "r" && kind != "n") throw ParseError("encoder slot kind must be 'r' or 'n'");
    s.real = kind == "r";
    s.index = read_size(in);
    if (s.real) ++l.real_width;
  }
  expect_token(in, "nominal_arity");
  l.nominal_arity.resize(read_size(in));
  for (auto& a : l.nominal_arity) a = static_cast<std::int32_t>(read_int(in));
  expect_token(in, "output_arity");
  l.output_arity.resize(read_size(in));
  for (auto& a : l.output_arity) a = static_cast<std::int32_t>(read_int(in));
  auto mins = read_doubles(in, "mins");
  auto maxs = read_doubles(in, "maxs");
  return Encoder::from_state(std::move(l), std::move(mins), std::move(maxs));
}

}  // namespace detail

inline void save_naive(std::ostream& out, const NaiveModel& m) {
  out << "hmonn-naive 1\n";
  detail::save_encoder(out, m.encoder);
  out << "models " << m.models.size() << '\n';
  for (const auto& mlp : m.models) save_mlp(out, mlp);
}

inline NaiveModel load_naive(std::istream& in) {
  detail::expect_token(in, "hmonn-naive");
  if (detail::read_int(in) != 1) throw ParseError("unsupported naive model format version");
  NaiveModel m;
  m.encoder = detail::load_encoder(in);
  detail::expect_token(in, "models");
  const auto n = detail::read_size(in);
  for (std::size_t i = 0; i < n; ++i) m.models.push_back(load_mlp(in));
  return m;
}

}  // namespace hmonn
