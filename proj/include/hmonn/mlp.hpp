#pragma once

/*
 Single-hidden-layer perceptron for one nominal output column.

 Logistic activations on the hidden and output layers, squared-error loss on
 one-hot targets and plain per-instance SGD. Nominal inputs are one-hot
 encoded, which the forward and backward passes exploit by touching only the
 active column of each nominal block.

 Training holds out a seeded validation split and keeps the weights of the
 epoch with the best validation accuracy, stopping after `patience` epochs
 without a strict improvement.
*/

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdio>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hmonn/encoding.hpp"
#include "hmonn/error.hpp"

namespace hmonn {

struct MlpConfig {
  int hidden_nodes = 0;  // 0 lets train_naive derive it from the schema
  double learning_rate = 0.1;
  int patience = 10;
  int max_epochs = 500;
  double validation_fraction = 0.1;
  std::uint64_t seed = 0;

  void validate() const {
    if (hidden_nodes < 0) throw PreconditionError("hidden node count must be positive");
    if (!(learning_rate > 0.0)) throw PreconditionError("learning rate must be positive");
    if (patience < 1) throw PreconditionError("patience must be at least 1");
    if (max_epochs < 1) throw PreconditionError("max epochs must be at least 1");
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
      throw PreconditionError("validation fraction must lie in (0,1)");
  }
};

struct MlpModel {
  std::size_t real_width = 0;
  std::vector<std::int32_t> nominal_arity;
  std::size_t hidden = 0;
  std::size_t classes = 0;
  // hidden x (input_width + 1), row-major, bias in the last column.
  std::vector<double> hidden_weights;
  // classes x (hidden + 1), row-major, bias in the last column.
  std::vector<double> output_weights;
  // Set when training saw a single class; predict() then always returns it.
  std::optional<std::int32_t> constant_class;

  MlpModel() = default;
  MlpModel(std::size_t real_w, std::vector<std::int32_t> arities, std::size_t hidden_n, std::size_t class_n)
      : real_width(real_w), nominal_arity(std::move(arities)), hidden(hidden_n), classes(class_n) {
    rebuild_offsets();
    hidden_weights.assign(hidden * (input_width() + 1), 0.0);
    output_weights.assign(classes * (hidden + 1), 0.0);
  }

  [[nodiscard]] std::size_t input_width() const noexcept { return width_; }
  [[nodiscard]] std::size_t nominal_offset(std::size_t f) const noexcept { return offsets_[f]; }

  void rebuild_offsets() {
    offsets_.resize(nominal_arity.size());
    std::size_t off = real_width;
    for (std::size_t f = 0; f < nominal_arity.size(); ++f) {
      offsets_[f] = off;
      off += static_cast<std::size_t>(nominal_arity[f]);
    }
    width_ = off;
  }

  template <class Rng>
  void initialize(Rng& rng) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (auto& w : hidden_weights) w = u(rng);
    for (auto& w : output_weights) w = u(rng);
  }

  void forward(const InputView& in, std::span<double> h, std::span<double> o) const {
    const std::size_t stride = width_ + 1;
    for (std::size_t j = 0; j < hidden; ++j) {
      const double* w = hidden_weights.data() + j * stride;
      double s = w[width_];
      for (std::size_t r = 0; r < real_width; ++r) s += w[r] * in.real[r];
      for (std::size_t f = 0; f < offsets_.size(); ++f) s += w[offsets_[f] + static_cast<std::size_t>(in.nominal[f])];
      h[j] = sigmoid(s);
    }
    for (std::size_t c = 0; c < classes; ++c) {
      const double* w = output_weights.data() + c * (hidden + 1);
      double s = w[hidden];
      for (std::size_t j = 0; j < hidden; ++j) s += w[j] * h[j];
      o[c] = sigmoid(s);
    }
  }

  [[nodiscard]] std::vector<double> activations(const InputView& in) const {
    std::vector<double> h(hidden), o(classes);
    forward(in, h, o);
    return o;
  }

  [[nodiscard]] std::int32_t predict(const InputView& in) const;

  bool operator==(const MlpModel& o) const {
    return real_width == o.real_width && nominal_arity == o.nominal_arity && hidden == o.hidden &&
           classes == o.classes && hidden_weights == o.hidden_weights && output_weights == o.output_weights &&
           constant_class == o.constant_class;
  }

  static double sigmoid(double s) noexcept { return 1.0 / (1.0 + std::exp(-s)); }

 private:
  std::vector<std::size_t> offsets_;
  std::size_t width_ = 0;
};

// Index of the largest activation; ties go to the lowest index.
inline std::int32_t argmax_lowest(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return static_cast<std::int32_t>(best);
}

inline std::int32_t MlpModel::predict(const InputView& in) const {
  if (constant_class) return *constant_class;
  auto o = activations(in);
  return argmax_lowest(o);
}

namespace detail {

struct MlpScratch {
  std::vector<double> h, o, dh, dout;
  explicit MlpScratch(const MlpModel& m) : h(m.hidden), o(m.classes), dh(m.hidden), dout(m.classes) {}
};

// Forward pass plus the backpropagated error terms of 0.5 * sum (o - t)^2.
inline void compute_deltas(const MlpModel& m, const InputView& in, std::int32_t target, MlpScratch& s) {
  m.forward(in, s.h, s.o);
  for (std::size_t c = 0; c < m.classes; ++c) {
    const double t = static_cast<std::int32_t>(c) == target ? 1.0 : 0.0;
    s.dout[c] = (s.o[c] - t) * s.o[c] * (1.0 - s.o[c]);
  }
  const std::size_t ostride = m.hidden + 1;
  for (std::size_t j = 0; j < m.hidden; ++j) {
    double acc = 0.0;
    for (std::size_t c = 0; c < m.classes; ++c) acc += m.output_weights[c * ostride + j] * s.dout[c];
    s.dh[j] = s.h[j] * (1.0 - s.h[j]) * acc;
  }
}

inline void sgd_step(MlpModel& m, const InputView& in, std::int32_t target, double lr, MlpScratch& s) {
  compute_deltas(m, in, target, s);
  const std::size_t ostride = m.hidden + 1;
  for (std::size_t c = 0; c < m.classes; ++c) {
    double* w = m.output_weights.data() + c * ostride;
    const double g = lr * s.dout[c];
    for (std::size_t j = 0; j < m.hidden; ++j) w[j] -= g * s.h[j];
    w[m.hidden] -= g;
  }
  const std::size_t width = m.input_width();
  const std::size_t stride = width + 1;
  for (std::size_t j = 0; j < m.hidden; ++j) {
    double* w = m.hidden_weights.data() + j * stride;
    const double g = lr * s.dh[j];
    for (std::size_t r = 0; r < m.real_width; ++r) w[r] -= g * in.real[r];
    for (std::size_t f = 0; f < m.nominal_arity.size(); ++f)
      w[m.nominal_offset(f) + static_cast<std::size_t>(in.nominal[f])] -= g;
    w[width] -= g;
  }
}

inline bool pair_less(const PairView& a, const PairView& b) {
  if (auto c = std::lexicographical_compare_three_way(a.outputs.begin(), a.outputs.end(), b.outputs.begin(),
                                                       b.outputs.end());
      c != 0)
    return c < 0;
  if (auto c = std::lexicographical_compare_three_way(a.input.nominal.begin(), a.input.nominal.end(),
                                                       b.input.nominal.begin(), b.input.nominal.end());
      c != 0)
    return c < 0;
  return std::lexicographical_compare(a.input.real.begin(), a.input.real.end(), b.input.real.begin(),
                                      b.input.real.end());
}

}  // namespace detail

struct MlpGradient {
  std::vector<double> hidden_weights;
  std::vector<double> output_weights;
};

// Squared-error loss 0.5 * sum_c (o_c - t_c)^2 on a one-hot target.
inline double squared_error(const MlpModel& m, const InputView& in, std::int32_t target) {
  auto o = m.activations(in);
  double loss = 0.0;
  for (std::size_t c = 0; c < o.size(); ++c) {
    const double t = static_cast<std::int32_t>(c) == target ? 1.0 : 0.0;
    loss += 0.5 * (o[c] - t) * (o[c] - t);
  }
  return loss;
}

// Gradient of squared_error with respect to every weight, laid out like the model.
inline MlpGradient backprop(const MlpModel& m, const InputView& in, std::int32_t target) {
  detail::MlpScratch s(m);
  detail::compute_deltas(m, in, target, s);
  MlpGradient g{std::vector<double>(m.hidden_weights.size(), 0.0), std::vector<double>(m.output_weights.size(), 0.0)};
  const std::size_t ostride = m.hidden + 1;
  for (std::size_t c = 0; c < m.classes; ++c) {
    for (std::size_t j = 0; j < m.hidden; ++j) g.output_weights[c * ostride + j] = s.dout[c] * s.h[j];
    g.output_weights[c * ostride + m.hidden] = s.dout[c];
  }
  const std::size_t width = m.input_width();
  const std::size_t stride = width + 1;
  for (std::size_t j = 0; j < m.hidden; ++j) {
    double* row = g.hidden_weights.data() + j * stride;
    for (std::size_t r = 0; r < m.real_width; ++r) row[r] = s.dh[j] * in.real[r];
    for (std::size_t f = 0; f < m.nominal_arity.size(); ++f)
      row[m.nominal_offset(f) + static_cast<std::size_t>(in.nominal[f])] = s.dh[j];
    row[width] = s.dh[j];
  }
  return g;
}

struct TrainingTrace {
  std::vector<double> validation_accuracy;  // one entry per epoch run
  std::size_t best_epoch = 0;               // index into validation_accuracy
  std::size_t train_size = 0;
  std::size_t validation_size = 0;
};

// Trains a classifier for output column `target` of `pairs`. Presentation
// order is determined by the seed alone: pairs are first put in a canonical
// content order, so permuting the input leaves the model unchanged.
inline MlpModel train_mlp(const PairStore& pairs, std::size_t target, const MlpConfig& config,
                          TrainingTrace* trace = nullptr) {
  config.validate();
  if (config.hidden_nodes < 1) throw PreconditionError("train_mlp needs a positive hidden node count");
  if (pairs.size() < 2) throw PreconditionError("train_mlp needs at least 2 instances");
  const auto& layout = pairs.layout();
  if (target >= layout.output_width()) throw PreconditionError("target output index out of range");

  const auto classes = static_cast<std::size_t>(layout.output_arity[target]);
  MlpModel model(layout.real_width, layout.nominal_arity, static_cast<std::size_t>(config.hidden_nodes), classes);

  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return detail::pair_less(pairs[a], pairs[b]); });

  std::mt19937_64 rng(config.seed);
  model.initialize(rng);

  const std::int32_t first_label = pairs[order.front()].outputs[target];
  const bool single_class = std::all_of(order.begin(), order.end(),
                                        [&](std::size_t i) { return pairs[i].outputs[target] == first_label; });
  if (single_class) {
    model.constant_class = first_label;
    return model;
  }

  std::shuffle(order.begin(), order.end(), rng);
  const auto n = order.size();
  auto n_val = static_cast<std::size_t>(std::llround(config.validation_fraction * static_cast<double>(n)));
  n_val = std::clamp<std::size_t>(n_val, 1, n - 1);
  std::vector<std::size_t> validation(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());

  auto validation_accuracy = [&](const MlpModel& m) {
    std::size_t hits = 0;
    std::vector<double> h(m.hidden), o(m.classes);
    for (auto i : validation) {
      auto p = pairs[i];
      m.forward(p.input, h, o);
      hits += argmax_lowest(o) == p.outputs[target] ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(validation.size());
  };

  detail::MlpScratch scratch(model);
  MlpModel best = model;
  double best_acc = -1.0;
  std::size_t best_epoch = 0;
  int stale = 0;
  std::vector<double> history;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    std::shuffle(train.begin(), train.end(), rng);
    for (auto i : train) {
      auto p = pairs[i];
      detail::sgd_step(model, p.input, p.outputs[target], config.learning_rate, scratch);
    }
    const double acc = validation_accuracy(model);
    history.push_back(acc);
    if (acc > best_acc) {
      best_acc = acc;
      best = model;
      best_epoch = static_cast<std::size_t>(epoch);
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }
  if (trace) {
    trace->validation_accuracy = std::move(history);
    trace->best_epoch = best_epoch;
    trace->train_size = train.size();
    trace->validation_size = validation.size();
  }
  return best;
}

// Text serialization. Weights are written as hexadecimal floats so a
// save/load cycle reproduces every bit.
namespace detail {

inline void write_doubles(std::ostream& out, const char* tag, const std::vector<double>& v) {
  out << tag << ' ' << v.size() << '\n';
  char buf[40];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%a", v[i]);
    out << buf << ((i + 1) % 8 == 0 || i + 1 == v.size() ? '\n' : ' ');
  }
}

inline std::string read_token(std::istream& in) {
  std::string t;
  if (!(in >> t)) throw ParseError("unexpected end of model stream");
  return t;
}

inline void expect_token(std::istream& in, const std::string& want) {
  auto t = read_token(in);
  if (t != want) throw ParseError("model stream: expected '" + want + "', found '" + t + "'");
}

inline double read_double(std::istream& in) {
  auto t = read_token(in);
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) throw ParseError("model stream: bad number '" + t + "'");
  return v;
}

inline long long read_int(std::istream& in) {
  auto t = read_token(in);
  char* end = nullptr;
  long long v = std::strtoll(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size()) throw ParseError("model stream: bad integer '" + t + "'");
  return v;
}

inline std::size_t read_size(std::istream& in) {
  auto v = read_int(in);
  if (v < 0) throw ParseError("model stream: negative size");
  return static_cast<std::size_t>(v);
}

inline std::vector<double> read_doubles(std::istream& in, const char* tag) {
  expect_token(in, tag);
  std::vector<double> v(read_size(in));
  for (auto& x : v) x = read_double(in);
  return v;
}

}  // namespace detail

inline void save_mlp(std::ostream& out, const MlpModel& m) {
  out << "hmonn-mlp 1\n";
  out << "real_width " << m.real_width << '\n';
  out << "nominal " << m.nominal_arity.size();
  for (auto a : m.nominal_arity) out << ' ' << a;
  out << '\n';
  out << "hidden " << m.hidden << '\n';
  out << "classes " << m.classes << '\n';
  out << "constant " << (m.constant_class ? *m.constant_class : -1) << '\n';
  detail::write_doubles(out, "hidden_weights", m.hidden_weights);
  detail::write_doubles(out, "output_weights", m.output_weights);
}

inline MlpModel load_mlp(std::istream& in) {
  detail::expect_token(in, "hmonn-mlp");
  if (detail::read_int(in) != 1) throw ParseError("unsupported MLP format version");
  detail::expect_token(in, "real_width");
  const auto real_width = detail::read_size(in);
  detail::expect_token(in, "nominal");
  std::vector<std::int32_t> arity(detail::read_size(in));
  for (auto& a : arity) a = static_cast<std::int32_t>(detail::read_int(in));
  detail::expect_token(in, "hidden");
  const auto hidden = detail::read_size(in);
  detail::expect_token(in, "classes");
  const auto classes = detail::read_size(in);
  detail::expect_token(in, "constant");
  const auto constant = detail::read_int(in);
  MlpModel m(real_width, std::move(arity), hidden, classes);
  if (constant >= 0) m.constant_class = static_cast<std::int32_t>(constant);
  auto hw = detail::read_doubles(in, "hidden_weights");
  auto ow = detail::read_doubles(in, "output_weights");
  if (hw.size() != m.hidden_weights.size() || ow.size() != m.output_weights.size())
    throw ParseError("MLP weight counts do not match the declared shapes");
  m.hidden_weights = std::move(hw);
  m.output_weights = std::move(ow);
  return m;
}

}  // namespace hmonn
