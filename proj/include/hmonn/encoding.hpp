#pragma once

/*
 Encoded (input, output) pairs.

 Real inputs are min-max normalized with statistics of the fitting dataset
 and clamped to [0,1] when encoding unseen rows. Nominal inputs stay as
 category indices: the nearest-neighbor layer compares them by overlap and
 the MLP expands them to one-hot on the fly.

 PairStore keeps many pairs in three flat arrays so a neighbor scan touches
 contiguous memory.
*/

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hmonn/dataset.hpp"

namespace hmonn {

struct EncodedLayout {
  struct Slot {
    bool real = false;
    std::size_t index = 0;  // position inside the real or the nominal block
    bool operator==(const Slot&) const = default;
  };

  std::vector<Slot> slots;  // one per schema input column
  std::vector<std::int32_t> nominal_arity;
  std::vector<std::int32_t> output_arity;
  std::size_t real_width = 0;

  [[nodiscard]] std::size_t nominal_width() const noexcept { return nominal_arity.size(); }
  [[nodiscard]] std::size_t output_width() const noexcept { return output_arity.size(); }

  static EncodedLayout from_schema(const Schema& schema) {
    EncodedLayout l;
    for (const auto& c : schema.inputs()) {
      if (c.nominal()) {
        l.slots.push_back({false, l.nominal_arity.size()});
        l.nominal_arity.push_back(arity_of(c.kind));
      } else {
        l.slots.push_back({true, l.real_width++});
      }
    }
    for (const auto& c : schema.outputs()) l.output_arity.push_back(arity_of(c.kind));
    return l;
  }

  bool operator==(const EncodedLayout&) const = default;
};

struct InputView {
  std::span<const double> real;
  std::span<const std::int32_t> nominal;
};

struct PairView {
  InputView input;
  std::span<const std::int32_t> outputs;
};

struct EncodedPair {
  std::vector<double> real;
  std::vector<std::int32_t> nominal;
  OutputVector outputs;

  [[nodiscard]] InputView input() const noexcept { return {real, nominal}; }
  [[nodiscard]] PairView view() const noexcept { return {input(), outputs}; }
  bool operator==(const EncodedPair&) const = default;
};

inline PairView as_view(const PairView& v) noexcept { return v; }
inline PairView as_view(const EncodedPair& p) noexcept { return p.view(); }

class PairStore {
 public:
  PairStore() = default;
  explicit PairStore(EncodedLayout layout) : layout_(std::move(layout)) {}

  void push_back(const PairView& p) {
    if (p.input.real.size() != layout_.real_width || p.input.nominal.size() != layout_.nominal_width() ||
        p.outputs.size() != layout_.output_width())
      throw PreconditionError("pair width does not match the store layout");
    real_.insert(real_.end(), p.input.real.begin(), p.input.real.end());
    nominal_.insert(nominal_.end(), p.input.nominal.begin(), p.input.nominal.end());
    outputs_.insert(outputs_.end(), p.outputs.begin(), p.outputs.end());
    ++size_;
  }
  void push_back(const EncodedPair& p) { push_back(p.view()); }

  [[nodiscard]] PairView operator[](std::size_t i) const noexcept {
    const auto rw = layout_.real_width;
    const auto nw = layout_.nominal_width();
    const auto ow = layout_.output_width();
    return {{std::span<const double>(real_.data() + i * rw, rw),
             std::span<const std::int32_t>(nominal_.data() + i * nw, nw)},
            std::span<const std::int32_t>(outputs_.data() + i * ow, ow)};
  }

  [[nodiscard]] EncodedPair pair(std::size_t i) const {
    auto v = (*this)[i];
    return {{v.input.real.begin(), v.input.real.end()},
            {v.input.nominal.begin(), v.input.nominal.end()},
            {v.outputs.begin(), v.outputs.end()}};
  }

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] bool empty() const noexcept { return size_ == 0; }
  [[nodiscard]] const EncodedLayout& layout() const noexcept { return layout_; }

  void reserve(std::size_t n) {
    real_.reserve(n * layout_.real_width);
    nominal_.reserve(n * layout_.nominal_width());
    outputs_.reserve(n * layout_.output_width());
  }

  bool operator==(const PairStore&) const = default;

 private:
  EncodedLayout layout_;
  std::vector<double> real_;
  std::vector<std::int32_t> nominal_;
  std::vector<std::int32_t> outputs_;
  std::size_t size_ = 0;
};

// Encoder state: layout plus per-real-column min/max of the fitting data.
class Encoder {
 public:
  Encoder() = default;

  static Encoder fit(const Dataset& d) {
    require_complete(d, "encode");
    Encoder e;
    e.layout_ = EncodedLayout::from_schema(d.schema());
    e.min_.assign(e.layout_.real_width, 0.0);
    e.max_.assign(e.layout_.real_width, 0.0);
    std::vector<bool> seen(e.layout_.real_width, false);
    for (const auto& inst : d.instances())
      for (std::size_t c = 0; c < inst.inputs.size(); ++c) {
        const auto& slot = e.layout_.slots[c];
        if (!slot.real) continue;
        double v = std::get<double>(inst.inputs[c]);
        if (!seen[slot.index]) {
          e.min_[slot.index] = e.max_[slot.index] = v;
          seen[slot.index] = true;
        } else {
          e.min_[slot.index] = std::min(e.min_[slot.index], v);
          e.max_[slot.index] = std::max(e.max_[slot.index], v);
        }
      }
    return e;
  }

  static Encoder from_state(EncodedLayout layout, std::vector<double> mins, std::vector<double> maxs) {
    if (mins.size() != layout.real_width || maxs.size() != layout.real_width)
      throw PreconditionError("encoder state does not match its layout");
    Encoder e;
    e.layout_ = std::move(layout);
    e.min_ = std::move(mins);
    e.max_ = std::move(maxs);
    return e;
  }

  // Constant columns normalize to 0; out-of-range values clamp to [0,1].
  [[nodiscard]] double normalize(std::size_t real_index, double v) const noexcept {
    const double lo = min_[real_index], hi = max_[real_index];
    if (!(hi > lo)) return 0.0;
    return std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
  }

  [[nodiscard]] double denormalize(std::size_t real_index, double u) const noexcept {
    return min_[real_index] + u * (max_[real_index] - min_[real_index]);
  }

  [[nodiscard]] EncodedPair encode_inputs(std::span<const Cell> inputs) const {
    if (inputs.size() != layout_.slots.size()) throw PreconditionError("input arity does not match the schema");
    EncodedPair p;
    p.real.resize(layout_.real_width);
    p.nominal.resize(layout_.nominal_width());
    for (std::size_t c = 0; c < inputs.size(); ++c) {
      const auto& slot = layout_.slots[c];
      const Cell& cell = inputs[c];
      if (slot.real) {
        const auto* v = std::get_if<double>(&cell);
        if (!v) throw PreconditionError("expected a real value in input " + std::to_string(c));
        p.real[slot.index] = normalize(slot.index, *v);
      } else {
        const auto* v = std::get_if<std::int32_t>(&cell);
        if (!v) throw PreconditionError("expected a nominal value in input " + std::to_string(c));
        if (*v < 0 || *v >= layout_.nominal_arity[slot.index])
          throw PreconditionError("nominal index out of range in input " + std::to_string(c));
        p.nominal[slot.index] = *v;
      }
    }
    return p;
  }

  [[nodiscard]] EncodedPair encode(const Instance& inst) const {
    EncodedPair p = encode_inputs(inst.inputs);
    p.outputs = inst.outputs;
    return p;
  }

  // Inverse of encode_inputs for in-range values.
  [[nodiscard]] std::vector<Cell> decode_inputs(const InputView& in) const {
    std::vector<Cell> cells;
    cells.reserve(layout_.slots.size());
    for (const auto& slot : layout_.slots) {
      if (slot.real)
        cells.emplace_back(denormalize(slot.index, in.real[slot.index]));
      else
        cells.emplace_back(in.nominal[slot.index]);
    }
    return cells;
  }

  [[nodiscard]] const EncodedLayout& layout() const noexcept { return layout_; }
  [[nodiscard]] const std::vector<double>& mins() const noexcept { return min_; }
  [[nodiscard]] const std::vector<double>& maxs() const noexcept { return max_; }

  bool operator==(const Encoder&) const = default;

 private:
  EncodedLayout layout_;
  std::vector<double> min_;
  std::vector<double> max_;
};

inline PairStore encode_with(const Encoder& encoder, const Dataset& d) {
  require_complete(d, "encode");
  PairStore store(encoder.layout());
  store.reserve(d.size());
  for (const auto& inst : d.instances()) store.push_back(encoder.encode(inst));
  return store;
}

// Fits an encoder on `d` and encodes every instance with its true labels.
inline std::pair<Encoder, PairStore> encode(const Dataset& d) {
  Encoder e = Encoder::fit(d);
  PairStore s = encode_with(e, d);
  return {std::move(e), std::move(s)};
}

}  // namespace hmonn
