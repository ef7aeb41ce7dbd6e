#pragma once

/*
 In-memory multi-output dataset.

 A Schema is an ordered list of input columns (nominal or real) plus an
 ordered list of output columns (always nominal). Instances store input
 cells as a variant {Missing, nominal index, real value} and outputs as
 nominal indices, with kMissingLabel marking a missing output before
 imputation.
*/

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "hmonn/error.hpp"

namespace hmonn {

struct NominalKind {
  std::vector<std::string> values;  // one name per category; arity == values.size()

  [[nodiscard]] std::int32_t arity() const noexcept {
    return static_cast<std::int32_t>(values.size());
  }
  bool operator==(const NominalKind&) const = default;
};

struct RealKind {
  bool operator==(const RealKind&) const = default;
};

using FeatureKind = std::variant<NominalKind, RealKind>;

// Nominal kind with categories named "0".."arity-1".
inline FeatureKind nominal_kind(std::int32_t arity) {
  NominalKind k;
  for (std::int32_t i = 0; i < arity; ++i) k.values.push_back(std::to_string(i));
  return k;
}

inline FeatureKind nominal_kind(std::vector<std::string> names) {
  return NominalKind{std::move(names)};
}

inline FeatureKind real_kind() { return RealKind{}; }

inline bool is_nominal(const FeatureKind& k) noexcept {
  return std::holds_alternative<NominalKind>(k);
}

inline std::int32_t arity_of(const FeatureKind& k) {
  if (const auto* n = std::get_if<NominalKind>(&k)) return n->arity();
  throw SchemaError("arity requested for a real-valued column");
}

struct Column {
  std::string name;
  FeatureKind kind;

  [[nodiscard]] bool nominal() const noexcept { return is_nominal(kind); }
  bool operator==(const Column&) const = default;
};

inline void validate_kind(const Column& c) {
  const auto* n = std::get_if<NominalKind>(&c.kind);
  if (!n) return;
  if (n->arity() < 2)
    throw SchemaError("nominal column '" + c.name + "' must have at least 2 values");
  std::unordered_set<std::string> seen;
  for (const auto& v : n->values)
    if (!seen.insert(v).second)
      throw SchemaError("nominal column '" + c.name + "' repeats value '" + v + "'");
}

class Schema {
 public:
  Schema() = default;

  Schema(std::vector<Column> inputs, std::vector<Column> outputs)
      : inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
    if (inputs_.empty()) throw SchemaError("schema needs at least one input column");
    if (outputs_.empty()) throw SchemaError("schema needs at least one output column");
    std::unordered_set<std::string> names;
    for (const auto& c : inputs_) {
      validate_kind(c);
      if (!names.insert(c.name).second) throw SchemaError("duplicate column name '" + c.name + "'");
    }
    for (const auto& c : outputs_) {
      validate_kind(c);
      if (!c.nominal()) throw SchemaError("output column '" + c.name + "' must be nominal");
      if (!names.insert(c.name).second) throw SchemaError("duplicate column name '" + c.name + "'");
    }
  }

  [[nodiscard]] const std::vector<Column>& inputs() const noexcept { return inputs_; }
  [[nodiscard]] const std::vector<Column>& outputs() const noexcept { return outputs_; }
  [[nodiscard]] std::size_t input_count() const noexcept { return inputs_.size(); }
  [[nodiscard]] std::size_t output_count() const noexcept { return outputs_.size(); }

  [[nodiscard]] std::size_t nominal_input_count() const noexcept {
    std::size_t n = 0;
    for (const auto& c : inputs_) n += c.nominal() ? 1 : 0;
    return n;
  }

  [[nodiscard]] std::optional<std::size_t> input_index(const std::string& name) const {
    for (std::size_t i = 0; i < inputs_.size(); ++i)
      if (inputs_[i].name == name) return i;
    return std::nullopt;
  }

  bool operator==(const Schema&) const = default;

 private:
  std::vector<Column> inputs_;
  std::vector<Column> outputs_;
};

struct Missing {
  bool operator==(const Missing&) const = default;
};

using Cell = std::variant<Missing, std::int32_t, double>;
using OutputVector = std::vector<std::int32_t>;

inline constexpr std::int32_t kMissingLabel = -1;

inline bool is_missing(const Cell& c) noexcept { return std::holds_alternative<Missing>(c); }

struct Instance {
  std::vector<Cell> inputs;
  OutputVector outputs;

  bool operator==(const Instance&) const = default;
};

inline void validate_instance(const Schema& schema, const Instance& inst) {
  if (inst.inputs.size() != schema.input_count())
    throw SchemaError("instance has " + std::to_string(inst.inputs.size()) + " inputs, schema has " +
                      std::to_string(schema.input_count()));
  if (inst.outputs.size() != schema.output_count())
    throw SchemaError("instance has " + std::to_string(inst.outputs.size()) +
                      " outputs, schema has " + std::to_string(schema.output_count()));
  for (std::size_t i = 0; i < inst.inputs.size(); ++i) {
    const Column& col = schema.inputs()[i];
    const Cell& cell = inst.inputs[i];
    if (is_missing(cell)) continue;
    if (col.nominal()) {
      const auto* v = std::get_if<std::int32_t>(&cell);
      if (!v) throw SchemaError("column '" + col.name + "' expects a nominal value");
      if (*v < 0 || *v >= arity_of(col.kind))
        throw SchemaError("nominal index out of range in column '" + col.name + "'");
    } else {
      const auto* v = std::get_if<double>(&cell);
      if (!v) throw SchemaError("column '" + col.name + "' expects a real value");
      if (!std::isfinite(*v)) throw SchemaError("non-finite value in column '" + col.name + "'");
    }
  }
  for (std::size_t j = 0; j < inst.outputs.size(); ++j) {
    const std::int32_t v = inst.outputs[j];
    if (v == kMissingLabel) continue;
    if (v < 0 || v >= arity_of(schema.outputs()[j].kind))
      throw SchemaError("output index out of range in column '" + schema.outputs()[j].name + "'");
  }
}

class Dataset {
 public:
  Dataset() = default;

  Dataset(Schema schema, std::vector<Instance> instances, std::string provenance = {})
      : schema_(std::move(schema)),
        instances_(std::move(instances)),
        provenance_(std::move(provenance)) {
    for (const auto& inst : instances_) validate_instance(schema_, inst);
  }

  [[nodiscard]] const Schema& schema() const noexcept { return schema_; }
  [[nodiscard]] const std::vector<Instance>& instances() const noexcept { return instances_; }
  [[nodiscard]] const Instance& operator[](std::size_t i) const { return instances_[i]; }
  [[nodiscard]] std::size_t size() const noexcept { return instances_.size(); }
  [[nodiscard]] bool empty() const noexcept { return instances_.empty(); }
  [[nodiscard]] const std::string& provenance() const noexcept { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }

  [[nodiscard]] bool has_missing() const noexcept {
    for (const auto& inst : instances_) {
      for (const auto& c : inst.inputs)
        if (is_missing(c)) return true;
      for (auto v : inst.outputs)
        if (v == kMissingLabel) return true;
    }
    return false;
  }

  // Subset by instance index, preserving the given order.
  [[nodiscard]] Dataset subset(const std::vector<std::size_t>& rows) const {
    std::vector<Instance> out;
    out.reserve(rows.size());
    for (auto r : rows) out.push_back(instances_.at(r));
    Dataset d;
    d.schema_ = schema_;
    d.instances_ = std::move(out);
    d.provenance_ = provenance_;
    return d;
  }

  bool operator==(const Dataset&) const = default;

 private:
  Schema schema_;
  std::vector<Instance> instances_;
  std::string provenance_;
};

inline void require_complete(const Dataset& d, const char* op) {
  if (d.has_missing())
    throw PreconditionError(std::string(op) + " requires a dataset without missing cells");
}

}  // namespace hmonn
