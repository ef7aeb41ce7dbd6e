#pragma once

#include <cstdint>
#include <vector>

#include "hmonn/dataset.hpp"

namespace hmonn {

namespace detail {

// Most frequent category; ties go to the lowest index. -1 when nothing was counted.
inline std::int32_t mode_of(const std::vector<std::size_t>& counts) {
  std::int32_t best = -1;
  std::size_t best_count = 0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] > best_count) {
      best_count = counts[i];
      best = static_cast<std::int32_t>(i);
    }
  return best;
}

}  // namespace detail

// Replaces missing real inputs by the column mean and missing nominal inputs
// and outputs by the column mode, computed over the non-missing cells.
// Columns without missing cells are left untouched.
inline Dataset impute_missing(const Dataset& dataset) {
  const Schema& schema = dataset.schema();
  std::vector<Instance> rows = dataset.instances();

  for (std::size_t c = 0; c < schema.input_count(); ++c) {
    const Column& col = schema.inputs()[c];
    bool any_missing = false;
    double sum = 0.0;
    std::size_t present = 0;
    std::vector<std::size_t> counts(col.nominal() ? static_cast<std::size_t>(arity_of(col.kind)) : 0);
    for (const auto& r : rows) {
      const Cell& cell = r.inputs[c];
      if (is_missing(cell)) {
        any_missing = true;
      } else if (col.nominal()) {
        ++counts[static_cast<std::size_t>(std::get<std::int32_t>(cell))];
        ++present;
      } else {
        sum += std::get<double>(cell);
        ++present;
      }
    }
    if (!any_missing) continue;
    if (present == 0) throw ImputationError("input column '" + col.name + "' is entirely missing");
    Cell fill = col.nominal() ? Cell{detail::mode_of(counts)} : Cell{sum / static_cast<double>(present)};
    for (auto& r : rows)
      if (is_missing(r.inputs[c])) r.inputs[c] = fill;
  }

  for (std::size_t j = 0; j < schema.output_count(); ++j) {
    const Column& col = schema.outputs()[j];
    std::vector<std::size_t> counts(static_cast<std::size_t>(arity_of(col.kind)));
    bool any_missing = false;
    for (const auto& r : rows) {
      if (r.outputs[j] == kMissingLabel)
        any_missing = true;
      else
        ++counts[static_cast<std::size_t>(r.outputs[j])];
    }
    if (!any_missing) continue;
    const auto fill = detail::mode_of(counts);
    if (fill < 0) throw ImputationError("output column '" + col.name + "' is entirely missing");
    for (auto& r : rows)
      if (r.outputs[j] == kMissingLabel) r.outputs[j] = fill;
  }

  return Dataset(schema, std::move(rows), dataset.provenance());
}

}  // namespace hmonn
