#pragma once

#include <span>
#include <vector>

#include "hmonn/dataset.hpp"
#include "hmonn/relation_index.hpp"

namespace hmonn {

// What a MOD-accuracy evaluation needs: the training relation, the test rows
// and one predicted output vector per test row.
struct EvaluationContext {
  const RelationIndex& train;
  std::span<const Instance> test;
  std::span<const OutputVector> predictions;
};

// A prediction z_i for test row (x_i, y_i) is correct when z_i == y_i or the
// training set labels x_i with z_i somewhere (exact match on x).
inline bool mod_correct(const RelationIndex& train, const Instance& row, const OutputVector& z) {
  if (z == row.outputs) return true;
  return train.contains(input_key(row.inputs), z);
}

inline double mod_accuracy(const EvaluationContext& ctx) {
  if (ctx.test.size() != ctx.predictions.size())
    throw PreconditionError("exactly one prediction per test instance is required");
  if (ctx.test.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < ctx.test.size(); ++i) hits += mod_correct(ctx.train, ctx.test[i], ctx.predictions[i]);
  return static_cast<double>(hits) / static_cast<double>(ctx.test.size());
}

inline double exact_match_accuracy(std::span<const Instance> test, std::span<const OutputVector> predictions) {
  if (test.size() != predictions.size()) throw PreconditionError("exactly one prediction per test instance is required");
  if (test.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < test.size(); ++i) hits += test[i].outputs == predictions[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

}  // namespace hmonn
