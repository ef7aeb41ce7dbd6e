#pragma once

/*
 k-fold cross-validation scored with MOD accuracy.

 Fold f trains on every row outside its test list, with the MLP seed
 fold_seed(split.seed, f), and scores its test rows against the relation
 index of its own training rows.
*/

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "hmonn/dataset.hpp"
#include "hmonn/folds.hpp"
#include "hmonn/hmonn.hpp"
#include "hmonn/metrics.hpp"
#include "hmonn/naive.hpp"
#include "hmonn/parallel.hpp"
#include "hmonn/relation_index.hpp"
#include "hmonn/seed.hpp"

namespace hmonn {

enum class ModelKind { Naive, Hmonn };

inline const char* to_string(ModelKind k) { return k == ModelKind::Naive ? "naive" : "hmonn"; }

inline std::uint64_t fold_seed(std::uint64_t master, std::size_t fold) {
  return derive_seed(master, {0xf01dULL, fold});
}

using Predictor = std::function<OutputVector(const Instance&)>;

// trainer(train_rows, seed) returns a Predictor for one fold. Predictors get
// the full test Instance so oracle models can be expressed; real models only
// read its inputs.
template <class Trainer>
std::vector<double> cross_validate_with(const Dataset& dataset, const FoldSplit& split, Trainer&& trainer,
                                        std::size_t jobs = 1) {
  require_complete(dataset, "cross_validate");
  if (split.dataset_size != dataset.size()) throw PreconditionError("fold split does not match the dataset size");
  std::vector<double> acc(split.folds());
  parallel_for(split.folds(), jobs, [&](std::size_t f) {
    const Dataset train = dataset.subset(split.train(f));
    const RelationIndex index = build_relation_index(train);
    Predictor predict = trainer(train, fold_seed(split.seed, f));
    std::vector<Instance> test;
    std::vector<OutputVector> predictions;
    for (auto i : split.test[f]) {
      test.push_back(dataset[i]);
      predictions.push_back(predict(dataset[i]));
    }
    acc[f] = mod_accuracy({index, test, predictions});
  });
  return acc;
}

inline HmonnConfig with_seed(HmonnConfig c, std::uint64_t seed) {
  c.mlp.seed = seed;
  return c;
}

inline std::vector<double> cross_validate(const Dataset& dataset, ModelKind kind, const HmonnConfig& config,
                                          const FoldSplit& split, std::size_t jobs = 1) {
  config.validate();
  return cross_validate_with(
      dataset, split,
      [&](const Dataset& train, std::uint64_t seed) -> Predictor {
        if (kind == ModelKind::Naive) {
          auto model = std::make_shared<NaiveModel>(train_naive(train, with_seed(config, seed).mlp));
          return [model](const Instance& row) { return predict_naive(*model, row.inputs); };
        }
        auto model = std::make_shared<HmonnModel>(train_hmonn(train, with_seed(config, seed)));
        return [model](const Instance& row) { return predict_hmonn(*model, row.inputs); };
      },
      jobs);
}

struct PairedFolds {
  std::vector<double> naive;
  std::vector<double> hmonn;
};

// Both models from one training run per fold: the naive model is exactly the
// HMONN first layer (same data, same seed), so the results equal two
// separate cross_validate calls.
inline PairedFolds cross_validate_paired(const Dataset& dataset, const HmonnConfig& config, const FoldSplit& split,
                                         std::size_t jobs = 1) {
  config.validate();
  require_complete(dataset, "cross_validate");
  if (split.dataset_size != dataset.size()) throw PreconditionError("fold split does not match the dataset size");
  PairedFolds out{std::vector<double>(split.folds()), std::vector<double>(split.folds())};
  parallel_for(split.folds(), jobs, [&](std::size_t f) {
    const Dataset train = dataset.subset(split.train(f));
    const RelationIndex index = build_relation_index(train);
    const HmonnModel model = train_hmonn(train, with_seed(config, fold_seed(split.seed, f)));
    std::size_t naive_hits = 0, hmonn_hits = 0;
    for (auto i : split.test[f]) {
      const auto p = explain_hmonn(model, dataset[i].inputs);
      naive_hits += mod_correct(index, dataset[i], p.initial) ? 1 : 0;
      hmonn_hits += mod_correct(index, dataset[i], p.refined) ? 1 : 0;
    }
    const auto n = static_cast<double>(split.test[f].size());
    out.naive[f] = static_cast<double>(naive_hits) / n;
    out.hmonn[f] = static_cast<double>(hmonn_hits) / n;
  });
  return out;
}

inline double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

struct AccuracyGrid {
  std::vector<std::size_t> ks;
  std::vector<double> thetas;
  // fold_accuracy[cell(ki, ti)][fold]
  std::vector<std::vector<double>> fold_accuracy;

  [[nodiscard]] std::size_t cell(std::size_t ki, std::size_t ti) const noexcept { return ki * thetas.size() + ti; }
  [[nodiscard]] double mean_at(std::size_t ki, std::size_t ti) const { return mean(fold_accuracy[cell(ki, ti)]); }
  [[nodiscard]] std::size_t cells() const noexcept { return ks.size() * thetas.size(); }
};

// Cross-validated HMONN accuracy for every (k, theta) pair. The naive layer is
// trained once per fold and the neighbor list for the largest k is reused for
// the smaller ones, which is exact because the search order is total.
inline AccuracyGrid sweep(const Dataset& dataset, const std::vector<std::size_t>& ks, const std::vector<double>& thetas,
                          const FoldSplit& split, const MlpConfig& mlp, std::size_t jobs = 1) {
  require_complete(dataset, "sweep");
  if (ks.empty() || thetas.empty()) throw PreconditionError("sweep needs at least one k and one theta");
  if (split.dataset_size != dataset.size()) throw PreconditionError("fold split does not match the dataset size");
  for (auto k : ks)
    if (k < 1) throw PreconditionError("k must be at least 1");
  for (auto t : thetas)
    if (!(t >= 0.0 && t <= 1.0)) throw PreconditionError("theta must lie in [0,1]");
  mlp.validate();
  const std::size_t k_max = *std::max_element(ks.begin(), ks.end());

  AccuracyGrid grid{ks, thetas, std::vector<std::vector<double>>(ks.size() * thetas.size(),
                                                                  std::vector<double>(split.folds()))};
  parallel_for(split.folds(), jobs, [&](std::size_t f) {
    const Dataset train = dataset.subset(split.train(f));
    if (k_max > train.size()) throw PreconditionError("k exceeds the number of training instances");
    const RelationIndex index = build_relation_index(train);
    auto [encoder, store] = encode(train);
    MlpConfig c = resolve_hidden(train.schema(), mlp);
    c.seed = fold_seed(split.seed, f);
    const NaiveModel naive = train_naive(encoder, store, c);

    std::vector<std::size_t> hits(grid.cells(), 0);
    for (auto i : split.test[f]) {
      const EncodedPair e = encoder.encode_inputs(dataset[i].inputs);
      const OutputVector initial = predict_naive(naive, e.input());
      const PairView query{e.input(), initial};
      for (std::size_t ti = 0; ti < thetas.size(); ++ti) {
        const auto neighbors = knn_search(store, query, k_max, thetas[ti]);
        for (std::size_t ki = 0; ki < ks.size(); ++ki) {
          const auto z = majority_vector(store, std::span<const Neighbor>(neighbors.data(), ks[ki]));
          hits[grid.cell(ki, ti)] += mod_correct(index, dataset[i], z) ? 1 : 0;
        }
      }
    }
    for (std::size_t c2 = 0; c2 < grid.cells(); ++c2)
      grid.fold_accuracy[c2][f] = static_cast<double>(hits[c2]) / static_cast<double>(split.test[f].size());
  });
  return grid;
}

}  // namespace hmonn
