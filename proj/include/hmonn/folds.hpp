#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "hmonn/error.hpp"

namespace hmonn {

struct FoldSplit {
  std::size_t dataset_size = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::size_t>> test;  // one index list per fold

  [[nodiscard]] std::size_t folds() const noexcept { return test.size(); }

  // Every index not in fold f's test list, ascending.
  [[nodiscard]] std::vector<std::size_t> train(std::size_t f) const {
    std::vector<bool> held(dataset_size, false);
    for (auto i : test.at(f)) held[i] = true;
    std::vector<std::size_t> out;
    out.reserve(dataset_size - test[f].size());
    for (std::size_t i = 0; i < dataset_size; ++i)
      if (!held[i]) out.push_back(i);
    return out;
  }
};

// Seeded shuffle followed by a contiguous partition; the first
// `size % folds` folds receive one extra index.
inline FoldSplit make_folds(std::size_t size, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw PreconditionError("at least 2 folds are required");
  if (size < folds) throw PreconditionError("dataset has fewer instances than folds");
  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  FoldSplit split{size, seed, {}};
  const std::size_t base = size / folds, extra = size % folds;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t len = base + (f < extra ? 1 : 0);
    split.test.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(pos),
                            order.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  }
  return split;
}

}  // namespace hmonn
