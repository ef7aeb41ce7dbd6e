#pragma once

/*
 Exact-equality index from input vectors to the distinct output vectors they
 carry. A dataset in which some input vector carries two or more output
 vectors is a relation rather than a function; the fraction of such input
 vectors is the observable footprint of output dependence.

 Real cells are compared bit-exactly.
*/

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "hmonn/dataset.hpp"

namespace hmonn {

using InputKey = std::vector<std::uint64_t>;

struct InputKeyHash {
  std::size_t operator()(const InputKey& k) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto v : k) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

// Canonical key of a complete input row. Nominal cells map to their index and
// real cells to their IEEE-754 bit pattern; the schema fixes which is which.
inline InputKey input_key(std::span<const Cell> inputs) {
  InputKey key;
  key.reserve(inputs.size());
  for (const Cell& c : inputs) {
    if (const auto* n = std::get_if<std::int32_t>(&c))
      key.push_back(static_cast<std::uint64_t>(static_cast<std::uint32_t>(*n)));
    else if (const auto* r = std::get_if<double>(&c))
      key.push_back(std::bit_cast<std::uint64_t>(*r));
    else
      throw PreconditionError("input key requested for a row with missing cells");
  }
  return key;
}

class RelationIndex {
 public:
  struct Entry {
    InputKey key;
    std::vector<OutputVector> outputs;  // distinct, in first-seen order
    std::size_t occurrences = 0;
  };

  RelationIndex() = default;

  void add(std::span<const Cell> inputs, const OutputVector& outputs) {
    add_key(input_key(inputs), outputs);
  }

  void add_key(InputKey key, const OutputVector& outputs) {
    auto [it, inserted] = lookup_.try_emplace(std::move(key), entries_.size());
    if (inserted) entries_.push_back(Entry{it->first, {}, 0});
    Entry& e = entries_[it->second];
    ++e.occurrences;
    if (std::find(e.outputs.begin(), e.outputs.end(), outputs) == e.outputs.end()) e.outputs.push_back(outputs);
    ++total_;
  }

  [[nodiscard]] const Entry* find(const InputKey& key) const {
    auto it = lookup_.find(key);
    return it == lookup_.end() ? nullptr : &entries_[it->second];
  }

  [[nodiscard]] bool contains(const InputKey& key, const OutputVector& outputs) const {
    const Entry* e = find(key);
    return e && std::find(e->outputs.begin(), e->outputs.end(), outputs) != e->outputs.end();
  }

  // Entries in first-seen order.
  [[nodiscard]] const std::vector<Entry>& entries() const noexcept { return entries_; }
  [[nodiscard]] std::size_t key_count() const noexcept { return entries_.size(); }
  [[nodiscard]] std::size_t instance_count() const noexcept { return total_; }

  [[nodiscard]] std::size_t multi_output_keys() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(), [](const Entry& e) { return e.outputs.size() >= 2; }));
  }

  // Fraction of distinct input vectors carrying at least two distinct output
  // vectors; 0 for an empty index.
  [[nodiscard]] double multi_output_fraction() const noexcept {
    if (entries_.empty()) return 0.0;
    return static_cast<double>(multi_output_keys()) / static_cast<double>(entries_.size());
  }

 private:
  std::unordered_map<InputKey, std::size_t, InputKeyHash> lookup_;
  std::vector<Entry> entries_;
  std::size_t total_ = 0;
};

inline RelationIndex build_relation_index(const Dataset& dataset) {
  require_complete(dataset, "build_relation_index");
  RelationIndex index;
  for (const auto& inst : dataset.instances()) index.add(inst.inputs, inst.outputs);
  return index;
}

}  // namespace hmonn
