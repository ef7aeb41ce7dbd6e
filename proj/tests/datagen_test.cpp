#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "test_support.hpp"

using namespace hmonn;
using namespace hmonn::testing;

namespace {

SyntheticConfig config(FeatureType kind, std::size_t outputs, std::size_t centroids, double mult,
                       std::size_t instances = 5000, std::uint64_t seed = 1) {
  SyntheticConfig c;
  c.kind = kind;
  c.outputs = outputs;
  c.centroids = centroids;
  c.multiplier = mult;
  c.instances = instances;
  c.seed = seed;
  return c;
}

// Single-output dataset with `nominal` nominal inputs (arity 3), `real` real
// inputs interleaved after every second nominal column, and `rows` rows.
Dataset single_output(std::size_t nominal, std::size_t real, std::size_t rows = 3) {
  std::vector<Column> in;
  std::size_t r = 0;
  for (std::size_t i = 0; i < nominal; ++i) {
    in.push_back({"n" + std::to_string(i), nominal_kind(3)});
    if (i % 2 == 1 && r < real) in.push_back({"r" + std::to_string(r++), real_kind()});
  }
  while (r < real) in.push_back({"r" + std::to_string(r++), real_kind()});
  Schema s(in, {{"class", nominal_kind(2)}});
  Rng rng(nominal * 100 + real);
  return random_dataset(s, rows, rng);
}

}  // namespace

TEST(Synthetic, RealShapeAndDeterminism) {
  const auto c = config(FeatureType::Real, 2, 4, 1.0);
  const auto d = generate_real(c);
  EXPECT_EQ(d.schema().input_count(), 6u);
  EXPECT_EQ(d.schema().output_count(), 2u);
  EXPECT_EQ(d.size(), 5000u);
  EXPECT_EQ(d, generate_real(c));
  auto other = c;
  other.seed = 2;
  EXPECT_NE(d, generate_real(other));
  EXPECT_EQ(d.provenance(), c.digest());
}

TEST(Synthetic, ProbabilityVectorCountAndRoundRobin) {
  const auto c = config(FeatureType::Real, 2, 2, 1.5);
  EXPECT_EQ(c.probability_vector_count(), 3u);
  const auto cs = synthetic_centroids(c);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[0].distributions.size(), 2u);
  EXPECT_EQ(cs[1].distributions.size(), 1u);
  EXPECT_EQ(config(FeatureType::Real, 2, 8, 2.0).probability_vector_count(), 16u);
}

TEST(Synthetic, DistributionsAreValidProperty) {
  for (auto kind : {FeatureType::Real, FeatureType::Nominal})
    for (const auto& c : grid_configs(kind, 5)) {
      for (const auto& centroid : synthetic_centroids(c)) {
        EXPECT_FALSE(centroid.distributions.empty());
        EXPECT_EQ(centroid.center.size(), c.input_count());
        for (double x : centroid.center) {
          if (kind == FeatureType::Real) {
            EXPECT_GE(x, 0.0);
            EXPECT_LE(x, 1.0);
          } else {
            EXPECT_EQ(x, std::round(x));
            EXPECT_GE(x, 0.0);
            EXPECT_LE(x, 3.0);
          }
        }
        for (const auto& pv : centroid.distributions) {
          EXPECT_GE(pv.support.size(), 2u);
          EXPECT_LE(pv.support.size(), 4u);
          double total = 0.0;
          for (double w : pv.weights) total += w;
          EXPECT_NEAR(total, 1.0, 1e-9);
          EXPECT_EQ(std::set<OutputVector>(pv.support.begin(), pv.support.end()).size(), pv.support.size());
          for (const auto& y : pv.support) {
            EXPECT_EQ(y.size(), c.outputs);
            for (auto v : y) EXPECT_TRUE(v >= 0 && v < 4);
          }
        }
      }
    }
}

TEST(Synthetic, NominalValuesClampedAndNearCenters) {
  const auto c = config(FeatureType::Nominal, 3, 4, 1.0, 2000);
  const auto d = generate_nominal(c);
  EXPECT_EQ(d.schema().input_count(), 9u);
  for (const auto& col : d.schema().inputs()) EXPECT_EQ(arity_of(col.kind), 4);
  const auto cs = synthetic_centroids(c);
  for (const auto& row : d.instances()) {
    bool near_some = false;
    for (const auto& centroid : cs) {
      bool near = true;
      for (std::size_t i = 0; i < row.inputs.size(); ++i) {
        const auto v = std::get<std::int32_t>(row.inputs[i]);
        ASSERT_TRUE(v >= 0 && v <= 3);
        near = near && std::abs(v - static_cast<int>(centroid.center[i])) <= 1;
      }
      near_some = near_some || near;
    }
    EXPECT_TRUE(near_some);
  }
}

TEST(Synthetic, ClampAtZeroOccurs) {
  // With a centre at 0 some perturbations of -1 must have been clamped; the
  // generated column then shows 0 more often than 1/3 of its centroid's rows.
  const auto c = config(FeatureType::Nominal, 2, 2, 1.0, 3000, 4);
  const auto cs = synthetic_centroids(c);
  const auto d = generate_nominal(c);
  for (std::size_t i = 0; i < c.input_count(); ++i) {
    if (cs[0].center[i] != 0.0 || cs[1].center[i] != 0.0) continue;
    std::size_t zeros = 0;
    for (const auto& row : d.instances()) zeros += std::get<std::int32_t>(row.inputs[i]) == 0;
    EXPECT_GT(zeros, d.size() / 2);
  }
}

TEST(Synthetic, KindMismatchRejected) {
  EXPECT_THROW(generate_real(config(FeatureType::Nominal, 2, 2, 1.0, 10)), PreconditionError);
  EXPECT_THROW(generate_nominal(config(FeatureType::Real, 2, 2, 1.0, 10)), PreconditionError);
  EXPECT_THROW(generate_synthetic(config(FeatureType::Real, 2, 3, 1.5, 10)), PreconditionError);
}

TEST(Grid, ThirtySixDistinctConfigs) {
  const auto cfgs = grid_configs(FeatureType::Real, 9);
  EXPECT_EQ(cfgs.size(), 36u);
  std::set<std::string> digests;
  std::set<std::uint64_t> seeds;
  std::map<std::size_t, int> per_output;
  for (const auto& c : cfgs) {
    digests.insert(c.digest());
    seeds.insert(c.seed);
    ++per_output[c.outputs];
    EXPECT_EQ(c.input_count(), 3 * c.outputs);
    EXPECT_EQ(c.instances, 5000u);
  }
  EXPECT_EQ(digests.size(), 36u);
  EXPECT_EQ(seeds.size(), 36u);
  EXPECT_EQ(per_output[2], 12);
  EXPECT_EQ(per_output[3], 12);
  EXPECT_EQ(per_output[4], 12);
}

TEST(Grid, Deterministic) {
  const auto a = generate_grid(FeatureType::Nominal, 3, 0.05, 300);
  ASSERT_EQ(a.size(), 36u);
  EXPECT_EQ(a, generate_grid(FeatureType::Nominal, 3, 0.05, 300));
  EXPECT_EQ(generate_grid(FeatureType::Real, 3, 0.05, 300), generate_grid(FeatureType::Real, 3, 0.05, 300));
}

TEST(Grid, NominalGridCarriesMultiOutputInputs) {
  // Full-size nominal grid: duplicated inputs with different output vectors
  // must show up on every dataset.
  for (std::uint64_t seed : {3, 4}) {
    std::size_t with_multi = 0;
    for (const auto& d : generate_grid(FeatureType::Nominal, seed))
      with_multi += build_relation_index(d).multi_output_fraction() > 0.0;
    EXPECT_EQ(with_multi, 36u) << "seed " << seed;
  }
}

TEST(Derivation, BinomialCounts) {
  EXPECT_EQ(binomial(32, 3), 4960u);
  EXPECT_EQ(binomial(7, 2), 21u);
  EXPECT_EQ(binomial(3, 3), 1u);
  EXPECT_EQ(binomial(2, 3), 0u);
}

TEST(Derivation, CountsForReferenceSchemas) {
  struct Row {
    std::size_t nominal, real, o2, o3, o4;
  };
  // Nominal-feature counts and derived-dataset counts of the TA, car, cmc and
  // anneal benchmark rows.
  for (const Row r : {Row{4, 1, 4, 6, 4}, Row{6, 0, 6, 15, 20}, Row{7, 2, 7, 21, 35}, Row{32, 6, 32, 496, 4960}}) {
    const auto d = single_output(r.nominal, r.real);
    EXPECT_EQ(derive_multi_output(d, 2).size(), r.o2);
    EXPECT_EQ(derive_multi_output(d, 3).size(), r.o3);
    EXPECT_EQ(derivation_subsets(d, 4).size(), r.o4);
  }
}

TEST(Derivation, ColumnsPartitionTheOriginal) {
  const auto d = single_output(5, 2, 10);
  std::set<std::string> original;
  for (const auto& c : d.schema().inputs()) original.insert(c.name);
  original.insert("class");
  for (std::size_t o = 2; o <= 4; ++o)
    for (const auto& derived : derive_multi_output(d, o)) {
      const auto& s = derived.schema();
      EXPECT_EQ(s.input_count() + s.output_count(), d.schema().input_count() + 1);
      EXPECT_EQ(s.output_count(), o);
      EXPECT_EQ(s.outputs().back().name, "class");
      std::set<std::string> got;
      for (const auto& c : s.inputs()) got.insert(c.name);
      for (const auto& c : s.outputs()) got.insert(c.name);
      EXPECT_EQ(got, original);
      // Promoted columns keep their original relative order.
      for (std::size_t j = 0; j + 2 < s.output_count(); ++j)
        EXPECT_LT(*d.schema().input_index(s.outputs()[j].name), *d.schema().input_index(s.outputs()[j + 1].name));
      // Cell values move with their columns.
      for (std::size_t i = 0; i < d.size(); ++i) {
        EXPECT_EQ(derived[i].outputs.back(), d[i].outputs[0]);
        for (std::size_t j = 0; j + 1 < s.output_count(); ++j)
          EXPECT_EQ(derived[i].outputs[j],
                    std::get<std::int32_t>(d[i].inputs[*d.schema().input_index(s.outputs()[j].name)]));
      }
      EXPECT_NE(derived.provenance().find("derived outputs="), std::string::npos);
    }
}

TEST(Derivation, ThreeNominalFourOutputsGivesOne) {
  EXPECT_EQ(derive_multi_output(single_output(3, 1), 4).size(), 1u);
}

TEST(Derivation, Preconditions) {
  EXPECT_THROW(derive_multi_output(single_output(2, 1), 4), PreconditionError);
  EXPECT_THROW(derive_multi_output(single_output(4, 0), 5), PreconditionError);
  Rng rng(1);
  const auto two = random_dataset(mixed_schema(1, {3, 3}, {2, 2}), 3, rng);
  EXPECT_THROW(derive_multi_output(two, 2), PreconditionError);
}

TEST(Derivation, CarSampleRows) {
  const auto car = load_dataset(std::filesystem::path(HMONN_TEST_DATA) / "car_sample.arff",
                                std::vector<std::string>{"class"});
  EXPECT_EQ(derive_multi_output(car, 2).size(), 6u);
  EXPECT_EQ(derive_multi_output(car, 3).size(), 15u);
  EXPECT_EQ(derive_multi_output(car, 4).size(), 20u);
}
