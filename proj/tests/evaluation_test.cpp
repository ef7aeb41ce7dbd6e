#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "test_support.hpp"

using namespace hmonn;
using namespace hmonn::testing;

namespace {

// Double-loop membership: correct when z is the row's own label or any
// training row with identical inputs carries z.
double mod_accuracy_oracle(const Dataset& train, const std::vector<Instance>& test,
                           const std::vector<OutputVector>& z) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    bool ok = z[i] == test[i].outputs;
    for (const auto& t : train.instances()) ok = ok || (t.inputs == test[i].inputs && t.outputs == z[i]);
    hits += ok;
  }
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

// Two-sided p by enumerating all 2^n sign assignments of the (averaged) ranks.
double wilcoxon_enumeration(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) d.push_back(a[i] - b[i]);
  const std::size_t n = d.size();
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n; ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      less += std::fabs(d[j]) < std::fabs(d[i]);
      equal += std::fabs(d[j]) == std::fabs(d[i]);
    }
    ranks[i] = less + (equal + 1) / 2;
  }
  double w = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (d[i] > 0) w += ranks[i];
  std::size_t low = 0, high = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) s += ranks[i];
    low += s <= w + 1e-9;
    high += s >= w - 1e-9;
  }
  return std::min(1.0, 2.0 * static_cast<double>(std::min(low, high)) / std::ldexp(1.0, static_cast<int>(n)));
}

}  // namespace

TEST(ModAccuracy, AllTrueLabelsIsOne) {
  Rng rng(1);
  const auto s = mixed_schema(0, {3}, {2});
  const auto train = random_dataset(s, 10, rng);
  const auto test = random_dataset(s, 8, rng);
  std::vector<OutputVector> z;
  for (const auto& r : test.instances()) z.push_back(r.outputs);
  const auto idx = build_relation_index(train);
  EXPECT_EQ(mod_accuracy({idx, test.instances(), z}), 1.0);
}

TEST(ModAccuracy, TrainingMembershipCounts) {
  Schema s({{"x", nominal_kind(2)}}, {{"y", nominal_kind(2)}});
  const Dataset train(s, {Instance{{std::int32_t{0}}, {1}}});
  const std::vector<Instance> test{Instance{{std::int32_t{0}}, {0}}};
  const std::vector<OutputVector> z{{1}};
  EXPECT_EQ(mod_accuracy({build_relation_index(train), test, z}), 1.0);
}

TEST(ModAccuracy, OneHitOneMiss) {
  Schema s({{"x", nominal_kind(3)}}, {{"y", nominal_kind(3)}});
  const Dataset train(s, {Instance{{std::int32_t{0}}, {1}}, Instance{{std::int32_t{1}}, {2}}});
  const std::vector<Instance> test{Instance{{std::int32_t{0}}, {0}}, Instance{{std::int32_t{2}}, {0}}};
  const std::vector<OutputVector> z{{1}, {2}};  // first via training membership, second matches nothing
  EXPECT_EQ(mod_accuracy({build_relation_index(train), test, z}), 0.5);
}

TEST(ModAccuracy, RequiresOnePredictionPerRow) {
  Schema s({{"x", nominal_kind(2)}}, {{"y", nominal_kind(2)}});
  const Dataset train(s, {});
  const std::vector<Instance> test{Instance{{std::int32_t{0}}, {0}}};
  const std::vector<OutputVector> z;
  EXPECT_THROW((void)mod_accuracy({build_relation_index(train), test, z}), PreconditionError);
}

TEST(ModAccuracy, MatchesDoubleLoopOracle) {
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    const auto s = random_schema(rng);
    const auto train = random_dataset(s, 5 + t % 20, rng);
    const auto test = random_dataset(s, 1 + t % 10, rng);
    std::vector<OutputVector> z;
    for (std::size_t i = 0; i < test.size(); ++i) z.push_back(random_instance(s, rng).outputs);
    EXPECT_EQ(mod_accuracy({build_relation_index(train), test.instances(), z}),
              mod_accuracy_oracle(train, test.instances(), z));
  }
}

TEST(ModAccuracy, EqualsExactMatchOnFunctionalTraining) {
  Schema s({{"x", nominal_kind(6)}}, {{"y", nominal_kind(3)}});
  std::vector<Instance> rows;
  for (std::int32_t x = 0; x < 6; ++x) rows.push_back(Instance{{x}, {x % 3}});
  const Dataset train(s, rows);
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    std::vector<Instance> test;
    std::vector<OutputVector> z;
    for (int i = 0; i < 6; ++i) {
      const std::int32_t x = std::uniform_int_distribution<std::int32_t>(0, 5)(rng);
      test.push_back(Instance{{x}, {x % 3}});
      z.push_back({std::uniform_int_distribution<std::int32_t>(0, 2)(rng)});
    }
    EXPECT_EQ(mod_accuracy({build_relation_index(train), test, z}), exact_match_accuracy(test, z));
  }
}

TEST(ModAccuracy, MonotoneInTrainingSet) {
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    const auto s = mixed_schema(0, {2, 2}, {2, 2});
    auto train = random_dataset(s, 8, rng).instances();
    const auto test = random_dataset(s, 10, rng);
    std::vector<OutputVector> z;
    for (std::size_t i = 0; i < test.size(); ++i) z.push_back(random_instance(s, rng).outputs);
    double prev = mod_accuracy({build_relation_index(Dataset(s, train)), test.instances(), z});
    for (int add = 0; add < 10; ++add) {
      train.push_back(random_instance(s, rng));
      const double now = mod_accuracy({build_relation_index(Dataset(s, train)), test.instances(), z});
      EXPECT_GE(now, prev);
      prev = now;
    }
  }
}

TEST(Folds, EvenAndRemainderSizes) {
  const auto even = make_folds(100, 10, 1);
  for (const auto& f : even.test) EXPECT_EQ(f.size(), 10u);
  const auto odd = make_folds(101, 10, 1);
  std::multiset<std::size_t> sizes;
  for (const auto& f : odd.test) sizes.insert(f.size());
  EXPECT_EQ(sizes.count(10), 9u);
  EXPECT_EQ(sizes.count(11), 1u);
}

TEST(Folds, DeterministicDisjointCoveringProperty) {
  for (std::size_t size = 2; size < 80; size += 7) {
    for (std::size_t folds = 2; folds <= std::min<std::size_t>(size, 12); folds += 3) {
      const auto a = make_folds(size, folds, size * 31 + folds);
      const auto b = make_folds(size, folds, size * 31 + folds);
      EXPECT_EQ(a.test, b.test);
      std::vector<int> seen(size, 0);
      std::size_t lo = size, hi = 0;
      for (std::size_t f = 0; f < folds; ++f) {
        lo = std::min(lo, a.test[f].size());
        hi = std::max(hi, a.test[f].size());
        for (auto i : a.test[f]) ++seen[i];
        const auto train = a.train(f);
        EXPECT_EQ(train.size() + a.test[f].size(), size);
        for (auto i : train) EXPECT_TRUE(std::find(a.test[f].begin(), a.test[f].end(), i) == a.test[f].end());
      }
      EXPECT_LE(hi - lo, 1u);
      EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
    }
  }
}

TEST(Folds, Preconditions) {
  EXPECT_THROW(make_folds(5, 1, 0), PreconditionError);
  EXPECT_THROW(make_folds(5, 6, 0), PreconditionError);
}

namespace {

Dataset cv_dataset(std::uint64_t seed = 1, std::size_t n = 150) {
  SyntheticConfig c;
  c.kind = FeatureType::Nominal;
  c.outputs = 2;
  c.centroids = 2;
  c.instances = n;
  c.seed = seed;
  return generate_synthetic(c);
}

HmonnConfig quick_config() {
  HmonnConfig c;
  c.mlp = quick_mlp(0, 15);
  return c;
}

}  // namespace

TEST(CrossValidate, OracleModelScoresOne) {
  const auto d = cv_dataset();
  const auto split = make_folds(d.size(), 10, 3);
  const auto acc = cross_validate_with(d, split, [](const Dataset&, std::uint64_t) -> Predictor {
    return [](const Instance& row) { return row.outputs; };
  });
  for (double a : acc) EXPECT_EQ(a, 1.0);
}

TEST(CrossValidate, ImpossibleVectorScoresZero) {
  // Output arity 4 but labels only use 0..3; the vector (-1, -1) never occurs.
  const auto d = cv_dataset();
  const auto split = make_folds(d.size(), 5, 3);
  const auto acc = cross_validate_with(d, split, [](const Dataset&, std::uint64_t) -> Predictor {
    return [](const Instance&) { return OutputVector{-1, -1}; };
  });
  for (double a : acc) EXPECT_EQ(a, 0.0);
}

TEST(CrossValidate, FoldSeedsDerivedFromSplitSeed) {
  const auto d = cv_dataset();
  const auto split = make_folds(d.size(), 4, 77);
  std::vector<std::uint64_t> seeds(4);
  std::vector<std::size_t> sizes(4);
  cross_validate_with(d, split, [&](const Dataset& train, std::uint64_t seed) -> Predictor {
    const auto f = static_cast<std::size_t>(std::find(seeds.begin(), seeds.end(), 0) - seeds.begin());
    seeds[f] = seed;
    sizes[f] = train.size();
    return [](const Instance& row) { return row.outputs; };
  });
  for (std::size_t f = 0; f < 4; ++f) {
    EXPECT_EQ(seeds[f], fold_seed(77, f));
    EXPECT_EQ(sizes[f], d.size() - split.test[f].size());
  }
}

TEST(CrossValidate, PairedEqualsSeparateRunsAndIsThreadIndependent) {
  const auto d = cv_dataset(2, 120);
  const auto split = make_folds(d.size(), 5, 9);
  const auto cfg = quick_config();
  const auto paired = cross_validate_paired(d, cfg, split);
  EXPECT_EQ(paired.naive, cross_validate(d, ModelKind::Naive, cfg, split));
  EXPECT_EQ(paired.hmonn, cross_validate(d, ModelKind::Hmonn, cfg, split));
  const auto threaded = cross_validate_paired(d, cfg, split, 3);
  EXPECT_EQ(threaded.naive, paired.naive);
  EXPECT_EQ(threaded.hmonn, paired.hmonn);
  for (double a : paired.hmonn) {
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 1.0);
  }
}

TEST(CrossValidate, RejectsMissingCellsAndMismatchedSplit) {
  Schema s({{"r", real_kind()}}, {{"y", nominal_kind(2)}});
  std::vector<Instance> rows;
  for (int i = 0; i < 10; ++i) rows.push_back(Instance{{i == 3 ? Cell{Missing{}} : Cell{i * 1.0}}, {i % 2}});
  const Dataset d(s, rows);
  EXPECT_THROW(cross_validate(d, ModelKind::Naive, quick_config(), make_folds(10, 2, 0)), PreconditionError);
  const auto ok = cv_dataset();
  EXPECT_THROW(cross_validate(ok, ModelKind::Naive, quick_config(), make_folds(10, 2, 0)), PreconditionError);
}

TEST(Sweep, GridShapeAndSingleCellConsistency) {
  const auto d = cv_dataset(3, 100);
  const auto split = make_folds(d.size(), 5, 4);
  const auto cfg = quick_config();
  const auto grid = sweep(d, {1, 3, 7}, {0.0, 0.5, 1.0}, split, cfg.mlp);
  EXPECT_EQ(grid.cells(), 9u);
  for (std::size_t ki = 0; ki < 3; ++ki)
    for (std::size_t ti = 0; ti < 3; ++ti) {
      HmonnConfig c = cfg;
      c.k = grid.ks[ki];
      c.theta = grid.thetas[ti];
      EXPECT_EQ(grid.fold_accuracy[grid.cell(ki, ti)], cross_validate(d, ModelKind::Hmonn, c, split))
          << "k=" << c.k << " theta=" << c.theta;
    }
}

TEST(Sweep, DefaultDimensions) {
  const auto d = cv_dataset(4, 60);
  const auto split = make_folds(d.size(), 3, 4);
  std::vector<std::size_t> ks(11);
  std::iota(ks.begin(), ks.end(), std::size_t{1});
  const auto grid = sweep(d, ks, {0, 0.25, 0.5, 0.75, 1}, split, quick_mlp(0, 5));
  EXPECT_EQ(grid.cells(), 55u);
  EXPECT_EQ(grid.fold_accuracy.size(), 55u);
  EXPECT_THROW(sweep(d, {}, {0.5}, split, quick_mlp()), PreconditionError);
  EXPECT_THROW(sweep(d, {1}, {1.5}, split, quick_mlp()), PreconditionError);
}

TEST(Wilcoxon, EqualSamplesInsufficient) {
  const std::vector<double> a{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  const auto r = wilcoxon_signed_rank(a, a);
  EXPECT_FALSE(r.sufficient);
  EXPECT_EQ(r.n, 0u);
  EXPECT_FALSE(r.significant());
}

TEST(Wilcoxon, FewerThanFiveNonzeroHasNoVerdict) {
  const std::vector<double> a{1, 2, 3, 4, 5, 6}, b{0, 1, 2, 3, 5, 6};
  const auto r = wilcoxon_signed_rank(a, b);
  EXPECT_EQ(r.n, 4u);
  EXPECT_FALSE(r.sufficient);
  EXPECT_FALSE(r.significant());
}

TEST(Wilcoxon, AllPositiveEightPairs) {
  std::vector<double> a, b;
  for (int i = 0; i < 8; ++i) {
    a.push_back(1.0 + i);
    b.push_back(0.5 * i);
  }
  const auto r = wilcoxon_signed_rank(a, b);
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.p_value, 0.0078125);
  EXPECT_EQ(r.w_plus, 36.0);
  EXPECT_EQ(r.direction, Direction::FirstGreater);
}

TEST(Wilcoxon, MatchesEnumerationOracle) {
  Rng rng(5);
  std::uniform_int_distribution<int> value(0, 6);
  for (std::size_t n = 1; n <= 12; ++n) {
    for (int t = 0; t < 30; ++t) {
      std::vector<double> a(n), b(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = value(rng);  // small integers give ties and zeros
        b[i] = value(rng);
      }
      const auto r = wilcoxon_signed_rank(a, b, WilcoxonMethod::Exact);
      if (r.n == 0) continue;
      EXPECT_NEAR(r.p_value, wilcoxon_enumeration(a, b), 1e-12) << "n=" << n;
    }
  }
}

TEST(Wilcoxon, AntisymmetricProperty) {
  Rng rng(6);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 5 + static_cast<std::size_t>(t % 30);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = g(rng) + 0.3;
      b[i] = g(rng);
    }
    const auto ab = wilcoxon_signed_rank(a, b), ba = wilcoxon_signed_rank(b, a);
    EXPECT_EQ(ab.p_value, ba.p_value);
    EXPECT_EQ(ab.w_plus, ba.w_minus);
    const Direction flipped = ab.direction == Direction::FirstGreater    ? Direction::SecondGreater
                              : ab.direction == Direction::SecondGreater ? Direction::FirstGreater
                                                                         : Direction::None;
    EXPECT_EQ(ba.direction, flipped);
  }
}

TEST(Wilcoxon, ExactAndNormalAgreeWithoutTies) {
  Rng rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::size_t n = 10; n <= 20; ++n) {
    for (int t = 0; t < 20; ++t) {
      std::vector<double> a(n), b(n, 0.0);
      for (auto& x : a) x = g(rng) + 0.2 * (t % 4);
      const auto exact = wilcoxon_signed_rank(a, b, WilcoxonMethod::Exact);
      const auto normal = wilcoxon_signed_rank(a, b, WilcoxonMethod::Normal);
      EXPECT_LT(std::fabs(exact.p_value - normal.p_value), 0.02) << "n=" << n;
    }
  }
}

TEST(Wilcoxon, AutoSwitchesAtTwenty) {
  std::vector<double> a20(20), a21(21);
  std::iota(a20.begin(), a20.end(), 1.0);
  std::iota(a21.begin(), a21.end(), 1.0);
  EXPECT_TRUE(wilcoxon_signed_rank(a20, std::vector<double>(20, 0.0)).exact);
  EXPECT_FALSE(wilcoxon_signed_rank(a21, std::vector<double>(21, 0.0)).exact);
  const auto r = wilcoxon_signed_rank(a21, std::vector<double>(21, 0.0));
  EXPECT_GE(r.p_value, 0.0);
  EXPECT_LE(r.p_value, 1.0);
}

TEST(Wilcoxon, LengthMismatchRejected) {
  EXPECT_THROW(wilcoxon_signed_rank(std::vector<double>{1, 2}, std::vector<double>{1}), PreconditionError);
}
