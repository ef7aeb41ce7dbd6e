#pragma once

/*
 Two-sided Wilcoxon signed-rank test for paired samples.

 Zero differences are dropped and tied |differences| receive average ranks.
 Up to 20 nonzero pairs the p-value comes from the exact null distribution
 of W+ (every sign assignment equally likely), computed by counting subsets
 of the doubled ranks. Above that the normal approximation with tie and
 continuity correction is used.
*/

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "hmonn/error.hpp"

namespace hmonn {

enum class Direction { None, FirstGreater, SecondGreater };

// Auto: exact up to kExactLimit nonzero pairs, normal approximation above.
enum class WilcoxonMethod { Auto, Exact, Normal };

struct WilcoxonResult {
  bool sufficient = false;  // false: fewer than kMinPairs nonzero differences, no verdict
  std::size_t n = 0;        // nonzero differences used
  double w_plus = 0.0;      // rank sum of positive (a - b)
  double w_minus = 0.0;
  double statistic = 0.0;   // min(W+, W-)
  double p_value = 1.0;
  bool exact = false;
  Direction direction = Direction::None;

  [[nodiscard]] bool significant(double alpha = 0.05) const noexcept { return sufficient && p_value < alpha; }

  static constexpr std::size_t kMinPairs = 5;
  static constexpr std::size_t kExactLimit = 20;
};

namespace detail {

// Ranks of |d| (1-based, ties averaged), returned doubled so they are integers.
inline std::vector<std::int64_t> doubled_ranks(std::span<const double> abs_diffs) {
  const std::size_t n = abs_diffs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return abs_diffs[i] < abs_diffs[j]; });
  std::vector<std::int64_t> ranks(n);
  for (std::size_t lo = 0; lo < n;) {
    std::size_t hi = lo;
    while (hi + 1 < n && abs_diffs[order[hi + 1]] == abs_diffs[order[lo]]) ++hi;
    const auto twice_avg = static_cast<std::int64_t>((lo + 1) + (hi + 1));
    for (std::size_t t = lo; t <= hi; ++t) ranks[order[t]] = twice_avg;
    lo = hi + 1;
  }
  return ranks;
}

inline double standard_normal_upper_two_sided(double z) { return std::erfc(z / std::sqrt(2.0)); }

}  // namespace detail

inline WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                           WilcoxonMethod method = WilcoxonMethod::Auto) {
  if (a.size() != b.size()) throw PreconditionError("paired samples must have equal length");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) diffs.push_back(a[i] - b[i]);

  WilcoxonResult r;
  r.n = diffs.size();
  if (r.n == 0) return r;
  // Below kMinPairs the statistic and p-value are still computed, but no
  // verdict is drawn from them.
  r.sufficient = r.n >= WilcoxonResult::kMinPairs;

  std::vector<double> abs_d(r.n);
  std::transform(diffs.begin(), diffs.end(), abs_d.begin(), [](double d) { return std::fabs(d); });
  const auto ranks2 = detail::doubled_ranks(abs_d);
  std::int64_t w_plus2 = 0, total2 = 0;
  for (std::size_t i = 0; i < r.n; ++i) {
    total2 += ranks2[i];
    if (diffs[i] > 0) w_plus2 += ranks2[i];
  }
  r.w_plus = static_cast<double>(w_plus2) / 2.0;
  r.w_minus = static_cast<double>(total2 - w_plus2) / 2.0;
  r.statistic = std::min(r.w_plus, r.w_minus);
  r.direction = r.w_plus > r.w_minus   ? Direction::FirstGreater
                : r.w_plus < r.w_minus ? Direction::SecondGreater
                                       : Direction::None;

  if (method == WilcoxonMethod::Exact && r.n > 62) throw PreconditionError("exact Wilcoxon limited to 62 pairs");
  const bool use_exact = method == WilcoxonMethod::Exact ||
                         (method == WilcoxonMethod::Auto && r.n <= WilcoxonResult::kExactLimit);
  if (use_exact) {
    // counts[s] = number of sign assignments whose doubled W+ equals s.
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(total2) + 1, 0);
    counts[0] = 1;
    std::int64_t reach = 0;
    for (auto rk : ranks2) {
      for (std::int64_t s = reach; s >= 0; --s)
        if (counts[static_cast<std::size_t>(s)]) counts[static_cast<std::size_t>(s + rk)] += counts[static_cast<std::size_t>(s)];
      reach += rk;
    }
    std::uint64_t low = 0, high = 0;
    for (std::int64_t s = 0; s <= total2; ++s) {
      if (s <= w_plus2) low += counts[static_cast<std::size_t>(s)];
      if (s >= w_plus2) high += counts[static_cast<std::size_t>(s)];
    }
    const double all = std::ldexp(1.0, static_cast<int>(r.n));
    r.p_value = std::min(1.0, 2.0 * static_cast<double>(std::min(low, high)) / all);
    r.exact = true;
    return r;
  }

  const double n = static_cast<double>(r.n);
  const double mean = n * (n + 1.0) / 4.0;
  double tie_term = 0.0;
  {
    std::vector<std::int64_t> sorted = ranks2;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t lo = 0; lo < sorted.size();) {
      std::size_t hi = lo;
      while (hi + 1 < sorted.size() && sorted[hi + 1] == sorted[lo]) ++hi;
      const double t = static_cast<double>(hi - lo + 1);
      tie_term += t * t * t - t;
      lo = hi + 1;
    }
  }
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
  if (!(var > 0.0)) {
    r.p_value = 1.0;
    return r;
  }
  const double z = std::max(0.0, std::fabs(r.w_plus - mean) - 0.5) / std::sqrt(var);
  r.p_value = std::min(1.0, detail::standard_normal_upper_two_sided(z));
  return r;
}

inline WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b,
                                           WilcoxonMethod method = WilcoxonMethod::Auto) {
  return wilcoxon_signed_rank(std::span<const double>(a), std::span<const double>(b), method);
}

inline const char* to_string(Direction d) {
  switch (d) {
    case Direction::FirstGreater: return "first>second";
    case Direction::SecondGreater: return "second>first";
    default: return "none";
  }
}

}  // namespace hmonn
