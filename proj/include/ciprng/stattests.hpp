#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ciprng/bits.hpp"
#include "ciprng/special.hpp"

namespace ciprng {

/// Outcome of a single statistical test on one sequence; empty means the
/// test was not applicable (failed NIST precondition), which is distinct
/// from any p-value.
using TestOutcome = std::optional<double>;

/// Frequency (monobit): S = #ones - #zeros, p = erfc(|S| / sqrt(2n)).
inline double monobit(BitSpan bits) {
  const std::size_t n = bits.size();
  require(n >= 10, "monobit: sequence too short");
  const auto ones = static_cast<std::int64_t>(bits.count_ones());
  const std::int64_t s = 2 * ones - static_cast<std::int64_t>(n);
  return erfc(std::abs(static_cast<double>(s)) /
              std::sqrt(2.0 * static_cast<double>(n)));
}

/// Frequency within a block: chi^2 = 4M sum (pi_i - 1/2)^2 over the N
/// full blocks, p = igamc(N/2, chi^2/2).
inline double block_frequency(BitSpan bits, std::size_t block_length) {
  require(block_length >= 1, "block_frequency: block length must be >= 1");
  const std::size_t n = bits.size();
  const std::size_t blocks = n / block_length;
  require(blocks >= 1, "block_frequency: fewer than one full block");
  double chi2 = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    std::size_t ones = 0;
    for (std::size_t i = 0; i < block_length; ++i)
      ones += bits[b * block_length + i];
    double pi = static_cast<double>(ones) / static_cast<double>(block_length);
    chi2 += (pi - 0.5) * (pi - 0.5);
  }
  chi2 *= 4.0 * static_cast<double>(block_length);
  return igamc(static_cast<double>(blocks) / 2.0, chi2 / 2.0);
}

/// Runs test. Not applicable (empty outcome) when the one-proportion
/// precondition |pi - 1/2| >= 2/sqrt(n) fails.
inline TestOutcome runs(BitSpan bits) {
  const std::size_t n = bits.size();
  require(n >= 10, "runs: sequence too short");
  const double pi =
      static_cast<double>(bits.count_ones()) / static_cast<double>(n);
  if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(static_cast<double>(n)))
    return std::nullopt;
  std::size_t v = 1;
  for (std::size_t t = 0; t + 1 < n; ++t) v += bits[t] != bits[t + 1];
  const double expected = 2.0 * static_cast<double>(n) * pi * (1.0 - pi);
  const double denom =
      2.0 * std::sqrt(2.0 * static_cast<double>(n)) * pi * (1.0 - pi);
  return erfc(std::abs(static_cast<double>(v) - expected) / denom);
}

namespace detail {

struct LongestRunParams {
  std::size_t block_length;
  int k;  // category count - 1
  std::array<int, 7> thresholds;
  std::array<double, 7> probabilities;
};

// Standard parameterization: category probabilities for the longest run
// of ones within blocks of 8 / 128 / 10000 bits.
inline LongestRunParams longest_run_params(std::size_t n) {
  if (n < 6272)
    return {8, 3, {1, 2, 3, 4, 0, 0, 0}, {0.2148, 0.3672, 0.2305, 0.1875}};
  if (n < 750000)
    return {128,
            5,
            {4, 5, 6, 7, 8, 9, 0},
            {0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124}};
  return {10000,
          6,
          {10, 11, 12, 13, 14, 15, 16},
          {0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727}};
}

}  // namespace detail

/// Longest run of ones in a block, with the standard NIST categories.
inline double longest_run_of_ones(BitSpan bits) {
  const std::size_t n = bits.size();
  require(n >= 128, "longest_run_of_ones: need at least 128 bits");
  const auto params = detail::longest_run_params(n);
  const std::size_t blocks = n / params.block_length;
  std::array<std::size_t, 7> nu{};
  for (std::size_t b = 0; b < blocks; ++b) {
    int run = 0, best = 0;
    for (std::size_t i = 0; i < params.block_length; ++i) {
      run = bits[b * params.block_length + i] ? run + 1 : 0;
      if (run > best) best = run;
    }
    int cat;
    if (best <= params.thresholds[0])
      cat = 0;
    else if (best >= params.thresholds[params.k])
      cat = params.k;
    else
      cat = best - params.thresholds[0];
    ++nu[cat];
  }
  double chi2 = 0.0;
  for (int i = 0; i <= params.k; ++i) {
    const double expected =
        static_cast<double>(blocks) * params.probabilities[i];
    const double diff = static_cast<double>(nu[i]) - expected;
    chi2 += diff * diff / expected;
  }
  return igamc(static_cast<double>(params.k) / 2.0, chi2 / 2.0);
}

enum class CusumMode { forward, backward };

/// Cumulative sums: z is the maximal absolute +-1 partial sum (over the
/// reversed sequence in backward mode); the p-value comes from the normal
/// CDF series with the reference implementation's truncated k-bounds.
inline double cumulative_sums(BitSpan bits, CusumMode mode) {
  const std::int64_t n = static_cast<std::int64_t>(bits.size());
  require(n >= 10, "cumulative_sums: sequence too short");
  std::int64_t sum = 0, z = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::size_t idx = mode == CusumMode::forward
                                ? static_cast<std::size_t>(i)
                                : static_cast<std::size_t>(n - 1 - i);
    sum += bits[idx] ? 1 : -1;
    z = std::max(z, std::abs(sum));
  }
  const double sq = std::sqrt(static_cast<double>(n));
  const double zd = static_cast<double>(z);
  // C-style truncating division, matching the reference test suite.
  const std::int64_t k_hi = (n / z - 1) / 4;
  const std::int64_t k_lo1 = (-(n / z) + 1) / 4;
  const std::int64_t k_lo2 = (-(n / z) - 3) / 4;
  double sum1 = 0.0;
  for (std::int64_t k = k_lo1; k <= k_hi; ++k) {
    sum1 += normal_cdf(static_cast<double>(4 * k + 1) * zd / sq);
    sum1 -= normal_cdf(static_cast<double>(4 * k - 1) * zd / sq);
  }
  double sum2 = 0.0;
  for (std::int64_t k = k_lo2; k <= k_hi; ++k) {
    sum2 += normal_cdf(static_cast<double>(4 * k + 3) * zd / sq);
    sum2 -= normal_cdf(static_cast<double>(4 * k + 1) * zd / sq);
  }
  return 1.0 - sum1 + sum2;
}

namespace detail {

// Cyclic overlapping m-pattern counts; patterns encoded first-bit-MSB.
inline std::vector<std::uint32_t> cyclic_pattern_counts(BitSpan bits, int m) {
  const std::size_t n = bits.size();
  std::vector<std::uint32_t> counts(std::size_t{1} << m, 0);
  const std::uint32_t mask = (1u << m) - 1;
  std::uint32_t window = 0;
  for (int i = 0; i < m; ++i) window = (window << 1) | bits[i % n];
  ++counts[window];
  for (std::size_t i = 1; i < n; ++i) {
    window = ((window << 1) | bits[(i + m - 1) % n]) & mask;
    ++counts[window];
  }
  return counts;
}

// Folds m-pattern counts into (m-1)-pattern counts; cyclic overlapping
// occurrences extend uniquely by their next bit.
inline std::vector<std::uint32_t> fold_counts(
    const std::vector<std::uint32_t>& counts) {
  std::vector<std::uint32_t> folded(counts.size() / 2);
  for (std::size_t w = 0; w < folded.size(); ++w)
    folded[w] = counts[2 * w] + counts[2 * w + 1];
  return folded;
}

inline double psi_sq(const std::vector<std::uint32_t>& counts, std::size_t n) {
  double s = 0.0;
  for (std::uint32_t c : counts)
    s += static_cast<double>(c) * static_cast<double>(c);
  return s * static_cast<double>(counts.size()) / static_cast<double>(n) -
         static_cast<double>(n);
}

}  // namespace detail

struct SerialResult {
  double p1;
  double p2;
};

/// Serial test over cyclic overlapping patterns of lengths m, m-1, m-2.
/// The hard bound is 2^m < n; the stricter m < log2(n) - 2 is the standard
/// input-size recommendation and is what the battery defaults respect.
inline SerialResult serial(BitSpan bits, int m) {
  const std::size_t n = bits.size();
  require(m >= 1 && m <= 20, "serial: m out of [1,20]");
  require((std::size_t{1} << m) < n, "serial: m too large for sequence length");

  auto counts_m = detail::cyclic_pattern_counts(bits, m);
  const double psi_m = detail::psi_sq(counts_m, n);
  double psi_m1 = 0.0, psi_m2 = 0.0;
  if (m >= 2) {
    auto counts_m1 = detail::fold_counts(counts_m);
    psi_m1 = detail::psi_sq(counts_m1, n);
    if (m >= 3) psi_m2 = detail::psi_sq(detail::fold_counts(counts_m1), n);
  }
  const double del1 = psi_m - psi_m1;
  const double del2 = psi_m - 2.0 * psi_m1 + psi_m2;
  return {igamc(std::pow(2.0, m - 2), del1 / 2.0),
          igamc(std::pow(2.0, m - 3), del2 / 2.0)};
}

/// Approximate entropy: ApEn(m) = phi_m - phi_{m+1} over cyclic pattern
/// log-frequencies; chi^2 = 2n(ln 2 - ApEn), p = igamc(2^{m-1}, chi^2/2).
inline double approximate_entropy(BitSpan bits, int m) {
  const std::size_t n = bits.size();
  require(m >= 1 && m <= 20, "approximate_entropy: m out of [1,20]");
  require(static_cast<double>(m + 1) < std::log2(static_cast<double>(n)),
          "approximate_entropy: m too large for sequence length");

  auto phi = [&](int len) {
    auto counts = detail::cyclic_pattern_counts(bits, len);
    double total = 0.0;
    for (std::uint32_t c : counts) {
      if (c == 0) continue;
      const double pi = static_cast<double>(c) / static_cast<double>(n);
      total += pi * std::log(pi);
    }
    return total;
  };

  const double apen = phi(m) - phi(m + 1);
  const double chi2 = 2.0 * static_cast<double>(n) * (std::log(2.0) - apen);
  return igamc(std::pow(2.0, m - 1), chi2 / 2.0);
}

}  // namespace ciprng
