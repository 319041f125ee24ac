#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ciprng/bitcore.hpp"

namespace ciprng {

inline constexpr int kMaxMarkovComponents = 12;  // dense 2^n x 2^n storage
inline constexpr double kStochasticTolerance = 1e-12;

/// Row-stochastic matrix of the uniform-strategy chain: entry [x][y] is
/// the probability that one iteration with a uniformly random component
/// maps x to y. Entries are multiples of 1/n and vanish beyond Hamming
/// distance 1.
class TransitionMatrix {
 public:
  TransitionMatrix(int n, std::vector<double> data)
      : n_(n), size_(1u << n), data_(std::move(data)) {
    require(n >= kMinComponents && n <= kMaxMarkovComponents,
            "TransitionMatrix: n out of [2,12]");
    require(data_.size() == std::size_t{size_} * size_,
            "TransitionMatrix: wrong element count");
  }

  int n() const { return n_; }
  std::uint32_t size() const { return size_; }
  double at(std::uint32_t x, std::uint32_t y) const {
    return data_[std::size_t{x} * size_ + y];
  }
  const double* row(std::uint32_t x) const {
    return data_.data() + std::size_t{x} * size_;
  }

 private:
  int n_;
  std::uint32_t size_;
  std::vector<double> data_;
};

inline TransitionMatrix transition_matrix(const BooleanFunction& f) {
  const int n = f.n();
  require(n <= kMaxMarkovComponents, "transition_matrix: n capped at 12");
  const std::uint32_t size = 1u << n;
  std::vector<double> data(std::size_t{size} * size, 0.0);
  const double step = 1.0 / n;
  for (std::uint32_t x = 0; x < size; ++x) {
    for (int i = 1; i <= n; ++i) {
      std::uint32_t y = step_raw(f.images(), n, i, x);
      data[std::size_t{x} * size + y] += step;
    }
  }
  return TransitionMatrix(n, std::move(data));
}

/// Point mass at `start` pushed through t single-step transitions
/// (iterated vector-matrix products, never an explicit matrix power).
inline std::vector<double> reach_distribution(const TransitionMatrix& m,
                                              std::uint32_t start,
                                              std::size_t t) {
  const std::uint32_t size = m.size();
  require(start < size, "reach_distribution: start out of range");
  std::vector<double> p(size, 0.0), q(size);
  p[start] = 1.0;
  for (std::size_t step = 0; step < t; ++step) {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::uint32_t x = 0; x < size; ++x) {
      if (p[x] == 0.0) continue;
      const double* row = m.row(x);
      for (std::uint32_t y = 0; y < size; ++y) q[y] += p[x] * row[y];
    }
    p.swap(q);
  }
  return p;
}

inline void require_normalized(const std::vector<double>& p) {
  double sum = 0.0;
  for (double v : p) sum += v;
  require(std::abs(sum - 1.0) <= 1e-9,
          "probability vector does not sum to 1");
}

/// Mean absolute deviation from the uniform distribution:
/// sum_x |p(x) - 2^-n| / 2^n.
inline double deviation_rate(const std::vector<double>& p) {
  require(!p.empty(), "deviation_rate: empty vector");
  require_normalized(p);
  const double uniform = 1.0 / static_cast<double>(p.size());
  double total = 0.0;
  for (double v : p) total += std::abs(v - uniform);
  return total / static_cast<double>(p.size());
}

/// L1 distance to the uniform distribution: sum_x |p(x) - 2^-n|. This is
/// the quantity the deviation tables and the 1% stopping criterion are
/// expressed in (2^n times the mean deviation).
inline double uniform_l1_deviation(const std::vector<double>& p) {
  require(!p.empty(), "uniform_l1_deviation: empty vector");
  require_normalized(p);
  const double uniform = 1.0 / static_cast<double>(p.size());
  double total = 0.0;
  for (double v : p) total += std::abs(v - uniform);
  return total;
}

/// Deviation-per-iteration record for one function. `deviations[t-1]` is
/// the L1 deviation from uniform after t iterations; `floor_deviation` the
/// minimum over the horizon; `sufficient_iterations` the first t whose
/// deviation is within epsilon of that floor. Chains that never stabilize
/// (e.g. the negation's period-2 parity oscillation) carry convergent =
/// false and the detected period.
struct DeviationProfile {
  std::string function_name;
  std::uint32_t start = 0;
  std::vector<double> deviations;  // L1, index t-1
  double floor_deviation = 0.0;
  std::size_t sufficient_iterations = 0;
  bool convergent = true;
  std::size_t period = 1;  // 1 when the distribution stabilizes
};

namespace detail {

inline double l1_between(const std::vector<double>& a,
                         const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

}  // namespace detail

/// R^t for t = 1..t_max from the given start configuration, with the
/// floor/first-hit summary described on DeviationProfile.
inline DeviationProfile sufficient_iterations(const BooleanFunction& f,
                                              std::uint32_t start,
                                              double epsilon,
                                              std::size_t t_max) {
  require(epsilon > 0.0, "sufficient_iterations: epsilon must be positive");
  require(t_max >= 1, "sufficient_iterations: t_max must be >= 1");
  TransitionMatrix m = transition_matrix(f);
  const std::uint32_t size = m.size();
  require(start < size, "sufficient_iterations: start out of range");

  DeviationProfile profile;
  profile.function_name = f.name();
  profile.start = start;
  profile.deviations.reserve(t_max);

  std::vector<std::vector<double>> history;
  const std::size_t kHistoryWindow = 64;  // period detection lookback
  std::vector<double> p(size, 0.0), q(size);
  p[start] = 1.0;
  for (std::size_t t = 1; t <= t_max; ++t) {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::uint32_t x = 0; x < size; ++x) {
      if (p[x] == 0.0) continue;
      const double* row = m.row(x);
      for (std::uint32_t y = 0; y < size; ++y) q[y] += p[x] * row[y];
    }
    p.swap(q);
    profile.deviations.push_back(uniform_l1_deviation(p));
    if (history.size() == kHistoryWindow) history.erase(history.begin());
    history.push_back(p);
  }

  profile.floor_deviation = *std::min_element(profile.deviations.begin(),
                                              profile.deviations.end());
  profile.sufficient_iterations = t_max;
  for (std::size_t t = 1; t <= t_max; ++t) {
    if (std::abs(profile.deviations[t - 1] - profile.floor_deviation) <=
        epsilon) {
      profile.sufficient_iterations = t;
      break;
    }
  }

  // Stabilized iff the final distribution repeats with period 1; otherwise
  // record the smallest repeat distance seen in the trailing window.
  const double kStabilizationTol = 1e-9;
  profile.period = 0;
  for (std::size_t lag = 1; lag < history.size(); ++lag) {
    const auto& prev = history[history.size() - 1 - lag];
    if (detail::l1_between(history.back(), prev) <= kStabilizationTol) {
      profile.period = lag;
      break;
    }
  }
  profile.convergent = (profile.period == 1);
  return profile;
}

/// Worst-case variant: the profile whose sufficient_iterations is maximal
/// over all start configurations.
inline DeviationProfile sufficient_iterations_worst_case(
    const BooleanFunction& f, double epsilon, std::size_t t_max) {
  DeviationProfile worst;
  const std::uint32_t size = 1u << f.n();
  for (std::uint32_t start = 0; start < size; ++start) {
    DeviationProfile p = sufficient_iterations(f, start, epsilon, t_max);
    bool take = start == 0 ||
                (!p.convergent && worst.convergent) ||
                (p.convergent == worst.convergent &&
                 p.sufficient_iterations > worst.sufficient_iterations);
    if (take) worst = std::move(p);
  }
  return worst;
}

}  // namespace ciprng
