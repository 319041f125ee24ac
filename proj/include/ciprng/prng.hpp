#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ciprng/bitcore.hpp"
#include "ciprng/bits.hpp"
#include "ciprng/graphgen.hpp"
#include "ciprng/xorshift.hpp"

namespace ciprng {

/// Binomial-partition map: the unique j with sum_{i<j} C(n,i) <= k <
/// sum_{i<=j} C(n,i). Under a uniform draw on [0, 2^n-1] the output j has
/// probability C(n,j)/2^n, the share of configurations reachable by
/// negating exactly j of n components.
inline int reallocate(std::uint32_t k, int n) {
  require(n >= kMinComponents && n <= kMaxComponents,
          "reallocate: n out of [2,16]");
  require(k < (1u << n), "reallocate: k out of [0, 2^n-1]");
  std::uint32_t cumulative = 0;
  std::uint32_t binom = 1;  // C(n, 0)
  for (int j = 0; j <= n; ++j) {
    cumulative += binom;
    if (k < cumulative) return j;
    binom = binom * static_cast<std::uint32_t>(n - j) /
            static_cast<std::uint32_t>(j + 1);
  }
  throw contract_error("reallocate: unreachable");
}

/// k distinct component indices from [1, n], uniform over k-subsets and in
/// random order (partial Fisher-Yates shuffle driven by rng).
template <class Rng>
std::vector<int> sample(Rng& rng, int k, int n) {
  require(n >= 1 && n <= kMaxComponents, "sample: n out of [1,16]");
  require(k >= 0 && k <= n, "sample: k out of [0,n]");
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i + 1;
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(rng() % static_cast<std::uint32_t>(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

/// The (XORshift, XORshift) generator: each round draws a switch count k
/// through reallocate, then iterates G on a freshly sampled strategy of k
/// distinct components. One rng state feeds both draws.
///
/// The round's k-draw uses a uniform value on [0, 2^n-1] so the whole
/// reallocate partition is reachable; strict_paper restores the original
/// modulus 2^n-1, under which k = n never occurs.
template <class Rng = Xorshift32>
class LegacyGenerator {
 public:
  LegacyGenerator(BooleanFunction f, Rng rng, Configuration x0,
                  bool strict_paper = false)
      : f_(std::move(f)),
        rng_(std::move(rng)),
        n_(f_.n()),
        x_(x0.value()),
        strict_paper_(strict_paper) {
    require(f_.n() == x0.n(), "LegacyGenerator: f and x0 disagree on n");
  }

  /// The original instantiation: f is the vectorial negation.
  static LegacyGenerator with_negation(int n, Rng rng, Configuration x0,
                                       bool strict_paper = false) {
    return LegacyGenerator(BooleanFunction::negation(n), std::move(rng), x0,
                           strict_paper);
  }

  std::uint32_t round() {
    const std::uint32_t modulus =
        strict_paper_ ? (1u << n_) - 1 : (1u << n_);
    const int k = reallocate(rng_() % modulus, n_);
    const std::vector<int> strategy = sample(rng_, k, n_);
    for (int s : strategy) x_ = step_raw(f_.images(), n_, s, x_);
    return x_;
  }

  int n() const { return n_; }
  std::uint32_t state() const { return x_; }
  const BooleanFunction& function() const { return f_; }

 private:
  BooleanFunction f_;
  Rng rng_;
  int n_;
  std::uint32_t x_;
  bool strict_paper_;
};

/// The chaotic-iteration generator for an arbitrary strongly connected
/// function: each round performs b or b+1 single-component steps, the
/// component drawn as (rng mod n) mapped to 1-based indices.
template <class Rng = Xorshift32>
class CiGenerator {
 public:
  CiGenerator(BooleanFunction f, std::size_t b, Rng rng, Configuration x0)
      : f_(std::move(f)),
        b_(b),
        rng_(std::move(rng)),
        n_(static_cast<std::uint32_t>(f_.n())),
        x_(x0.value()) {
    require(f_.n() == x0.n(), "CiGenerator: f and x0 disagree on n");
    require(b >= 1, "CiGenerator: b must be >= 1");
    require(is_strongly_connected(build_graph(f_)),
            "CiGenerator: iteration graph must be strongly connected");
  }

  std::uint32_t round() {
    const std::size_t k = b_ + (rng_() % 2);
    const std::uint32_t* images = f_.images().data();
    const int n = static_cast<int>(n_);
    std::uint32_t x = x_;
    for (std::size_t i = 0; i < k; ++i) {
      const int s = static_cast<int>(rng_() % n_) + 1;
      const int bitpos = n - s;
      const std::uint32_t bit = (images[x] >> bitpos) & 1u;
      x = (x & ~(1u << bitpos)) | (bit << bitpos);
    }
    x_ = x;
    return x_;
  }

  int n() const { return static_cast<int>(n_); }
  std::size_t b() const { return b_; }
  std::uint32_t state() const { return x_; }
  const BooleanFunction& function() const { return f_; }

 private:
  BooleanFunction f_;
  std::size_t b_;
  Rng rng_;
  std::uint32_t n_;
  std::uint32_t x_;
};

/// Concatenates `rounds` successive outputs as bits, component 1 first,
/// for a total of rounds * n bits.
template <class Generator>
BitStream bitstream(Generator& generator, std::size_t rounds) {
  require(rounds >= 1, "bitstream: rounds must be >= 1");
  BitStream out;
  out.reserve(rounds * static_cast<std::size_t>(generator.n()));
  for (std::size_t r = 0; r < rounds; ++r)
    out.append_configuration(generator.round(), generator.n());
  return out;
}

/// Successive integer outputs, the "one decimal configuration per line"
/// format's backing data and the repartition matrix's input.
template <class Generator>
std::vector<std::uint32_t> output_sequence(Generator& generator,
                                           std::size_t rounds) {
  require(rounds >= 1, "output_sequence: rounds must be >= 1");
  std::vector<std::uint32_t> out;
  out.reserve(rounds);
  for (std::size_t r = 0; r < rounds; ++r) out.push_back(generator.round());
  return out;
}

}  // namespace ciprng
