#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ciprng {

/// Thrown when an operation is called outside its contract.
class contract_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw contract_error(what);
}

inline constexpr int kMinComponents = 2;
inline constexpr int kMaxComponents = 16;

/// A point of B^n held as its integer encoding. Components are numbered
/// 1..n with component 1 the most significant bit, so e.g. for n=4 the
/// value 4 reads 0100 and component 2 is set.
class Configuration {
 public:
  Configuration(int n, std::uint32_t value) : n_(n), value_(value) {
    require(n >= kMinComponents && n <= kMaxComponents,
            "Configuration: n out of [2,16]");
    require(value < (1u << n), "Configuration: value exceeds 2^n-1");
  }

  int n() const { return n_; }
  std::uint32_t value() const { return value_; }

  /// Component i in [1, n]; component 1 is the MSB.
  bool bit(int i) const {
    check_index(i);
    return (value_ >> (n_ - i)) & 1u;
  }

  Configuration with_bit(int i, bool b) const {
    check_index(i);
    std::uint32_t mask = 1u << (n_ - i);
    return Configuration(n_, b ? (value_ | mask) : (value_ & ~mask));
  }

  Configuration flipped(int i) const {
    check_index(i);
    return Configuration(n_, value_ ^ (1u << (n_ - i)));
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  void check_index(int i) const {
    require(i >= 1 && i <= n_, "Configuration: component index out of [1,n]");
  }

  int n_;
  std::uint32_t value_;
};

/// A map B^n -> B^n stored as its truth table: images[v] is the integer
/// encoding of f applied to the configuration encoded by v.
class BooleanFunction {
 public:
  BooleanFunction(int n, std::vector<std::uint32_t> images,
                  std::string name = {})
      : n_(n), images_(std::move(images)), name_(std::move(name)) {
    require(n >= kMinComponents && n <= kMaxComponents,
            "BooleanFunction: n out of [2,16]");
    require(images_.size() == (std::size_t{1} << n),
            "BooleanFunction: truth table must have 2^n entries");
    for (std::uint32_t v : images_)
      require(v < (1u << n), "BooleanFunction: image exceeds 2^n-1");
  }

  /// The vectorial negation: every component switches everywhere.
  static BooleanFunction negation(int n) {
    std::uint32_t size = 1u << n;
    std::vector<std::uint32_t> images(size);
    for (std::uint32_t v = 0; v < size; ++v) images[v] = ~v & (size - 1);
    return BooleanFunction(n, std::move(images), "negation");
  }

  static BooleanFunction identity(int n) {
    std::uint32_t size = 1u << n;
    std::vector<std::uint32_t> images(size);
    for (std::uint32_t v = 0; v < size; ++v) images[v] = v;
    return BooleanFunction(n, std::move(images), "identity");
  }

  int n() const { return n_; }
  const std::vector<std::uint32_t>& images() const { return images_; }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  std::uint32_t image_of(std::uint32_t v) const {
    require(v < images_.size(), "BooleanFunction: input exceeds 2^n-1");
    return images_[v];
  }

  /// Component function f_i evaluated on the encoding v.
  bool component(int i, std::uint32_t v) const {
    require(i >= 1 && i <= n_, "BooleanFunction: component index out of [1,n]");
    return (image_of(v) >> (n_ - i)) & 1u;
  }

  friend bool operator==(const BooleanFunction& a, const BooleanFunction& b) {
    return a.n_ == b.n_ && a.images_ == b.images_;
  }

 private:
  int n_;
  std::vector<std::uint32_t> images_;
  std::string name_;
};

/// The sequence of component indices driving which bit may update at each
/// step. Finite prefix of the (conceptually infinite) strategy.
class Strategy {
 public:
  Strategy() = default;
  Strategy(std::vector<int> terms, int n) : terms_(std::move(terms)) {
    for (int t : terms_)
      require(t >= 1 && t <= n, "Strategy: term out of [1,n]");
  }

  const std::vector<int>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  int operator[](std::size_t t) const { return terms_[t]; }

 private:
  std::vector<int> terms_;
};

/// N(i,x): x with component i switched.
inline Configuration neighbor(const Configuration& x, int i) {
  return x.flipped(i);
}

/// One chaotic-iteration step: component s takes f_s(x), all others keep
/// their value. The result differs from x in at most one component.
inline Configuration step_F(const BooleanFunction& f, int s,
                            const Configuration& x) {
  require(f.n() == x.n(), "step_F: function/configuration size mismatch");
  require(s >= 1 && s <= f.n(), "step_F: component index out of [1,n]");
  return x.with_bit(s, f.component(s, x.value()));
}

// Unchecked single step on raw encodings, for generator hot loops.
// bitpos = n - s must already be valid.
inline std::uint32_t step_raw(const std::vector<std::uint32_t>& images, int n,
                              int s, std::uint32_t x) {
  int bitpos = n - s;
  std::uint32_t bit = (images[x] >> bitpos) & 1u;
  return (x & ~(1u << bitpos)) | (bit << bitpos);
}

/// k steps of the driven system: x^{t+1} = F_f(S^t, x^t), consuming the
/// first k strategy terms.
inline Configuration iterate_G(const BooleanFunction& f,
                               const Strategy& strategy,
                               const Configuration& x0, std::size_t k) {
  require(strategy.size() >= k, "iterate_G: strategy shorter than k");
  Configuration x = x0;
  for (std::size_t t = 0; t < k; ++t) x = step_F(f, strategy[t], x);
  return x;
}

/// iterate_G with every intermediate state recorded; states[0] = x0.
inline std::vector<Configuration> trace_G(const BooleanFunction& f,
                                          const Strategy& strategy,
                                          const Configuration& x0,
                                          std::size_t k) {
  require(strategy.size() >= k, "trace_G: strategy shorter than k");
  std::vector<Configuration> states;
  states.reserve(k + 1);
  states.push_back(x0);
  for (std::size_t t = 0; t < k; ++t)
    states.push_back(step_F(f, strategy[t], states.back()));
  return states;
}

inline int hamming(std::uint32_t a, std::uint32_t b) {
  return __builtin_popcount(a ^ b);
}

}  // namespace ciprng
