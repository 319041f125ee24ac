#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "ciprng/bitcore.hpp"
#include "ciprng/xorshift.hpp"

namespace ciprng {

/// The iteration graph: one vertex per configuration of B^n, and an arc
/// labeled i from x to N(i,x) whenever iterating component i actually
/// switches that bit. Arcs are stored per source as a label bitmask, so
/// at most one arc per (source, label) by construction.
class IterationGraph {
 public:
  explicit IterationGraph(int n) : n_(n), masks_(std::size_t{1} << n, 0) {
    require(n >= kMinComponents && n <= kMaxComponents,
            "IterationGraph: n out of [2,16]");
  }

  int n() const { return n_; }
  std::uint32_t vertex_count() const { return 1u << n_; }

  bool has_arc(std::uint32_t x, int i) const {
    check(x, i);
    return (masks_[x] >> (i - 1)) & 1u;
  }

  void add_arc(std::uint32_t x, int i) {
    check(x, i);
    masks_[x] |= 1u << (i - 1);
  }

  void remove_arc(std::uint32_t x, int i) {
    check(x, i);
    masks_[x] &= ~(1u << (i - 1));
  }

  /// Arc (x,i) ends at N(i,x).
  std::uint32_t target(std::uint32_t x, int i) const {
    check(x, i);
    return x ^ (1u << (n_ - i));
  }

  /// Label bitmask of x's outgoing arcs; bit i-1 stands for label i.
  std::uint32_t arc_mask(std::uint32_t x) const { return masks_[x]; }

  int out_degree(std::uint32_t x) const { return std::popcount(masks_[x]); }

  std::size_t arc_count() const {
    std::size_t total = 0;
    for (std::uint32_t m : masks_) total += std::popcount(m);
    return total;
  }

  friend bool operator==(const IterationGraph&, const IterationGraph&) =
      default;

 private:
  void check(std::uint32_t x, int i) const {
    require(x < masks_.size(), "IterationGraph: vertex out of range");
    require(i >= 1 && i <= n_, "IterationGraph: label out of [1,n]");
  }

  int n_;
  std::vector<std::uint32_t> masks_;
};

/// Arc (x,i) is present iff f_i(x) != x_i, i.e. F_f(i,x) = N(i,x).
inline IterationGraph build_graph(const BooleanFunction& f) {
  IterationGraph g(f.n());
  const int n = f.n();
  for (std::uint32_t x = 0; x < g.vertex_count(); ++x) {
    std::uint32_t diff = f.images()[x] ^ x;
    while (diff != 0) {
      int bitpos = std::countr_zero(diff);
      diff &= diff - 1;
      g.add_arc(x, n - bitpos);
    }
  }
  return g;
}

/// Inverse of build_graph: f_i(x) = not x_i where an arc is present, x_i
/// otherwise. Round-trips exactly.
inline BooleanFunction function_from_graph(const IterationGraph& g) {
  const int n = g.n();
  std::vector<std::uint32_t> images(g.vertex_count());
  for (std::uint32_t x = 0; x < g.vertex_count(); ++x) {
    std::uint32_t flips = 0;
    std::uint32_t mask = g.arc_mask(x);
    while (mask != 0) {
      int label = std::countr_zero(mask) + 1;
      mask &= mask - 1;
      flips |= 1u << (n - label);
    }
    images[x] = x ^ flips;
  }
  return BooleanFunction(n, std::move(images));
}

/// True iff every vertex reaches every other one. Single Tarjan pass from
/// vertex 0: the graph is strongly connected iff the first component that
/// closes contains every vertex.
inline bool is_strongly_connected(const IterationGraph& g) {
  const std::uint32_t size = g.vertex_count();
  std::vector<std::int32_t> index(size, -1);
  std::vector<std::int32_t> low(size, 0);
  std::vector<bool> onstack(size, false);
  std::vector<std::uint32_t> stack;
  struct Frame {
    std::uint32_t v;
    std::uint32_t pending;  // labels not yet explored, as a bitmask
  };
  std::vector<Frame> frames;

  std::int32_t counter = 0;
  index[0] = low[0] = counter++;
  stack.push_back(0);
  onstack[0] = true;
  frames.push_back({0, g.arc_mask(0)});

  while (!frames.empty()) {
    Frame& top = frames.back();
    if (top.pending != 0) {
      int label = std::countr_zero(top.pending) + 1;
      top.pending &= top.pending - 1;
      std::uint32_t w = g.target(top.v, label);
      if (index[w] < 0) {
        index[w] = low[w] = counter++;
        stack.push_back(w);
        onstack[w] = true;
        frames.push_back({w, g.arc_mask(w)});
      } else if (onstack[w]) {
        low[top.v] = std::min(low[top.v], index[w]);
      }
    } else {
      std::uint32_t v = top.v;
      frames.pop_back();
      if (!frames.empty())
        low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] == index[v]) {
        std::uint32_t members = 0;
        while (true) {
          std::uint32_t w = stack.back();
          stack.pop_back();
          onstack[w] = false;
          ++members;
          if (w == v) break;
        }
        return members == size;
      }
    }
  }
  return false;  // unreachable: the root component always closes
}

struct GenerationParams {
  int n;
  double target_rate;  // fraction of the negation graph's arcs to remove
  int max_attempts;    // cap on consecutive failed removal trials
  std::uint32_t seed;
};

struct GenerationResult {
  BooleanFunction function;
  double achieved_rate;
  int removed;
  bool saturated;  // stopped on failures before reaching target_rate
};

/// Starts from the full negation graph and removes uniformly random arcs
/// as long as the remainder stays strongly connected. Stops once the
/// removal rate reaches target_rate or max_attempts consecutive trials
/// fail; in the latter case the result carries a saturation flag instead
/// of an error. Strong connectivity forces out-degree >= 1 everywhere, so
/// the rate can never exceed 1 - 1/n.
inline GenerationResult generate_scc_function(const GenerationParams& params) {
  require(params.n >= kMinComponents && params.n <= kMaxComponents,
          "generate_scc_function: n out of [2,16]");
  require(params.target_rate >= 0.0 && params.target_rate < 1.0,
          "generate_scc_function: target_rate out of [0,1)");
  require(params.max_attempts >= 1,
          "generate_scc_function: max_attempts must be >= 1");

  IterationGraph g = build_graph(BooleanFunction::negation(params.n));
  const int total = params.n << params.n;
  Xorshift32 rng(params.seed);

  auto uniform_below = [&rng](std::uint32_t bound) {
    std::uint32_t cutoff = (0u - bound) % bound;
    std::uint32_t r;
    do {
      r = rng();
    } while (r < cutoff);
    return r % bound;
  };

  int removed = 0;
  int consecutive_failures = 0;
  while (static_cast<double>(removed) / total < params.target_rate &&
         consecutive_failures < params.max_attempts) {
    std::uint32_t pick = uniform_below(static_cast<std::uint32_t>(total - removed));
    // Locate the pick-th present arc.
    std::uint32_t x = 0;
    for (;; ++x) {
      std::uint32_t deg = static_cast<std::uint32_t>(g.out_degree(x));
      if (pick < deg) break;
      pick -= deg;
    }
    std::uint32_t mask = g.arc_mask(x);
    for (std::uint32_t skip = pick; skip > 0; --skip) mask &= mask - 1;
    int label = std::countr_zero(mask) + 1;

    g.remove_arc(x, label);
    if (is_strongly_connected(g)) {
      ++removed;
      consecutive_failures = 0;
    } else {
      g.add_arc(x, label);
      ++consecutive_failures;
    }
  }

  double achieved = static_cast<double>(removed) / total;
  GenerationResult result{function_from_graph(g), achieved, removed,
                          achieved < params.target_rate};
  return result;
}

namespace detail {

// Plain-digraph view of an iteration graph (labels dropped) with the
// iterated color refinement used to prune the isomorphism search.
struct DigraphView {
  std::uint32_t size;
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::vector<std::uint32_t>> in;
  std::vector<int> color;

  explicit DigraphView(const IterationGraph& g)
      : size(g.vertex_count()), out(size), in(size), color(size, 0) {
    for (std::uint32_t x = 0; x < size; ++x) {
      std::uint32_t mask = g.arc_mask(x);
      while (mask != 0) {
        int label = std::countr_zero(mask) + 1;
        mask &= mask - 1;
        std::uint32_t y = g.target(x, label);
        out[x].push_back(y);
        in[y].push_back(x);
      }
    }
    for (auto& v : out) std::sort(v.begin(), v.end());
    for (auto& v : in) std::sort(v.begin(), v.end());
  }

  bool has_arc(std::uint32_t u, std::uint32_t v) const {
    return std::binary_search(out[u].begin(), out[u].end(), v);
  }

  std::vector<int> color_histogram() const {
    std::vector<int> hist;
    for (int c : color) {
      if (c >= static_cast<int>(hist.size())) hist.resize(c + 1, 0);
      ++hist[c];
    }
    return hist;
  }
};

// Iterated color refinement over BOTH graphs with one shared signature
// table per round, so equal structural classes get equal color ids across
// the two graphs. Returns the stable class count.
inline int refine_pair(DigraphView& a, DigraphView& b) {
  using Key = std::tuple<int, std::vector<int>, std::vector<int>>;
  auto signature = [](const DigraphView& g, std::uint32_t v) {
    std::vector<int> oc, ic;
    oc.reserve(g.out[v].size());
    ic.reserve(g.in[v].size());
    for (std::uint32_t w : g.out[v]) oc.push_back(g.color[w]);
    for (std::uint32_t w : g.in[v]) ic.push_back(g.color[w]);
    std::sort(oc.begin(), oc.end());
    std::sort(ic.begin(), ic.end());
    return Key{g.color[v], std::move(oc), std::move(ic)};
  };

  int classes = 1;
  while (true) {
    std::map<Key, int> table;
    std::vector<int> next_a(a.size), next_b(b.size);
    for (std::uint32_t v = 0; v < a.size; ++v) {
      auto [it, ins] = table.try_emplace(signature(a, v),
                                         static_cast<int>(table.size()));
      next_a[v] = it->second;
    }
    for (std::uint32_t v = 0; v < b.size; ++v) {
      auto [it, ins] = table.try_emplace(signature(b, v),
                                         static_cast<int>(table.size()));
      next_b[v] = it->second;
    }
    a.color = std::move(next_a);
    b.color = std::move(next_b);
    int refined = static_cast<int>(table.size());
    if (refined == classes) return refined;
    classes = refined;
  }
}

inline bool isomorphism_search(const DigraphView& a, const DigraphView& b) {
  const std::uint32_t size = a.size;

  // Match rarest color classes first.
  std::vector<int> hist_a = a.color_histogram();
  std::vector<std::uint32_t> order(size);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t u, std::uint32_t v) {
    int ha = hist_a[a.color[u]], hb = hist_a[a.color[v]];
    if (ha != hb) return ha < hb;
    return u < v;
  });

  std::vector<std::int32_t> map_ab(size, -1), map_ba(size, -1);

  auto consistent = [&](std::uint32_t u, std::uint32_t v) {
    if (a.color[u] != b.color[v]) return false;
    if (a.out[u].size() != b.out[v].size()) return false;
    if (a.in[u].size() != b.in[v].size()) return false;
    for (std::uint32_t w : a.out[u])
      if (map_ab[w] >= 0 && !b.has_arc(v, static_cast<std::uint32_t>(map_ab[w])))
        return false;
    for (std::uint32_t w : a.in[u])
      if (map_ab[w] >= 0 && !b.has_arc(static_cast<std::uint32_t>(map_ab[w]), v))
        return false;
    for (std::uint32_t w : b.out[v])
      if (map_ba[w] >= 0 && !a.has_arc(u, static_cast<std::uint32_t>(map_ba[w])))
        return false;
    for (std::uint32_t w : b.in[v])
      if (map_ba[w] >= 0 && !a.has_arc(static_cast<std::uint32_t>(map_ba[w]), u))
        return false;
    return true;
  };

  std::vector<std::uint32_t> candidate_pos(size, 0);
  std::size_t depth = 0;
  while (true) {
    if (depth == size) return true;
    std::uint32_t u = order[depth];
    bool advanced = false;
    for (std::uint32_t v = candidate_pos[depth]; v < size; ++v) {
      if (map_ba[v] >= 0) continue;
      if (!consistent(u, v)) continue;
      map_ab[u] = static_cast<std::int32_t>(v);
      map_ba[v] = static_cast<std::int32_t>(u);
      candidate_pos[depth] = v + 1;
      ++depth;
      if (depth < size) candidate_pos[depth] = 0;
      advanced = true;
      break;
    }
    if (advanced) continue;
    if (depth == 0) return false;
    --depth;
    std::uint32_t prev = order[depth];
    map_ba[map_ab[prev]] = -1;
    map_ab[prev] = -1;
  }
}

}  // namespace detail

/// True iff some vertex bijection maps the arc set of g1 onto that of g2.
/// Labels are ignored (each arc flips exactly one bit position, and
/// arbitrary vertex permutations do not preserve bit positions). Exact
/// backtracking with color-refinement pruning; a vertex-count mismatch is
/// just `false`.
inline bool are_isomorphic(const IterationGraph& g1, const IterationGraph& g2) {
  if (g1.vertex_count() != g2.vertex_count()) return false;
  if (g1.arc_count() != g2.arc_count()) return false;

  detail::DigraphView a(g1), b(g2);
  detail::refine_pair(a, b);
  if (a.color_histogram() != b.color_histogram()) return false;

  return detail::isomorphism_search(a, b);
}

/// One representative per isomorphism class, first-seen order preserved.
inline std::vector<BooleanFunction> dedup_functions(
    const std::vector<BooleanFunction>& fs) {
  std::vector<BooleanFunction> kept;
  std::vector<IterationGraph> kept_graphs;
  for (const BooleanFunction& f : fs) {
    if (!kept.empty())
      require(f.n() == kept.front().n(), "dedup_functions: mixed n");
    IterationGraph g = build_graph(f);
    bool duplicate = false;
    for (const IterationGraph& h : kept_graphs) {
      if (are_isomorphic(h, g)) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) {
      kept.push_back(f);
      kept_graphs.push_back(std::move(g));
    }
  }
  return kept;
}

}  // namespace ciprng
