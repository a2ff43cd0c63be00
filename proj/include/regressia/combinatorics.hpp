#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "regressia/error.hpp"
#include "regressia/tuple.hpp"

namespace regressia {

/// Hard limits. Exceeding one raises BudgetError; nothing is silently truncated.
struct Caps {
  std::size_t max_arity = 8;                 // ot(k) enumeration
  std::size_t ramsey_exhaustive_size = 20;   // |E| for exhaustive homogeneous search
  std::size_t ramsey_exhaustive_arity = 3;
  std::size_t assignment_scope = 12;         // |ground| for default exhaustive property scopes
  std::size_t greedy_domain = 16;            // |dom f| during direct completion
  std::size_t completion_points = 16;        // |Y^k| in is_completion
  std::size_t closure_size = 1u << 20;
  std::uint64_t function_space = 1u << 22;   // adversary count for threshold_H
  std::size_t code_subsets = 1u << 12;       // 2^{|S^k|} bound for restriction codes
};

inline const Caps& default_caps() {
  static const Caps caps;
  return caps;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

/// Saturating a^b.
inline std::uint64_t ipow(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < b; ++i) {
    if (a != 0 && r > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
    r *= a;
  }
  return r;
}

/// 2^x < y without overflow.
inline bool pow2_less(Nat x, Nat y) { return x < 63 && (Nat{1} << x) < y; }

/// Calls fn(std::span<const std::size_t>) on every k-subset of {0..n-1} as increasing
/// index lists, in lexicographic order. Stops early when fn returns false.
template <class Fn>
void for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!fn(std::span<const std::size_t>(idx))) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Every k-subset of `values` (increasing) as an IndexSet, lexicographic order.
inline std::vector<IndexSet> subsets_of_size(std::span<const Nat> values, std::size_t k) {
  std::vector<IndexSet> out;
  for_each_combination(values.size(), k, [&](std::span<const std::size_t> idx) {
    std::vector<Nat> xs;
    for (auto i : idx) xs.push_back(values[i]);
    out.emplace_back(std::move(xs));
    return true;
  });
  return out;
}

/// Seeded generator. Bounded draws use rejection sampling on the raw 64-bit
/// stream so results do not depend on the standard library's distributions.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  bool coin() { return below(2) == 1; }

  /// A uniformly random p-subset of `values`, increasing.
  std::vector<Nat> sample(std::span<const Nat> values, std::size_t p) {
    std::vector<Nat> pool(values.begin(), values.end());
    for (std::size_t i = 0; i < p && i < pool.size(); ++i) {
      std::size_t j = i + below(pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(std::min(p, pool.size()));
    std::sort(pool.begin(), pool.end());
    return pool;
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace regressia
