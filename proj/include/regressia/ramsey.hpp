#pragma once

#include <concepts>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "regressia/combinatorics.hpp"
#include "regressia/tuple.hpp"

namespace regressia {

/// A coloring of k-subsets, keyed by the increasing element list.
using SetColoring = std::map<std::vector<Nat>, Nat>;

/// Adapts a SetColoring to a callable that throws on missing keys.
inline auto lookup(const SetColoring& c) {
  return [&c](std::span<const Nat> s) -> Nat {
    auto it = c.find(std::vector<Nat>(s.begin(), s.end()));
    if (it == c.end()) {
      std::string key = "{";
      for (std::size_t i = 0; i < s.size(); ++i) key += (i ? "," : "") + std::to_string(s[i]);
      throw MissingKeyError("coloring is undefined on " + key + "}");
    }
    return it->second;
  };
}

struct RamseyResult {
  std::optional<IndexSet> subset;
  bool complete = true;  // false when a greedy pass was used and found nothing
  std::uint64_t explored = 0;
};

namespace detail {

// Does every k-subset of `chosen` that contains its last element have `color`?
template <class Color>
bool extends_homogeneously(const std::vector<Nat>& chosen, std::size_t k, Nat color, Color& c) {
  const std::size_t m = chosen.size();
  if (m < k) return true;
  bool ok = true;
  std::vector<Nat> key(k);
  for_each_combination(m - 1, k - 1, [&](std::span<const std::size_t> idx) {
    for (std::size_t i = 0; i + 1 < k; ++i) key[i] = chosen[idx[i]];
    key[k - 1] = chosen.back();
    if (c(std::span<const Nat>(key)) != color) {
      ok = false;
      return false;
    }
    return true;
  });
  return ok;
}

template <class Color>
bool ramsey_dfs(const IndexSet& E, std::size_t k, std::size_t p, std::size_t start, std::vector<Nat>& chosen,
                std::optional<Nat>& color, Color& c, std::uint64_t& explored) {
  if (chosen.size() == p) return true;
  for (std::size_t i = start; i + (p - chosen.size()) <= E.size(); ++i) {
    ++explored;
    chosen.push_back(E[i]);
    bool fixed_here = false;
    if (chosen.size() == k && !color) {
      color = c(std::span<const Nat>(chosen));
      fixed_here = true;
    }
    if ((!color || extends_homogeneously(chosen, k, *color, c)) &&
        ramsey_dfs(E, k, p, i + 1, chosen, color, c, explored))
      return true;
    if (fixed_here) color.reset();
    chosen.pop_back();
  }
  return false;
}

}  // namespace detail

/// A p-subset of E on which the coloring of k-subsets is constant. Exhaustive
/// (lexicographically least answer) within the caps; otherwise a greedy pass
/// whose negative answer is flagged incomplete.
template <class Color>
  requires std::invocable<Color&, std::span<const Nat>>
RamseyResult ramsey_homogeneous(Color&& c, const IndexSet& E, std::size_t k, std::size_t p,
                                const Caps& caps = default_caps()) {
  if (k == 0) throw PreconditionError("ramsey_homogeneous requires k >= 1");
  RamseyResult result;
  if (p > E.size()) return result;
  if (p < k) {
    result.subset = IndexSet(std::vector<Nat>(E.begin(), E.begin() + p));
    return result;
  }
  std::vector<Nat> chosen;
  std::optional<Nat> color;
  if (E.size() <= caps.ramsey_exhaustive_size && k <= caps.ramsey_exhaustive_arity) {
    if (detail::ramsey_dfs(E, k, p, 0, chosen, color, c, result.explored)) result.subset = IndexSet(chosen);
    return result;
  }
  // Greedy: from each starting point, keep every element that preserves homogeneity.
  for (std::size_t s = 0; s + p <= E.size(); ++s) {
    chosen.assign(1, E[s]);
    color.reset();
    for (std::size_t i = s + 1; i < E.size() && chosen.size() < p; ++i) {
      ++result.explored;
      chosen.push_back(E[i]);
      if (chosen.size() == k && !color) {
        color = c(std::span<const Nat>(chosen));
        continue;
      }
      if (color && !detail::extends_homogeneously(chosen, k, *color, c)) chosen.pop_back();
    }
    if (chosen.size() == p) {
      result.subset = IndexSet(chosen);
      return result;
    }
  }
  result.complete = false;
  return result;
}

inline RamseyResult ramsey_homogeneous(const SetColoring& c, const IndexSet& E, std::size_t k, std::size_t p,
                                       const Caps& caps = default_caps()) {
  auto f = lookup(c);
  for_each_combination(E.size(), k, [&](std::span<const std::size_t> idx) {
    std::vector<Nat> key;
    for (auto i : idx) key.push_back(E[i]);
    f(std::span<const Nat>(key));
    return true;
  });
  return ramsey_homogeneous(f, E, k, p, caps);
}

struct MinHomogeneityVerdict {
  bool holds = true;
  bool vacuous = false;
  std::optional<std::pair<IndexSet, IndexSet>> counterexample;
};

/// F(x) = F(y) for all x, y ∈ S_k(E) with min(x) = min(y).
template <class SetFn>
  requires std::invocable<SetFn&, std::span<const Nat>>
MinHomogeneityVerdict min_homogeneous_check(SetFn&& F, const IndexSet& E, std::size_t k) {
  MinHomogeneityVerdict v;
  if (E.size() < k) {
    v.vacuous = true;
    return v;
  }
  // Subsets come out in lexicographic order, so all sets with a given minimum
  // form a contiguous run whose first member serves as the reference.
  std::vector<Nat> ref;
  Nat ref_value = 0;
  for_each_combination(E.size(), k, [&](std::span<const std::size_t> idx) {
    std::vector<Nat> s;
    for (auto i : idx) s.push_back(E[i]);
    Nat value = F(std::span<const Nat>(s));
    if (ref.empty() || ref.front() != s.front()) {
      ref = s;
      ref_value = value;
      return true;
    }
    if (value != ref_value) {
      v.holds = false;
      v.counterexample = std::make_pair(IndexSet(ref), IndexSet(s));
      return false;
    }
    return true;
  });
  return v;
}

inline MinHomogeneityVerdict min_homogeneous_check(const SetColoring& F, const IndexSet& E, std::size_t k) {
  return min_homogeneous_check(lookup(F), E, k);
}

}  // namespace regressia
