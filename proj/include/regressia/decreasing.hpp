#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "regressia/assignment.hpp"
#include "regressia/combinatorics.hpp"
#include "regressia/orders.hpp"

namespace regressia {

struct Counterexample {
  TupleSet A;
  std::optional<Tuple> x;
  std::optional<TupleSet> B;
  std::string details;
};

/// Outcome of a property audit. A failing verdict always carries a
/// counterexample that re-verifies against the raw definition.
struct PropertyVerdict {
  bool holds = true;
  std::optional<Counterexample> counterexample;
  std::uint64_t checked = 0;
};

/// (A, x) pairs for insertion properties.
using InsertionScope = std::vector<std::pair<TupleSet, Tuple>>;
/// (A, B) pairs for pairwise properties.
using PairScope = std::vector<std::pair<TupleSet, TupleSet>>;

/// Seeded random (A, x) pairs over the ground.
inline InsertionScope sample_insertion_scope(const TupleSet& ground, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  InsertionScope out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<Tuple> a;
    for (const auto& t : ground)
      if (rng.coin()) a.push_back(t);
    out.emplace_back(TupleSet(std::move(a)), ground[rng.below(ground.size())]);
  }
  return out;
}

inline PairScope sample_pair_scope(const TupleSet& ground, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  PairScope out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<Tuple> a, b;
    for (const auto& t : ground) {
      if (rng.coin()) a.push_back(t);
      if (rng.coin()) b.push_back(t);
    }
    out.emplace_back(TupleSet(std::move(a)), TupleSet(std::move(b)));
  }
  return out;
}

namespace detail {

// less[i] has bit j set when ground[j] < ground[i].
inline std::vector<std::uint64_t> below_masks(const StrictOrder& o, const TupleSet& ground) {
  std::vector<std::uint64_t> below(ground.size(), 0);
  for (std::size_t i = 0; i < ground.size(); ++i)
    for (std::size_t j = 0; j < ground.size(); ++j)
      if (o.less(ground[j], ground[i])) below[i] |= std::uint64_t{1} << j;
  return below;
}

inline bool has(std::uint64_t mask, std::size_t i) { return (mask >> i & 1) != 0; }

inline void check_scope_cap(const TupleSet& ground, const Caps& caps) {
  if (ground.size() > caps.assignment_scope)
    throw BudgetError("ground of " + std::to_string(ground.size()) + " tuples exceeds the exhaustive scope cap " +
                      std::to_string(caps.assignment_scope) + "; supply a sampled scope");
}

inline std::string describe_value(const TupleSet& ground, std::int16_t idx) {
  return idx < 0 ? std::string("undefined") : ground[static_cast<std::size_t>(idx)].str();
}

}  // namespace detail

/// <₁,<₂-#-decreasing: for each tested (A, x), either U(A) ⊆ U(A ∪ {x}), or some
/// y ∈ A with y >₁ x has U(A)(y) >₂ U(A ∪ {x})(y).
inline PropertyVerdict check_sharp_decreasing(const FunctionAssignment& U, const StrictOrder& o1,
                                              const StrictOrder& o2,
                                              const std::optional<InsertionScope>& scope = std::nullopt,
                                              const Caps& caps = default_caps()) {
  const TupleSet& ground = U.ground();
  if (!scope) detail::check_scope_cap(ground, caps);
  MaskedAssignment M(U);
  const auto below1 = detail::below_masks(o1, ground);
  const auto below2 = detail::below_masks(o2, ground);
  const std::size_t n = ground.size();
  PropertyVerdict v;

  auto test = [&](std::uint64_t a, std::size_t x) -> bool {
    ++v.checked;
    const std::uint64_t b = a | (std::uint64_t{1} << x);
    const auto& fa = M.at(a);
    const auto& fb = M.at(b);
    bool extends = true;
    for (std::size_t i = 0; i < n && extends; ++i)
      if (detail::has(a, i) && fa[i] != fb[i]) extends = false;
    if (extends) return true;
    for (std::size_t y = 0; y < n; ++y) {
      if (!detail::has(a, y) || !detail::has(below1[y], x)) continue;
      // U(A)(y) >₂ U(A∪{x})(y)
      if (detail::has(below2[static_cast<std::size_t>(fa[y])], static_cast<std::size_t>(fb[y]))) return true;
    }
    std::string details;
    for (std::size_t i = 0; i < n; ++i)
      if (detail::has(a, i) && fa[i] != fb[i]) {
        details = "U(A) and U(A u {x}) differ at " + ground[i].str() + " (" + detail::describe_value(ground, fa[i]) +
                  " vs " + detail::describe_value(ground, fb[i]) + ") with no drop above x";
        break;
      }
    v.holds = false;
    v.counterexample = Counterexample{ground.select(a), ground[x], std::nullopt, details};
    return false;
  };

  if (scope) {
    for (const auto& [A, x] : *scope) {
      std::uint64_t a = ground.mask_of(A);
      long xi = ground.index_of(x);
      if (xi < 0) throw MissingKeyError(x.str() + " is not in the ground");
      if (!test(a, static_cast<std::size_t>(xi))) return v;
    }
    return v;
  }
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t a = 0; a < count; ++a)
    for (std::size_t x = 0; x < n; ++x)
      if (!detail::has(a, x) && !test(a, x)) return v;
  return v;
}

/// <₁,<₂-*-decreasing: for tested (A, B) and x ∈ A ∩ B, if U(A) and U(B) agree at
/// every y ∈ A with y <₁ x, then U(A)(x) = U(B)(x) or U(A)(x) >₂ U(B)(x).
inline PropertyVerdict check_star_decreasing(const FunctionAssignment& U, const StrictOrder& o1,
                                             const StrictOrder& o2, const std::optional<PairScope>& scope = std::nullopt,
                                             const Caps& caps = default_caps()) {
  const TupleSet& ground = U.ground();
  if (!scope) detail::check_scope_cap(ground, caps);
  MaskedAssignment M(U);
  const auto below1 = detail::below_masks(o1, ground);
  const auto below2 = detail::below_masks(o2, ground);
  const std::size_t n = ground.size();
  PropertyVerdict v;

  auto test = [&](std::uint64_t a, std::uint64_t b) -> bool {
    ++v.checked;
    const auto& fa = M.at(a);
    const auto& fb = M.at(b);
    // Points of A where U(A) and U(B) disagree (undefined in B counts as disagreement).
    std::uint64_t diff = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (detail::has(a, i) && (!detail::has(b, i) || fa[i] != fb[i])) diff |= std::uint64_t{1} << i;
    const std::uint64_t both = a & b;
    for (std::size_t x = 0; x < n; ++x) {
      if (!detail::has(both, x) || (below1[x] & diff) != 0) continue;
      if (fa[x] == fb[x]) continue;
      if (detail::has(below2[static_cast<std::size_t>(fa[x])], static_cast<std::size_t>(fb[x]))) continue;
      v.holds = false;
      v.counterexample = Counterexample{ground.select(a), ground[x], ground.select(b),
                                        "agreement below x but U(A)(x) = " + detail::describe_value(ground, fa[x]) +
                                            " is neither equal to nor above U(B)(x) = " +
                                            detail::describe_value(ground, fb[x])};
      return false;
    }
    return true;
  };

  if (scope) {
    for (const auto& [A, B] : *scope)
      if (!test(ground.mask_of(A), ground.mask_of(B))) return v;
    return v;
  }
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t a = 0; a < count; ++a)
    for (std::uint64_t b = 0; b < count; ++b)
      if (!test(a, b)) return v;
  return v;
}

/// <₁-end-preserving: U(A) ⊆ U(B) whenever A is downward closed in B.
/// Scoped pairs that are not downward closed are skipped.
inline PropertyVerdict check_end_preserving(const FunctionAssignment& U, const StrictOrder& o1,
                                            const std::optional<PairScope>& scope = std::nullopt,
                                            const Caps& caps = default_caps()) {
  const TupleSet& ground = U.ground();
  if (!scope) detail::check_scope_cap(ground, caps);
  MaskedAssignment M(U);
  const auto below1 = detail::below_masks(o1, ground);
  const std::size_t n = ground.size();
  PropertyVerdict v;

  auto downward = [&](std::uint64_t a, std::uint64_t b) {
    if ((a & ~b) != 0) return false;
    for (std::size_t x = 0; x < n; ++x)
      if (detail::has(a, x) && (below1[x] & b & ~a) != 0) return false;
    return true;
  };

  auto test = [&](std::uint64_t a, std::uint64_t b) -> bool {
    if (!downward(a, b)) return true;
    ++v.checked;
    const auto& fa = M.at(a);
    const auto& fb = M.at(b);
    for (std::size_t i = 0; i < n; ++i) {
      if (detail::has(a, i) && fa[i] != fb[i]) {
        v.holds = false;
        v.counterexample = Counterexample{ground.select(a), ground[i], ground.select(b),
                                          "U(A)(x) = " + detail::describe_value(ground, fa[i]) + " but U(B)(x) = " +
                                              detail::describe_value(ground, fb[i])};
        return false;
      }
    }
    return true;
  };

  if (scope) {
    for (const auto& [A, B] : *scope)
      if (!test(ground.mask_of(A), ground.mask_of(B))) return v;
    return v;
  }
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t b = 0; b < count; ++b) {
    // Submasks of b, increasing.
    for (std::uint64_t a = 0;; a = (a - b) & b) {
      if (!test(a, b)) return v;
      if (a == b) break;
    }
  }
  return v;
}

}  // namespace regressia
