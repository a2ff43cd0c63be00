#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "regressia/combinatorics.hpp"
#include "regressia/ramsey.hpp"

namespace regressia {

/// F(A) < min(A) whenever min(A) > 0.
template <class SetFn>
void require_regressive(SetFn& F, Nat n, std::size_t k) {
  for_each_combination(n, k, [&](std::span<const std::size_t> idx) {
    std::vector<Nat> s(idx.begin(), idx.end());
    Nat v = F(std::span<const Nat>(s));
    if (s.front() > 0 && v >= s.front())
      throw PreconditionError("F is not regressive at " + IndexSet(s).str() + " (value " + std::to_string(v) + ")");
    return true;
  });
}

/// The case ladder that turns a regressive F into a regressive G forcing
/// spread between consecutive elements of homogeneous sets.
template <class SetFn>
  requires std::invocable<SetFn&, std::span<const Nat>>
SetColoring gadget_lemma_1_3(SetFn&& F, Nat n, std::size_t k) {
  if (k < 2) throw PreconditionError("the spread gadget needs k >= 2");
  require_regressive(F, n, k);
  SetColoring G;
  for_each_combination(n, k, [&](std::span<const std::size_t> idx) {
    std::vector<Nat> s(idx.begin(), idx.end());
    const Nat a1 = s[0], a2 = s[1];
    Nat value;
    if (a2 - a1 < a1) {
      value = a2 - a1;
    } else {
      std::optional<Nat> j;
      for (Nat c = 0; c < a1; ++c)
        if (c >= 63 || (Nat{1} << c) > a2) j = c;
      value = j ? *j : F(std::span<const Nat>(s));
    }
    G.emplace(std::move(s), value);
    return true;
  });
  return G;
}

inline SetColoring gadget_lemma_1_3(const SetColoring& F, Nat n, std::size_t k) {
  return gadget_lemma_1_3(lookup(F), n, k);
}

/// G(x) = (F(rng x), |min(x) - 1|) for strictly increasing x, (0, 0) otherwise.
template <class SetFn>
  requires std::invocable<SetFn&, std::span<const Nat>>
TupleMap gadget_lemma_1_5(SetFn&& F, Nat n, std::size_t k) {
  require_regressive(F, n, k);
  TupleMap G;
  for_each_tuple(std::span<const Nat>(IndexSet::range(n).vec()), k, [&](const Tuple& x) {
    bool increasing = true;
    for (std::size_t i = 1; i < x.arity(); ++i)
      if (x[i - 1] >= x[i]) increasing = false;
    if (!increasing) {
      G.emplace(x, Tuple{0, 0});
      return;
    }
    const Nat m = x.min();
    G.emplace(x, Tuple{F(x.coords()), m == 0 ? Nat{1} : m - 1});
  });
  return G;
}

inline TupleMap gadget_lemma_1_5(const SetColoring& F, Nat n, std::size_t k) {
  return gadget_lemma_1_5(lookup(F), n, k);
}

struct TheoremIVVerdict {
  bool holds = true;
  bool spread = true;
  std::optional<std::pair<Nat, Nat>> spread_violation;  // consecutive (x, y) with 2^x >= y
  MinHomogeneityVerdict homogeneity;
};

/// Min-homogeneity of F on S_k(E) together with 2^x < y for x < y in E.
/// Checking consecutive pairs suffices since 2^x is increasing.
template <class SetFn>
  requires std::invocable<SetFn&, std::span<const Nat>>
TheoremIVVerdict theorem_IV_check(SetFn&& F, const IndexSet& E, std::size_t k) {
  TheoremIVVerdict v;
  for (std::size_t i = 1; i < E.size(); ++i) {
    if (!pow2_less(E[i - 1], E[i])) {
      v.spread = false;
      v.spread_violation = std::make_pair(E[i - 1], E[i]);
      break;
    }
  }
  auto checked = [&](std::span<const Nat> s) {
    Nat value = F(s);
    if (s.front() > 0 && value >= s.front())
      throw PreconditionError("F is not regressive at " + IndexSet(std::vector<Nat>(s.begin(), s.end())).str());
    return value;
  };
  v.homogeneity = min_homogeneous_check(checked, E, k);
  v.holds = v.spread && v.homogeneity.holds;
  return v;
}

inline TheoremIVVerdict theorem_IV_check(const SetColoring& F, const IndexSet& E, std::size_t k) {
  return theorem_IV_check(lookup(F), E, k);
}

}  // namespace regressia
