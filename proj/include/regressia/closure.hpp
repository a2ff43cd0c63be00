#pragma once

#include <set>

#include "regressia/combinatorics.hpp"
#include "regressia/tuple.hpp"

namespace regressia {

/// Distinct coordinates of x, increasing.
inline std::vector<Nat> coordinate_set(const Tuple& x) {
  std::vector<Nat> cs(x.coords().begin(), x.coords().end());
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  return cs;
}

/// Every arity-k tuple y with y ⊆ x.
inline std::vector<Tuple> coordinate_subtuples(const Tuple& x) {
  std::vector<Tuple> out;
  auto cs = coordinate_set(x);
  for_each_tuple(std::span<const Nat>(cs), x.arity(), [&](Tuple t) { out.push_back(std::move(t)); });
  return out;
}

/// Least closed superset: the union of coords(y)^k over members y.
inline TupleSet closure(const TupleSet& A, const Caps& caps = default_caps()) {
  std::set<Tuple> acc;
  for (const auto& y : A) {
    auto cs = coordinate_set(y);
    for_each_tuple(std::span<const Nat>(cs), y.arity(), [&](Tuple t) {
      acc.insert(std::move(t));
      if (acc.size() > caps.closure_size)
        throw BudgetError("closure exceeds the size cap " + std::to_string(caps.closure_size));
    });
  }
  return TupleSet(std::vector<Tuple>(acc.begin(), acc.end()));
}

/// Closed: x ⊆ y and y ∈ A imply x ∈ A.
inline bool is_closed(const TupleSet& A) {
  for (const auto& y : A) {
    for (const auto& x : coordinate_subtuples(y))
      if (!A.contains(x)) return false;
  }
  return true;
}

/// A' = { x ∈ A : every y ⊆ x lies in A }.
inline TupleSet closed_core(const TupleSet& A) {
  std::vector<Tuple> out;
  for (const auto& x : A) {
    auto subs = coordinate_subtuples(x);
    if (std::all_of(subs.begin(), subs.end(), [&](const Tuple& y) { return A.contains(y); })) out.push_back(x);
  }
  return TupleSet(std::move(out));
}

/// A^ = { x ∈ A : every y ⊆ x with |y| < |x| lies in A }.
inline TupleSet lower_closed_core(const TupleSet& A) {
  std::vector<Tuple> out;
  for (const auto& x : A) {
    auto subs = coordinate_subtuples(x);
    const Nat s = x.sup();
    if (std::all_of(subs.begin(), subs.end(), [&](const Tuple& y) { return y.sup() >= s || A.contains(y); }))
      out.push_back(x);
  }
  return TupleSet(std::move(out));
}

}  // namespace regressia
