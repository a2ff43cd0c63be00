#pragma once

#include <set>
#include <vector>

#include "regressia/combinatorics.hpp"
#include "regressia/tuple.hpp"

namespace regressia {

/// Canonical rank pattern of a tuple. Two tuples have the same order type
/// exactly when their codes compare equal.
struct OrderTypeCode {
  std::vector<Nat> pattern;

  friend bool operator==(const OrderTypeCode&, const OrderTypeCode&) = default;
  friend auto operator<=>(const OrderTypeCode& a, const OrderTypeCode& b) { return a.pattern <=> b.pattern; }
};

/// Replaces each coordinate by its rank among the distinct coordinates.
inline OrderTypeCode order_type(const Tuple& x) {
  std::vector<Nat> distinct(x.coords().begin(), x.coords().end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  OrderTypeCode code;
  code.pattern.reserve(x.arity());
  for (Nat c : x.coords())
    code.pattern.push_back(static_cast<Nat>(std::lower_bound(distinct.begin(), distinct.end(), c) - distinct.begin()));
  return code;
}

inline bool same_order_type(const Tuple& x, const Tuple& y) {
  return x.arity() == y.arity() && order_type(x) == order_type(y);
}

/// Number of order types of elements of N^k, by enumerating the codes realized
/// in [k]^k (every order type has a representative there).
inline std::uint64_t ot(std::size_t k, const Caps& caps = default_caps()) {
  if (k == 0) throw PreconditionError("ot(k) requires k >= 1");
  if (k > caps.max_arity)
    throw BudgetError("ot(" + std::to_string(k) + ") exceeds the arity cap " + std::to_string(caps.max_arity));
  std::vector<Nat> values(k);
  for (std::size_t i = 0; i < k; ++i) values[i] = i;
  // A code is canonical iff it equals its own order type; counting those is
  // equivalent to collecting distinct codes and avoids a large set.
  std::uint64_t count = 0;
  for_each_tuple(std::span<const Nat>(values), k, [&](const Tuple& t) {
    if (order_type(t).pattern == t.vec()) ++count;
  });
  return count;
}

}  // namespace regressia
