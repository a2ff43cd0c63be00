#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "regressia/tuple.hpp"

namespace regressia {

enum class OrderKind { sup_norm, lexicographic, explicit_relation };

inline std::string to_string(OrderKind k) {
  switch (k) {
    case OrderKind::sup_norm: return "sup-norm";
    case OrderKind::lexicographic: return "lexicographic";
    case OrderKind::explicit_relation: return "explicit";
  }
  return "?";
}

/// A strict order on tuples: |x| < |y|, strict lexicographic, or an explicit
/// finite relation validated (irreflexive, transitive) on construction.
class StrictOrder {
public:
  static StrictOrder sup_norm() { return StrictOrder(OrderKind::sup_norm); }
  static StrictOrder lexicographic() { return StrictOrder(OrderKind::lexicographic); }

  static StrictOrder explicit_relation(std::vector<std::pair<Tuple, Tuple>> pairs) {
    StrictOrder o(OrderKind::explicit_relation);
    o.pairs_ = std::set<std::pair<Tuple, Tuple>>(pairs.begin(), pairs.end());
    for (const auto& [a, b] : o.pairs_)
      if (a == b) throw PreconditionError("explicit order is not irreflexive at " + a.str());
    for (const auto& [a, b] : o.pairs_) {
      auto it = o.pairs_.lower_bound({b, Tuple{}});
      for (; it != o.pairs_.end() && it->first == b; ++it)
        if (!o.pairs_.contains({a, it->second}))
          throw PreconditionError("explicit order is not transitive: " + a.str() + " < " + b.str() + " < " +
                                  it->second.str());
    }
    return o;
  }

  /// The reverse of an order restricted to `ground` (as an explicit relation).
  static StrictOrder reversed(const StrictOrder& base, const TupleSet& ground) {
    std::vector<std::pair<Tuple, Tuple>> pairs;
    for (const auto& a : ground)
      for (const auto& b : ground)
        if (base.less(a, b)) pairs.emplace_back(b, a);
    return explicit_relation(std::move(pairs));
  }

  OrderKind kind() const noexcept { return kind_; }
  const std::set<std::pair<Tuple, Tuple>>& pairs() const noexcept { return pairs_; }

  bool less(const Tuple& a, const Tuple& b) const {
    switch (kind_) {
      case OrderKind::sup_norm: return a.sup() < b.sup();
      case OrderKind::lexicographic: return a < b;
      case OrderKind::explicit_relation: return pairs_.contains({a, b});
    }
    return false;
  }

  bool operator()(const Tuple& a, const Tuple& b) const { return less(a, b); }

  std::string name() const { return to_string(kind_); }

private:
  explicit StrictOrder(OrderKind k) : kind_(k) {}

  OrderKind kind_;
  std::set<std::pair<Tuple, Tuple>> pairs_;
};

/// x ≤_c y: coordinatewise.
inline bool coordinatewise_le(const Tuple& x, const Tuple& y) {
  if (x.arity() != y.arity()) return false;
  for (std::size_t i = 0; i < x.arity(); ++i)
    if (x[i] > y[i]) return false;
  return true;
}

/// Upward on `ground`: x ≤_c y never coexists with y < x.
inline bool is_upward(const StrictOrder& o, const TupleSet& ground) {
  for (const auto& x : ground)
    for (const auto& y : ground)
      if (coordinatewise_le(x, y) && o.less(y, x)) return false;
  return true;
}

/// Minimal elements of `A`: no other member is below them.
inline std::vector<Tuple> minimal_elements(const StrictOrder& o, const TupleSet& A) {
  std::vector<Tuple> out;
  for (const auto& x : A)
    if (std::none_of(A.begin(), A.end(), [&](const Tuple& y) { return o.less(y, x); })) out.push_back(x);
  return out;
}

/// Enumeration x_1, ..., x_n of B without repetition in which no x_i is above a
/// later x_j, built by repeatedly removing the least minimal element.
inline std::vector<Tuple> linear_extension(const StrictOrder& o, const TupleSet& B) {
  std::vector<Tuple> out;
  TupleSet rest = B;
  while (!rest.empty()) {
    auto mins = minimal_elements(o, rest);
    if (mins.empty()) throw PreconditionError("relation has no minimal element; it is not a strict order");
    out.push_back(mins.front());
    rest.erase(mins.front());
  }
  return out;
}

/// A ⊆_< B: A ⊆ B and A is downward closed in B.
inline bool downward_closed_in(const StrictOrder& o, const TupleSet& A, const TupleSet& B) {
  if (!A.subset_of(B)) return false;
  for (const auto& x : A)
    for (const auto& y : B)
      if (o.less(y, x) && !A.contains(y)) return false;
  return true;
}

}  // namespace regressia
