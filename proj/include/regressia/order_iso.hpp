#pragma once

#include <map>
#include <vector>

#include "regressia/assignment.hpp"

namespace regressia {

/// Replaces every coordinate by its rank in `field`.
inline Tuple rank_tuple(const Tuple& x, const std::vector<Nat>& field) {
  std::vector<Nat> out;
  out.reserve(x.arity());
  for (Nat c : x.coords())
    out.push_back(static_cast<Nat>(std::lower_bound(field.begin(), field.end(), c) - field.begin()));
  return Tuple(std::move(out));
}

/// Canonical representative of A's order-isomorphism class.
inline TupleSet canonical_set(const TupleSet& A) {
  const auto field = A.field();
  std::vector<Tuple> out;
  out.reserve(A.size());
  for (const auto& x : A) out.push_back(rank_tuple(x, field));
  return TupleSet(std::move(out));
}

/// The graph {(x, f(x))} as a set of 2k-tuples.
inline TupleSet graph_set(const Endomorphism& f) {
  std::vector<Tuple> out;
  out.reserve(f.carrier().size());
  for (std::size_t i = 0; i < f.carrier().size(); ++i) out.push_back(f.carrier()[i].concat(f.image()[i]));
  return TupleSet(std::move(out));
}

/// Canonical representative of f's class; equal exactly when the graphs are
/// order isomorphic.
inline TupleSet canonical_graph(const Endomorphism& f) { return canonical_set(graph_set(f)); }

inline bool order_isomorphic(const TupleSet& A, const TupleSet& B) {
  return A.size() == B.size() && A.arity() == B.arity() && canonical_set(A) == canonical_set(B);
}

inline bool order_isomorphic(const Endomorphism& f, const Endomorphism& g) {
  return f.carrier().size() == g.carrier().size() && canonical_graph(f) == canonical_graph(g);
}

/// The order-preserving bijection sending the i-th element of `from` to the
/// i-th element of `to`.
class OrderMap {
public:
  OrderMap(std::vector<Nat> from, std::vector<Nat> to) {
    if (from.size() != to.size()) throw PreconditionError("order map between sets of different size");
    std::sort(from.begin(), from.end());
    std::sort(to.begin(), to.end());
    for (std::size_t i = 0; i < from.size(); ++i) {
      fwd_.emplace(from[i], to[i]);
      back_.emplace(to[i], from[i]);
    }
  }

  Tuple apply(const Tuple& x) const { return map_with(fwd_, x); }
  Tuple invert(const Tuple& y) const { return map_with(back_, y); }

  TupleSet apply(const TupleSet& A) const {
    std::vector<Tuple> out;
    for (const auto& x : A) out.push_back(apply(x));
    return TupleSet(std::move(out));
  }

  /// h^{-1} ∘ g ∘ h, for g defined on h[A].
  Endomorphism pull_back(const TupleSet& A, const Endomorphism& g) const {
    std::vector<Tuple> image;
    image.reserve(A.size());
    for (const auto& x : A) image.push_back(invert(g.at(apply(x))));
    return Endomorphism(A, std::move(image));
  }

private:
  static Tuple map_with(const std::map<Nat, Nat>& m, const Tuple& x) {
    std::vector<Nat> out;
    out.reserve(x.arity());
    for (Nat c : x.coords()) {
      auto it = m.find(c);
      if (it == m.end()) throw MissingKeyError("order map is undefined at coordinate " + std::to_string(c));
      out.push_back(it->second);
    }
    return Tuple(std::move(out));
  }

  std::map<Nat, Nat> fwd_, back_;
};

}  // namespace regressia
