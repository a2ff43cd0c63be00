#pragma once

#include <map>
#include <optional>
#include <vector>

#include "regressia/assignment.hpp"
#include "regressia/order_type.hpp"
#include "regressia/regressive.hpp"

namespace regressia {

/// (|x|, x).
inline Tuple lift_point(const Tuple& x) { return scalar(x.sup()).concat(x); }

/// x when y = (|x|, x), otherwise nullopt.
inline std::optional<Tuple> unlift_point(const Tuple& y) {
  if (y.arity() < 2) return std::nullopt;
  Tuple x = y.suffix(1);
  if (y[0] != x.sup()) return std::nullopt;
  return x;
}

/// Lex lift of U to arity k+1. The ground is {(|x|, x) : x in U's ground} plus
/// `extra` tuples, on which the lift acts as the identity.
inline FunctionAssignment lex_lift(const FunctionAssignment& U, const std::vector<Tuple>& extra = {}) {
  std::vector<Tuple> g;
  for (const auto& x : U.ground()) g.push_back(lift_point(x));
  for (const auto& y : extra) {
    if (y.arity() != U.arity() + 1) throw PreconditionError("extra tuple " + y.str() + " has the wrong arity");
    if (auto x = unlift_point(y); x && !U.ground().contains(*x))
      throw PreconditionError("extra tuple " + y.str() + " lifts a point outside the base ground");
    g.push_back(y);
  }
  auto base = std::make_shared<FunctionAssignment>(U);
  return FunctionAssignment(
      TupleSet(std::move(g)),
      [base](const TupleSet& A) {
        std::vector<Tuple> lower;
        for (const auto& y : A)
          if (auto x = unlift_point(y)) lower.push_back(*x);
        TupleSet Ap(std::move(lower));
        Endomorphism u = (*base)(Ap);
        std::vector<Tuple> image;
        image.reserve(A.size());
        for (const auto& y : A) {
          if (auto x = unlift_point(y))
            image.push_back(lift_point(u.at(*x)));
          else
            image.push_back(y);
        }
        return Endomorphism(A, std::move(image));
      },
      FunctionAssignment::Kind::derived, "lex-lift", U.name());
}

struct RamseyReduction {
  std::optional<IndexSet> subset;       // E' when found
  std::size_t regressive_count = 0;     // regressive values of U(A) on E'^k
  std::optional<Tuple> sentinel;        // nullopt means the reserved symbol
  std::uint64_t explored = 0;
};

namespace detail {

struct ReduceState {
  const std::map<Tuple, std::optional<Tuple>>* color;
  std::size_t k;
  std::size_t p;
  std::vector<Nat> chosen;
  std::map<OrderTypeCode, std::optional<Tuple>> seen;
  std::uint64_t explored = 0;
};

// Adds the tuples over `chosen` that use its last element; false on a clash.
inline bool reduce_extend(ReduceState& s, std::vector<OrderTypeCode>& added) {
  const Nat last = s.chosen.back();
  bool ok = true;
  for_each_tuple(std::span<const Nat>(s.chosen), s.k, [&](const Tuple& x) {
    if (!ok) return;
    if (std::find(x.coords().begin(), x.coords().end(), last) == x.coords().end()) return;
    const auto& g = s.color->at(x);
    auto code = order_type(x);
    auto it = s.seen.find(code);
    if (it == s.seen.end()) {
      s.seen.emplace(code, g);
      added.push_back(std::move(code));
    } else if (it->second != g) {
      ok = false;
    }
  });
  return ok;
}

inline bool reduce_dfs(ReduceState& s, const IndexSet& E, std::size_t start) {
  if (s.chosen.size() == s.p) return true;
  for (std::size_t i = start; i + (s.p - s.chosen.size()) <= E.size(); ++i) {
    ++s.explored;
    s.chosen.push_back(E[i]);
    std::vector<OrderTypeCode> added;
    if (reduce_extend(s, added) && reduce_dfs(s, E, i + 1)) return true;
    for (const auto& c : added) s.seen.erase(c);
    s.chosen.pop_back();
  }
  return false;
}

}  // namespace detail

/// Colors E^k by (order type, g) where g is U(A)(x) when regressive and a
/// sentinel otherwise, then finds the lexicographically least p-subset of E
/// homogeneous per order type.
inline RamseyReduction ramsey_reduce(const FunctionAssignment& U, const TupleSet& A, const IndexSet& E, std::size_t p,
                                     const Caps& caps = default_caps()) {
  const std::size_t k = U.arity();
  TupleSet Ek = power(E, k);
  if (!Ek.subset_of(A)) throw PreconditionError("ramsey_reduce requires E^k inside A");
  if (E.size() > caps.ramsey_exhaustive_size)
    throw BudgetError("|E| = " + std::to_string(E.size()) + " exceeds the exhaustive cap " +
                      std::to_string(caps.ramsey_exhaustive_size));
  Endomorphism f = U(A);
  std::map<Tuple, std::optional<Tuple>> color;
  std::vector<Tuple> regressive, other;
  for (const auto& x : Ek) {
    const Tuple& v = f.at(x);
    if (is_regressive_at(x, v)) {
      color.emplace(x, v);
      regressive.push_back(v);
    } else {
      color.emplace(x, std::nullopt);
      other.push_back(v);
    }
  }
  TupleSet R(std::move(regressive));
  RamseyReduction out;
  std::sort(other.begin(), other.end());
  for (const auto& v : other)
    if (!R.contains(v)) {
      out.sentinel = v;
      break;
    }
  if (p > E.size()) return out;
  detail::ReduceState s{&color, k, p, {}, {}, 0};
  if (detail::reduce_dfs(s, E, 0)) {
    out.subset = IndexSet(s.chosen);
    out.regressive_count = regressive_values(f.graph(), power(*out.subset, k)).size();
  }
  out.explored = s.explored;
  return out;
}

}  // namespace regressia
