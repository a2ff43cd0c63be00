#pragma once

#include <concepts>

#include "regressia/tuple.hpp"

namespace regressia {

/// y = F(x) is regressive at x when |y| < min(x).
inline bool is_regressive_at(const Tuple& x, const Tuple& value) { return value.sup() < x.min(); }

/// { F(x) : x ∈ B, |F(x)| < min(x) } for any callable F: Tuple -> Tuple.
template <class Fn>
  requires std::invocable<Fn&, const Tuple&>
TupleSet regressive_values(Fn&& F, const TupleSet& B) {
  std::vector<Tuple> out;
  for (const auto& x : B) {
    Tuple y = F(x);
    if (is_regressive_at(x, y)) out.push_back(std::move(y));
  }
  return TupleSet(std::move(out));
}

inline TupleSet regressive_values(const TupleMap& F, const TupleSet& B) {
  return regressive_values(
      [&](const Tuple& x) -> const Tuple& {
        auto it = F.find(x);
        if (it == F.end()) throw MissingKeyError("F is undefined at " + x.str());
        return it->second;
      },
      B);
}

inline TupleSet regressive_values(const ScalarMap& F, const TupleSet& B) {
  return regressive_values(
      [&](const Tuple& x) {
        auto it = F.find(x);
        if (it == F.end()) throw MissingKeyError("f is undefined at " + x.str());
        return scalar(it->second);
      },
      B);
}

}  // namespace regressia
