#pragma once

#include <map>
#include <set>
#include <vector>

#include "regressia/tuple.hpp"

namespace regressia {

/// Counts regressive values of a graph on E^k straight from the definition.
/// Deliberately written without the search-side helpers so that it can
/// re-check their answers.
inline std::size_t independent_recount(const std::map<Tuple, Tuple>& graph, const std::vector<Nat>& E,
                                       std::size_t k) {
  if (E.empty() || k == 0) return 0;
  std::set<std::vector<Nat>> values;
  std::vector<std::size_t> digits(k, 0);
  for (;;) {
    std::vector<Nat> point(k);
    Nat lo = E[digits[0]];
    for (std::size_t i = 0; i < k; ++i) {
      point[i] = E[digits[i]];
      if (point[i] < lo) lo = point[i];
    }
    auto it = graph.find(Tuple(point));
    if (it == graph.end()) throw MissingKeyError("recount: no value at " + Tuple(point).str());
    Nat hi = 0;
    for (Nat c : it->second.coords())
      if (c > hi) hi = c;
    if (hi < lo) values.insert(it->second.vec());
    std::size_t i = k;
    while (i > 0 && ++digits[i - 1] == E.size()) digits[--i] = 0;
    if (i == 0) break;
  }
  return values.size();
}

}  // namespace regressia
