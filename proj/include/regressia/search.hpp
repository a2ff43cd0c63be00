#pragma once

#include <bit>
#include <concepts>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "regressia/assignment.hpp"
#include "regressia/lift.hpp"
#include "regressia/order_type.hpp"
#include "regressia/parallel.hpp"
#include "regressia/verify.hpp"

namespace regressia {

enum class Strategy { exhaustive, greedy_ramsey, random_restart };

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::exhaustive: return "exhaustive";
    case Strategy::greedy_ramsey: return "greedy-ramsey";
    case Strategy::random_restart: return "random-restart";
  }
  return "?";
}

inline Strategy parse_strategy(const std::string& s) {
  if (s == "exhaustive") return Strategy::exhaustive;
  if (s == "greedy-ramsey") return Strategy::greedy_ramsey;
  if (s == "random-restart") return Strategy::random_restart;
  throw ParseError("unknown strategy '" + s + "'");
}

struct SearchBudget {
  std::uint64_t max_candidates = 1u << 20;
  Strategy strategy = Strategy::exhaustive;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

/// A witness is only attached when it meets the target; otherwise the run is
/// inconclusive and best_count records the closest candidate seen.
struct SearchReport {
  std::string statement;
  std::map<std::string, std::int64_t> params;
  std::optional<TupleSet> A;
  std::optional<IndexSet> E;
  std::size_t count = 0;
  std::uint64_t target = 0;
  std::optional<std::uint64_t> target_kk;
  bool verified = false;
  std::uint64_t explored = 0;
  std::uint64_t seed = 0;
  std::string strategy;
  bool vacuous = false;
  bool inconclusive = false;
  std::optional<std::size_t> best_count;
};

namespace detail {

// F on [n]^k, indexed by base-n digits.
struct DenseMap {
  Nat n = 0;
  std::size_t k = 0;
  std::vector<Tuple> values;

  const Tuple& at(std::span<const Nat> x) const {
    std::uint64_t idx = 0;
    for (Nat c : x) idx = idx * n + c;
    return values[idx];
  }
};

template <class Fn>
DenseMap densify(Fn& F, Nat n, std::size_t k, const Caps& caps) {
  const std::uint64_t size = ipow(n, k);
  if (size > caps.closure_size) throw BudgetError("[n]^k has more points than the configured cap");
  DenseMap d{n, k, {}};
  d.values.reserve(size);
  for_each_tuple(std::span<const Nat>(IndexSet::range(n).vec()), k, [&](const Tuple& x) { d.values.push_back(F(x)); });
  return d;
}

// Regressive values of a dense map on E^k.
inline std::size_t dense_count(const DenseMap& d, std::span<const Nat> E) {
  std::vector<const Tuple*> found;
  std::vector<std::size_t> digits(d.k, 0);
  std::vector<Nat> x(d.k);
  for (;;) {
    Nat lo = E[digits[0]];
    for (std::size_t i = 0; i < d.k; ++i) {
      x[i] = E[digits[i]];
      lo = std::min(lo, x[i]);
    }
    const Tuple& v = d.at(x);
    if (v.sup() < lo) found.push_back(&v);
    std::size_t i = d.k;
    while (i > 0 && ++digits[i - 1] == E.size()) digits[--i] = 0;
    if (i == 0) break;
  }
  std::sort(found.begin(), found.end(), [](const Tuple* a, const Tuple* b) { return *a < *b; });
  auto last = std::unique(found.begin(), found.end(), [](const Tuple* a, const Tuple* b) { return *a == *b; });
  return static_cast<std::size_t>(last - found.begin());
}

inline std::map<Tuple, Tuple> restrict_dense(const DenseMap& d, const IndexSet& E) {
  std::map<Tuple, Tuple> g;
  for_each_tuple(std::span<const Nat>(E.vec()), d.k, [&](const Tuple& x) { g.emplace(x, d.at(x.coords())); });
  return g;
}

}  // namespace detail

/// Searches E in S_p[n] on which F: [n]^k -> [n]^r has at most (k^k)p
/// regressive values. Ties go to the lexicographically least E among those of
/// minimal count.
template <class Fn>
  requires std::invocable<Fn&, const Tuple&>
SearchReport find_witness_04(Fn&& F, Nat n, std::size_t k, std::size_t p, const SearchBudget& budget = {},
                             const Caps& caps = default_caps()) {
  if (k == 0 || p == 0) throw PreconditionError("find_witness_04 requires k, p >= 1");
  SearchReport rep;
  rep.statement = "0.4";
  rep.params = {{"n", static_cast<std::int64_t>(n)}, {"k", static_cast<std::int64_t>(k)},
                {"p", static_cast<std::int64_t>(p)}};
  rep.target = ipow(k, k) * p;
  rep.vacuous = rep.target >= ipow(p, k);
  rep.seed = budget.seed;
  rep.strategy = to_string(budget.strategy);
  if (p > n) {
    rep.inconclusive = true;
    return rep;
  }
  auto dense = detail::densify(F, n, k, caps);
  const auto all = IndexSet::range(n).vec();

  std::optional<std::pair<std::size_t, std::vector<Nat>>> best;
  auto consider = [&](std::size_t c, std::vector<Nat> e) {
    if (!best || c < best->first || (c == best->first && e < best->second)) best.emplace(c, std::move(e));
  };

  switch (budget.strategy) {
    case Strategy::exhaustive: {
      const std::uint64_t total = binomial(n, p);
      if (total > budget.max_candidates)
        throw BudgetError("exhaustive search over " + std::to_string(total) + " subsets exceeds max_candidates " +
                          std::to_string(budget.max_candidates));
      std::vector<std::vector<Nat>> subsets;
      subsets.reserve(total);
      for_each_combination(n, p, [&](std::span<const std::size_t> idx) {
        subsets.emplace_back(idx.begin(), idx.end());
        return true;
      });
      std::vector<std::pair<std::size_t, std::uint64_t>> local(std::max(1u, budget.jobs),
                                                               {std::numeric_limits<std::size_t>::max(), 0});
      parallel_chunks(subsets.size(), budget.jobs, [&](std::uint64_t b, std::uint64_t e, unsigned w) {
        for (std::uint64_t i = b; i < e; ++i) {
          std::size_t c = detail::dense_count(dense, subsets[i]);
          if (c < local[w].first) local[w] = {c, i};
        }
      });
      // Chunks are increasing in index, so the first strict minimum wins ties.
      std::pair<std::size_t, std::uint64_t> winner = local[0];
      for (const auto& l : local)
        if (l.first < winner.first) winner = l;
      rep.explored = subsets.size();
      consider(winner.first, subsets[winner.second]);
      break;
    }
    case Strategy::random_restart: {
      Rng rng(budget.seed);
      for (std::uint64_t i = 0; i < budget.max_candidates; ++i) {
        auto e = rng.sample(std::span<const Nat>(all), p);
        const std::size_t c = detail::dense_count(dense, e);
        consider(c, std::move(e));
        ++rep.explored;
      }
      break;
    }
    case Strategy::greedy_ramsey: {
      // From each start, keep every next element that stays within the target.
      for (Nat s = 0; s + p <= n && rep.explored < budget.max_candidates; ++s) {
        std::vector<Nat> e{s};
        for (Nat i = s + 1; i < n && e.size() < p && rep.explored < budget.max_candidates; ++i) {
          e.push_back(i);
          ++rep.explored;
          if (detail::dense_count(dense, e) > rep.target) e.pop_back();
        }
        if (e.size() == p) {
          consider(detail::dense_count(dense, e), e);
          if (best->first <= rep.target) break;
        }
      }
      break;
    }
  }

  if (!best) {
    rep.inconclusive = true;
    return rep;
  }
  rep.best_count = best->first;
  if (best->first > rep.target) {
    rep.inconclusive = true;
    return rep;
  }
  IndexSet E(best->second);
  rep.E = E;
  rep.count = best->first;
  rep.verified = independent_recount(detail::restrict_dense(dense, E), E.vec(), k) == rep.count;
  return rep;
}

/// TupleMap form; F must be total on [n]^k.
inline SearchReport find_witness_04(const TupleMap& F, Nat n, std::size_t k, std::size_t p,
                                    const SearchBudget& budget = {}, const Caps& caps = default_caps()) {
  auto lookup = [&](const Tuple& x) -> Tuple {
    auto it = F.find(x);
    if (it == F.end()) throw MissingKeyError("F is undefined at " + x.str());
    return it->second;
  };
  return find_witness_04(lookup, n, k, p, budget, caps);
}

enum class CandidateFamily { products, all_subsets };

inline std::string to_string(CandidateFamily f) {
  return f == CandidateFamily::products ? "products" : "all-subsets";
}

/// Searches (A, E) with E^k ⊆ A ⊆ ground, |E| = p, such that U(A) has at
/// most ot(k) regressive values on E^k. Never reports refutation.
inline SearchReport find_witness_A(const FunctionAssignment& U, std::size_t p, const SearchBudget& budget = {},
                                   CandidateFamily family = CandidateFamily::products,
                                   const Caps& caps = default_caps()) {
  const std::size_t k = U.arity();
  if (p == 0) throw PreconditionError("find_witness_A requires p >= 1");
  SearchReport rep;
  rep.statement = "A";
  rep.params = {{"k", static_cast<std::int64_t>(k)},
                {"p", static_cast<std::int64_t>(p)},
                {"ground", static_cast<std::int64_t>(U.ground().size())}};
  rep.target = ot(k, caps);
  rep.target_kk = ipow(k, k);
  rep.seed = budget.seed;
  rep.strategy = to_string(budget.strategy) + "/" + to_string(family);
  rep.vacuous = rep.target >= ipow(p, k);

  const auto fld = U.ground().field();
  std::vector<TupleSet> candidates;
  if (family == CandidateFamily::products) {
    if (fld.size() > 20) throw BudgetError("ground field too large for product enumeration");
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << fld.size()); ++m) {
      if (static_cast<std::size_t>(std::popcount(m)) < p) continue;
      std::vector<Nat> s;
      for (std::size_t i = 0; i < fld.size(); ++i)
        if (m >> i & 1) s.push_back(fld[i]);
      TupleSet A = power(std::span<const Nat>(s), k);
      if (A.subset_of(U.ground())) candidates.push_back(std::move(A));
    }
  } else {
    if (U.ground().size() > 20) throw BudgetError("ground too large for all-subsets enumeration");
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << U.ground().size()); ++m)
      candidates.push_back(U.ground().select(m));
  }
  std::sort(candidates.begin(), candidates.end());

  // E ranges over p-subsets of fld(A) with E^k ⊆ A.
  auto admissible = [&](const TupleSet& A) {
    std::vector<IndexSet> out;
    const auto f = A.field();
    for (auto& E : subsets_of_size(std::span<const Nat>(f), p))
      if (power(E, k).subset_of(A)) out.push_back(std::move(E));
    return out;
  };

  using Key = std::tuple<std::size_t, TupleSet, IndexSet>;
  std::optional<Key> best;
  auto consider = [&](const Endomorphism& img, const TupleSet& A, const IndexSet& E) {
    std::size_t c = regressive_values(img.graph(), power(E, k)).size();
    Key key{c, A, E};
    if (!best || key < *best) best = std::move(key);
  };

  if (budget.strategy == Strategy::greedy_ramsey) {
    // Largest candidate, reduced by the per-order-type homogeneous coloring.
    for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
      const TupleSet& A = *it;
      const auto f = A.field();
      if (f.size() > caps.ramsey_exhaustive_size || power(std::span<const Nat>(f), k) != A) continue;
      auto red = ramsey_reduce(U, A, IndexSet(f), p, caps);
      rep.explored += red.explored;
      if (red.subset) {
        consider(U(A), A, *red.subset);
        break;
      }
      if (rep.explored >= budget.max_candidates) break;
    }
  } else if (budget.strategy == Strategy::random_restart) {
    Rng rng(budget.seed);
    for (std::uint64_t i = 0; i < budget.max_candidates && !candidates.empty(); ++i) {
      const TupleSet& A = candidates[rng.below(candidates.size())];
      auto Es = admissible(A);
      ++rep.explored;
      if (Es.empty()) continue;
      consider(U(A), A, Es[rng.below(Es.size())]);
    }
  } else {
    std::uint64_t total = 0;
    std::vector<std::vector<IndexSet>> per(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      per[i] = admissible(candidates[i]);
      total += per[i].size();
    }
    if (total > budget.max_candidates)
      throw BudgetError("exhaustive search over " + std::to_string(total) + " (A, E) pairs exceeds max_candidates " +
                        std::to_string(budget.max_candidates));
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (per[i].empty()) continue;
      Endomorphism img = U(candidates[i]);
      for (const auto& E : per[i]) {
        ++rep.explored;
        consider(img, candidates[i], E);
      }
    }
  }

  if (!best) {
    rep.inconclusive = true;
    return rep;
  }
  auto& [c, A, E] = *best;
  rep.best_count = c;
  if (c > rep.target) {
    rep.inconclusive = true;
    return rep;
  }
  rep.A = A;
  rep.E = E;
  rep.count = c;
  TupleMap g = U(A).graph();
  rep.verified = independent_recount(g, E.vec(), k) == c;
  return rep;
}

}  // namespace regressia
