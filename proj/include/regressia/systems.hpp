#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "regressia/dfnl.hpp"
#include "regressia/order_type.hpp"
#include "regressia/search.hpp"
#include "regressia/verify.hpp"

namespace regressia {

namespace detail {

inline void require_closed(const TupleSet& A) {
  if (!is_closed(A)) throw PreconditionError("set " + A.str() + " is not closed");
}

inline std::vector<Nat> with_last(const Tuple& x, Nat j) {
  std::vector<Nat> args(x.vec());
  args.push_back(j);
  return args;
}

}  // namespace detail

/// f(x) = min{j ∈ fld(A) : j = |x| or B(x, j) is true in f}, by recursion on
/// the sup norm. A must be closed.
inline ScalarMap df(const BefFormula& B, const TupleSet& A) {
  if (B.q != B.r + 1) throw PreconditionError("Df needs q = r + 1");
  if (!A.empty() && A.arity() != B.r)
    throw PreconditionError("formula has r = " + std::to_string(B.r) + " but A has arity " + std::to_string(A.arity()));
  detail::require_closed(A);
  const auto fld = A.field();
  std::vector<Tuple> pts = A.vec();
  std::stable_sort(pts.begin(), pts.end(), [](const Tuple& a, const Tuple& b) { return a.sup() < b.sup(); });
  ScalarMap f;
  std::size_t i = 0;
  while (i < pts.size()) {
    const Nat level = pts[i].sup();
    std::vector<std::pair<Tuple, Nat>> done;
    for (; i < pts.size() && pts[i].sup() == level; ++i) {
      const Tuple& x = pts[i];
      Nat value = level;
      for (Nat j : fld) {
        if (j >= level) break;
        const auto args = detail::with_last(x, j);
        if (eval_bef(B, f, std::span<const Nat>(args))) {
          value = j;
          break;
        }
      }
      done.emplace_back(x, value);
    }
    for (auto& [x, v] : done) f.emplace(std::move(x), v);
  }
  return f;
}

struct FixpointVerdict {
  bool holds = true;
  std::optional<Tuple> x;
  std::string details;
};

/// Re-evaluates the defining min of Df against the completed f (the
/// quantifier bound keeps the evaluation below |x|) and compares.
inline FixpointVerdict validate_df_fixpoint(const BefFormula& B, const TupleSet& A, const ScalarMap& f) {
  const auto fld = A.field();
  for (const auto& x : A) {
    auto it = f.find(x);
    if (it == f.end()) return {false, x, "f is undefined at " + x.str()};
    std::optional<Nat> expected;
    for (Nat j : fld) {
      const auto args = detail::with_last(x, j);
      if (j == x.sup() || eval_bef(B, f, std::span<const Nat>(args))) {
        expected = j;
        break;
      }
    }
    if (!expected || *expected != it->second)
      return {false, x,
              "f(" + x.str() + ") = " + std::to_string(it->second) + " but the defining min gives " +
                  (expected ? std::to_string(*expected) : std::string("nothing"))};
  }
  return {};
}

/// f/r(x) = f(x, |x| * (k - r)) on the x where the right side is defined.
inline ScalarMap slice(const ScalarMap& f, std::size_t r) {
  ScalarMap out;
  for (const auto& [key, v] : f) {
    if (r == 0 || r >= key.arity()) throw PreconditionError("slice needs 0 < r < k");
    const Tuple head = key.prefix(r);
    const Nat s = head.sup();
    bool tail_ok = true;
    for (std::size_t i = r; i < key.arity(); ++i)
      if (key[i] != s) tail_ok = false;
    if (tail_ok) out.emplace(head, v);
  }
  return out;
}

/// A/r = {x ∈ N^r : (x, |x| * (k - r)) ∈ A}.
inline TupleSet slice_set(const TupleSet& A, std::size_t r) {
  ScalarMap tmp;
  for (const auto& x : A) tmp.emplace(x, 0);
  return domain_of(slice(tmp, r));
}

struct RegularityVerdict {
  bool holds = true;
  std::string clause;  // "i" (E^k not inside the domain) or "ii"
  std::optional<Tuple> x, y;
  std::string details;
};

/// (i) E^k ⊆ dom(f). (ii) for x, y ∈ E^k of one order type, |f(x)| < min(x)
/// implies |f(y)| < min(y) and f(x) = f(y).
inline RegularityVerdict is_regressively_regular(const TupleMap& f, const IndexSet& E) {
  RegularityVerdict v;
  if (f.empty()) return {false, "i", std::nullopt, std::nullopt, "f is empty"};
  const std::size_t k = f.begin()->first.arity();
  std::map<OrderTypeCode, std::vector<std::pair<Tuple, const Tuple*>>> classes;
  std::optional<Tuple> missing;
  for_each_tuple(std::span<const Nat>(E.vec()), k, [&](const Tuple& x) {
    if (missing) return;
    auto it = f.find(x);
    if (it == f.end()) {
      missing = x;
      return;
    }
    classes[order_type(x)].emplace_back(x, &it->second);
  });
  if (missing) return {false, "i", missing, std::nullopt, missing->str() + " is not in dom(f)"};
  for (const auto& [code, members] : classes) {
    const std::pair<Tuple, const Tuple*>* first = nullptr;
    for (const auto& m : members)
      if (is_regressive_at(m.first, *m.second)) {
        first = &m;
        break;
      }
    if (!first) continue;
    for (const auto& m : members) {
      if (!is_regressive_at(m.first, *m.second))
        return {false, "ii", first->first, m.first,
                "f" + first->first.str() + " is regressive but f" + m.first.str() + " = " + m.second->str() + " is not"};
      if (*m.second != *first->second)
        return {false, "ii", first->first, m.first,
                "regressive values differ: " + first->second->str() + " and " + m.second->str()};
    }
  }
  return v;
}

inline TupleMap as_tuple_map(const ScalarMap& f) {
  TupleMap out;
  for (const auto& [x, v] : f) out.emplace(x, scalar(v));
  return out;
}

inline RegularityVerdict is_regressively_regular(const ScalarMap& f, const IndexSet& E) {
  return is_regressively_regular(as_tuple_map(f), E);
}

/// Same order type; coordinates <= j agree; coordinates > j of x move above |x|.
inline bool j_related(const Tuple& x, const Tuple& y, Nat j) {
  if (x.arity() != y.arity() || !same_order_type(x, y)) return false;
  const Nat top = x.sup();
  for (std::size_t i = 0; i < x.arity(); ++i) {
    if (x[i] <= j ? y[i] != x[i] : y[i] <= top) return false;
  }
  return true;
}

struct SystemVerdict {
  bool holds = true;
  std::string clause;
  std::optional<std::size_t> formula;  // index into the supplied list
  std::vector<Tuple> args;
  std::string details;
};

namespace detail {

// Clauses (i)-(iii) shared by the regularity and indiscernibility checks.
inline std::optional<SystemVerdict> base_clauses(const IndexSet& E, const ScalarMap& f, std::size_t t) {
  if (f.empty()) return SystemVerdict{false, "ii", std::nullopt, {}, "f is empty"};
  const std::size_t r = f.begin()->first.arity();
  if (t == 0 || r == 0) return SystemVerdict{false, "i", std::nullopt, {}, "t and r must be positive"};
  const TupleSet A = domain_of(f);
  if (!is_closed(A)) return SystemVerdict{false, "ii", std::nullopt, {}, "dom(f) is not closed"};
  const auto fld = A.field();
  for (const auto& [x, v] : f)
    if (!std::binary_search(fld.begin(), fld.end(), v))
      return SystemVerdict{false, "ii", std::nullopt, {x}, "f" + x.str() + " = " + std::to_string(v) + " is outside fld(A)"};
  std::optional<Tuple> missing;
  for_each_tuple(std::span<const Nat>(E.vec()), r, [&](const Tuple& x) {
    if (!missing && !A.contains(x)) missing = x;
  });
  if (missing) return SystemVerdict{false, "iii", std::nullopt, {*missing}, missing->str() + " is not in dom(f)"};
  return std::nullopt;
}

inline void require_shape(const BefFormula& C, std::size_t q, std::size_t t, std::size_t r) {
  if (C.q != q || C.t != t || C.r != r)
    throw PreconditionError("formula " + to_string(C) + " does not have shape q=" + std::to_string(q) +
                            " t=" + std::to_string(t) + " r=" + std::to_string(r));
}

inline std::vector<Tuple> all_tuples(std::span<const Nat> values, std::size_t arity) {
  std::vector<Tuple> out;
  for_each_tuple(values, arity, [&](const Tuple& x) { out.push_back(x); });
  return out;
}

inline std::vector<Nat> join(std::initializer_list<const Tuple*> parts) {
  std::vector<Nat> out;
  for (const Tuple* p : parts) out.insert(out.end(), p->coords().begin(), p->coords().end());
  return out;
}

}  // namespace detail

/// (t, r)-regularity of f over E relative to the supplied formulas of shape
/// (2t, t, r): a witness u below min(x) for C(x, u) must be matched by one
/// w ∈ fld(A)^t serving every y ∈ E^t of x's order type.
inline SystemVerdict tr_regular_check(const IndexSet& E, const ScalarMap& f, const std::vector<BefFormula>& formulas,
                                      std::size_t t) {
  const std::size_t r = f.empty() ? 0 : f.begin()->first.arity();
  for (const auto& C : formulas) detail::require_shape(C, 2 * t, t, r);
  if (auto bad = detail::base_clauses(E, f, t)) return *bad;
  const auto fld = domain_of(f).field();
  const auto xs = detail::all_tuples(std::span<const Nat>(E.vec()), t);
  const auto us = detail::all_tuples(std::span<const Nat>(fld), t);
  std::map<OrderTypeCode, std::vector<Tuple>> classes;
  for (const auto& x : xs) classes[order_type(x)].push_back(x);
  for (std::size_t ci = 0; ci < formulas.size(); ++ci) {
    const auto& C = formulas[ci];
    for (const auto& [code, members] : classes) {
      std::optional<bool> shared;  // some w works for the whole class
      for (const auto& x : members) {
        for (const auto& u : us) {
          if (u.sup() >= x.min()) continue;
          const auto args = detail::join({&x, &u});
          if (!eval_bef(C, f, std::span<const Nat>(args))) continue;
          if (!shared) {
            shared = std::any_of(us.begin(), us.end(), [&](const Tuple& w) {
              return std::all_of(members.begin(), members.end(), [&](const Tuple& y) {
                const auto a = detail::join({&y, &w});
                return eval_bef(C, f, std::span<const Nat>(a));
              });
            });
          }
          if (!*shared)
            return {false, "iv", ci, {x, u},
                    "C(" + x.str() + ", " + u.str() + ") holds but no w serves every tuple of that order type"};
          break;
        }
        if (shared && *shared) break;
      }
    }
  }
  return {};
}

/// (t, r)-indiscernibility of E for f relative to the supplied formulas of
/// shape (3t, t, r).
inline SystemVerdict soi_check(const IndexSet& E, const ScalarMap& f, const std::vector<BefFormula>& formulas,
                               std::size_t t) {
  const std::size_t r = f.empty() ? 0 : f.begin()->first.arity();
  for (const auto& C : formulas) detail::require_shape(C, 3 * t, t, r);
  if (auto bad = detail::base_clauses(E, f, t)) return *bad;
  std::vector<Nat> image;
  for_each_tuple(std::span<const Nat>(E.vec()), r, [&](const Tuple& x) { image.push_back(f.at(x)); });
  std::sort(image.begin(), image.end());
  image.erase(std::unique(image.begin(), image.end()), image.end());
  const auto xs = detail::all_tuples(std::span<const Nat>(E.vec()), t);
  const auto ws = detail::all_tuples(std::span<const Nat>(image), t);
  std::map<OrderTypeCode, std::vector<Tuple>> classes;
  for (const auto& x : xs) classes[order_type(x)].push_back(x);
  for (std::size_t ci = 0; ci < formulas.size(); ++ci) {
    const auto& C = formulas[ci];
    for (const auto& z : xs)
      for (const auto& w : ws) {
        const Nat bound = std::max(z.sup(), w.sup());
        for (const auto& [code, members] : classes) {
          const Tuple* ref = nullptr;
          bool ref_value = false;
          for (const auto& x : members) {
            if (x.min() <= bound) continue;
            const auto args = detail::join({&x, &z, &w});
            const bool v = eval_bef(C, f, std::span<const Nat>(args));
            if (!ref) {
              ref = &x;
              ref_value = v;
            } else if (v != ref_value) {
              return {false, "iv", ci, {*ref, x, z, w},
                      "C differs on " + ref->str() + " and " + x.str() + " with z = " + z.str() + ", w = " + w.str()};
            }
          }
        }
      }
  }
  return {};
}

namespace detail {

template <class Build>
SearchReport search_regular_impl(Build build, std::size_t k, std::size_t p, Nat n_max, const SearchBudget& budget,
                                 std::string name) {
  if (k == 0 || p == 0) throw PreconditionError("search_regular needs k, p >= 1");
  SearchReport rep;
  rep.statement = "regular";
  rep.params = {{"k", static_cast<std::int64_t>(k)}, {"p", static_cast<std::int64_t>(p)},
                {"n_max", static_cast<std::int64_t>(n_max)}};
  rep.target = ot(k);
  rep.seed = budget.seed;
  rep.strategy = "exhaustive:" + name;
  const auto universe = IndexSet::range(n_max).vec();
  for (std::size_t s = p; s <= universe.size(); ++s) {
    for (const auto& S : subsets_of_size(std::span<const Nat>(universe), s)) {
      const TupleSet A = power(S, k);
      const ScalarMap f = build(A);
      const TupleMap g = as_tuple_map(f);
      for (const auto& E : subsets_of_size(std::span<const Nat>(S.vec()), p)) {
        if (rep.explored >= budget.max_candidates) {
          rep.inconclusive = true;
          return rep;
        }
        ++rep.explored;
        if (!is_regressively_regular(g, E).holds) continue;
        const TupleSet values = regressive_values(g, power(E, k));
        rep.A = A;
        rep.E = E;
        rep.count = values.size();
        rep.verified = independent_recount(g, E.vec(), k) == rep.count && rep.count <= rep.target &&
                       is_regressively_regular(f, E).holds;
        return rep;
      }
    }
  }
  rep.inconclusive = true;
  return rep;
}

}  // namespace detail

/// Smallest S ⊆ [n_max] (by size, then lexicographically) and E ⊆ S of size p
/// such that rcn(S^k, H) is regressively regular over E.
inline SearchReport search_regular(const Dfnl& H, std::size_t p, Nat n_max, const SearchBudget& budget = {}) {
  return detail::search_regular_impl([&](const TupleSet& A) { return rcn(A, H); }, H.arity, p, n_max, budget, H.name);
}

/// The same search with Df(B; S^k).
inline SearchReport search_regular(const BefFormula& B, std::size_t p, Nat n_max, const SearchBudget& budget = {}) {
  if (B.q != B.r + 1) throw PreconditionError("Df needs q = r + 1");
  return detail::search_regular_impl([&](const TupleSet& A) { return df(B, A); }, B.r, p, n_max, budget,
                                     to_string(B));
}

}  // namespace regressia
