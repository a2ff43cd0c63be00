#pragma once

#include <bit>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "regressia/assignment.hpp"
#include "regressia/decreasing.hpp"
#include "regressia/order_iso.hpp"

namespace regressia {

/// U restricted to S^k, with coordinates written as 1-based positions in S.
struct RestrictionCode {
  std::size_t size = 0;
  std::vector<TupleSet> endo_codes;  // sorted index graphs, one per A ⊆ S^k

  friend bool operator==(const RestrictionCode&, const RestrictionCode&) = default;
};

inline RestrictionCode restriction_code(const FunctionAssignment& U, const IndexSet& S,
                                        const Caps& caps = default_caps()) {
  const auto fld = U.ground().field();
  for (Nat s : S)
    if (!std::binary_search(fld.begin(), fld.end(), s))
      throw PreconditionError(std::to_string(s) + " is not in the field of the ground");
  std::vector<Tuple> pts;
  for (const auto& x : power(S, U.arity()))
    if (U.ground().contains(x)) pts.push_back(x);
  TupleSet local(std::move(pts));
  if (local.size() >= 63 || (std::uint64_t{1} << local.size()) > caps.code_subsets)
    throw BudgetError("restriction code over " + std::to_string(local.size()) + " points exceeds the cap");
  std::vector<Nat> positions(S.begin(), S.end());
  auto encode = [&](const Tuple& x) {
    std::vector<Nat> out;
    for (Nat c : x.coords())
      out.push_back(static_cast<Nat>(std::lower_bound(positions.begin(), positions.end(), c) - positions.begin()) + 1);
    return Tuple(std::move(out));
  };
  RestrictionCode code;
  code.size = S.size();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << local.size()); ++m) {
    Endomorphism e = U(local.select(m));
    std::vector<Tuple> g;
    for (std::size_t i = 0; i < e.carrier().size(); ++i) g.push_back(encode(e.carrier()[i]).concat(encode(e.image()[i])));
    code.endo_codes.emplace_back(std::move(g));
  }
  std::sort(code.endo_codes.begin(), code.endo_codes.end());
  return code;
}

/// Order-isomorphic A, B yield order-isomorphic U(A), U(B). `max_field` limits
/// the check to sets whose field has at most that many elements.
inline PropertyVerdict is_order_invariant(const FunctionAssignment& U, std::optional<std::size_t> max_field = {},
                                          const std::optional<PairScope>& scope = std::nullopt) {
  PropertyVerdict v;
  auto fail = [&](const TupleSet& A, const TupleSet& B) {
    v.holds = false;
    v.counterexample = Counterexample{A, std::nullopt, B,
                                      "order isomorphic inputs with non-isomorphic images " + U(A).str() + " and " +
                                          U(B).str()};
  };
  if (scope) {
    for (const auto& [A, B] : *scope) {
      if (!order_isomorphic(A, B)) continue;
      ++v.checked;
      if (!order_isomorphic(U(A), U(B))) {
        fail(A, B);
        return v;
      }
    }
    return v;
  }
  if (U.ground().field().size() > 8 || U.ground().size() > 16)
    throw BudgetError("exhaustive order-invariance check needs a field of at most 8 and a ground of at most 16");
  std::map<TupleSet, std::pair<TupleSet, TupleSet>> rep;  // canonical set -> (A, canonical graph)
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << U.ground().size()); ++m) {
    TupleSet A = U.ground().select(m);
    if (max_field && A.field().size() > *max_field) continue;
    ++v.checked;
    TupleSet shape = canonical_set(A);
    TupleSet g = canonical_graph(U(A));
    auto it = rep.find(shape);
    if (it == rep.end()) {
      rep.emplace(std::move(shape), std::make_pair(A, std::move(g)));
    } else if (it->second.second != g) {
      fail(it->second.first, A);
      return v;
    }
  }
  return v;
}

struct UniformityVerdict {
  bool holds = true;
  std::optional<std::pair<IndexSet, IndexSet>> counterexample;
};

/// All same-size subsets of E (size ≤ p) share one restriction code. E
/// defaults to the ground's field.
inline UniformityVerdict is_uniform_by_codes(const FunctionAssignment& U, std::size_t p,
                                             std::optional<IndexSet> E = std::nullopt,
                                             const Caps& caps = default_caps()) {
  IndexSet base = E ? *E : IndexSet(U.ground().field());
  UniformityVerdict v;
  for (std::size_t s = 1; s <= p && s <= base.size(); ++s) {
    auto subsets = subsets_of_size(std::span<const Nat>(base.vec()), s);
    RestrictionCode ref = restriction_code(U, subsets.front(), caps);
    for (std::size_t i = 1; i < subsets.size(); ++i) {
      if (restriction_code(U, subsets[i], caps) != ref) {
        v.holds = false;
        v.counterexample = std::make_pair(subsets.front(), subsets[i]);
        return v;
      }
    }
  }
  return v;
}

namespace detail {

// U(h[A]) pulled back along the order map from fld(A) onto `T`.
inline Endomorphism transported(const FunctionAssignment& U, const TupleSet& A, const std::vector<Nat>& T) {
  OrderMap h(A.field(), T);
  return h.pull_back(A, U(h.apply(A)));
}

inline FunctionAssignment copy_onto(const FunctionAssignment& U, const IndexSet& E, Nat m, std::size_t p,
                                    const std::string& name) {
  auto base = std::make_shared<FunctionAssignment>(U);
  auto src = std::make_shared<std::vector<Nat>>(E.vec());
  return FunctionAssignment(
      cube(m, U.arity()),
      [base, src, p](const TupleSet& A) {
        const auto fld = A.field();
        if (fld.size() > p)
          throw PreconditionError("field of " + A.str() + " exceeds the uniform size " + std::to_string(p));
        // Send [m] into E order-preservingly, then pull the image back.
        std::vector<Nat> T;
        for (Nat c : fld) T.push_back((*src)[c]);
        return transported(*base, A, T);
      },
      FunctionAssignment::Kind::derived, name, U.name());
}

}  // namespace detail

struct UniformizeResult {
  std::optional<IndexSet> E;
  std::optional<FunctionAssignment> V;
  std::uint64_t explored = 0;
};

/// Lexicographically least E ⊆ fld(ground), |E| = m, on which U is p-uniform,
/// and the copy of U|E moved onto [m]. E is empty when none exists.
inline UniformizeResult uniformize(const FunctionAssignment& U, std::size_t p, std::size_t m,
                                   const Caps& caps = default_caps()) {
  const auto fld = U.ground().field();
  if (power(std::span<const Nat>(fld), U.arity()) != U.ground())
    throw PreconditionError("uniformize needs a ground of the form X^k");
  UniformizeResult res;
  if (m > fld.size()) return res;
  std::map<IndexSet, RestrictionCode> memo;
  auto code_of = [&](const IndexSet& S) -> const RestrictionCode& {
    auto it = memo.find(S);
    if (it == memo.end()) it = memo.emplace(S, restriction_code(U, S, caps)).first;
    return it->second;
  };
  std::vector<Nat> chosen;
  std::map<std::size_t, RestrictionCode> by_size;

  // New subsets of size ≤ p containing the last chosen element must match.
  auto extend_ok = [&](std::vector<std::size_t>& fixed_sizes) {
    const std::size_t last = chosen.size() - 1;
    for (std::size_t s = 1; s <= p && s <= chosen.size(); ++s) {
      bool ok = true;
      for_each_combination(last, s - 1, [&](std::span<const std::size_t> idx) {
        std::vector<Nat> sub;
        for (auto i : idx) sub.push_back(chosen[i]);
        sub.push_back(chosen[last]);
        const RestrictionCode& c = code_of(IndexSet(sub));
        auto it = by_size.find(s);
        if (it == by_size.end()) {
          by_size.emplace(s, c);
          fixed_sizes.push_back(s);
        } else if (it->second != c) {
          ok = false;
        }
        return ok;
      });
      if (!ok) return false;
    }
    return true;
  };

  std::function<bool(std::size_t)> dfs = [&](std::size_t start) {
    if (chosen.size() == m) return true;
    for (std::size_t i = start; i + (m - chosen.size()) <= fld.size(); ++i) {
      ++res.explored;
      chosen.push_back(fld[i]);
      std::vector<std::size_t> fixed;
      if (extend_ok(fixed) && dfs(i + 1)) return true;
      for (auto s : fixed) by_size.erase(s);
      chosen.pop_back();
    }
    return false;
  };
  if (!dfs(0)) return res;
  res.E = IndexSet(chosen);
  res.V = detail::copy_onto(U, *res.E, static_cast<Nat>(m), p, "uniformized");
  return res;
}

/// The unique assignment on [m]^k whose values are order isomorphic to U on
/// order-isomorphic sets, for fields of size ≤ p. Refuses non-invariant U.
inline FunctionAssignment transfer(const FunctionAssignment& U, std::size_t p, Nat m) {
  auto inv = is_order_invariant(U, p);
  if (!inv.holds)
    throw PreconditionError("transfer refuses a non-invariant assignment: " + inv.counterexample->A.str() + " vs " +
                            inv.counterexample->B->str());
  const auto fld = U.ground().field();
  if (power(std::span<const Nat>(fld), U.arity()) != U.ground())
    throw PreconditionError("transfer needs a ground of the form X^k");
  auto base = std::make_shared<FunctionAssignment>(U);
  auto X = std::make_shared<std::vector<Nat>>(fld);
  return FunctionAssignment(
      cube(m, U.arity()),
      [base, X, p](const TupleSet& A) {
        const std::size_t s = A.field().size();
        if (s > p || s > X->size())
          throw PreconditionError("field of " + A.str() + " exceeds the transferable size " + std::to_string(p));
        std::vector<Nat> first(X->begin(), X->begin() + s), last(X->end() - s, X->end());
        Endomorphism a = detail::transported(*base, A, first);
        Endomorphism b = detail::transported(*base, A, last);
        if (a != b) throw ContractViolation("transfer is not well defined at " + A.str());
        return a;
      },
      FunctionAssignment::Kind::derived, "transfer", U.name());
}

enum class Tiebreak { lex_least, lex_greatest };
enum class LevelOrder { ascending, descending };

struct GreedyCompletion {
  std::optional<Endomorphism> f;
  bool matches_direct = false;  // f == U(X^k)
  bool special_ok = true;       // every intermediate map passed the spot check
  std::size_t steps = 0;
  std::vector<std::string> diagnosis;
};

/// Builds the direct completion one point at a time: take x minimal over the
/// current domain, and among {U(A ∪ {x})(x) : A ⊆ dom f, U(A) ⊆ f} keep a
/// value of least sup.
inline GreedyCompletion direct_completion_greedy(const FunctionAssignment& U, Tiebreak tie = Tiebreak::lex_least,
                                                 LevelOrder order = LevelOrder::ascending,
                                                 const Caps& caps = default_caps()) {
  const TupleSet& X = U.ground();
  const auto fld = X.field();
  if (power(std::span<const Nat>(fld), U.arity()) != X)
    throw PreconditionError("direct completion needs a ground of the form X^k");
  if (X.size() > caps.greedy_domain)
    throw BudgetError("ground of " + std::to_string(X.size()) + " points exceeds the greedy cap " +
                      std::to_string(caps.greedy_domain));
  const std::size_t n = X.size();
  MaskedAssignment M(U);
  std::vector<std::int16_t> f(n, -1);
  std::uint64_t dom = 0;
  GreedyCompletion out;

  while (dom != (std::uint64_t{1} << n) - 1) {
    // Points outside dom whose strictly smaller-sup points are all inside.
    std::vector<std::size_t> minimal;
    for (std::size_t i = 0; i < n; ++i) {
      if (dom >> i & 1) continue;
      bool ok = true;
      for (std::size_t j = 0; j < n && ok; ++j)
        if (X[j].sup() < X[i].sup() && !(dom >> j & 1)) ok = false;
      if (ok) minimal.push_back(i);
    }
    const std::size_t x = order == LevelOrder::ascending ? minimal.front() : minimal.back();
    std::set<std::int16_t> values;
    for (std::uint64_t a = 0;; a = (a - dom) & dom) {
      const auto& img = M.at(a);
      bool inside = true;
      for (std::size_t i = 0; i < n && inside; ++i)
        if ((a >> i & 1) && img[i] != f[i]) inside = false;
      if (inside) values.insert(M.at(a | std::uint64_t{1} << x)[x]);
      if (a == dom) break;
    }
    if (values.empty()) {
      out.diagnosis.push_back("no candidate value at " + X[x].str());
      return out;
    }
    Nat best_sup = std::numeric_limits<Nat>::max();
    for (auto v : values) best_sup = std::min(best_sup, X[static_cast<std::size_t>(v)].sup());
    std::vector<std::int16_t> tied;
    for (auto v : values)
      if (X[static_cast<std::size_t>(v)].sup() == best_sup) tied.push_back(v);
    f[x] = tie == Tiebreak::lex_least ? tied.front() : tied.back();
    dom |= std::uint64_t{1} << x;
    ++out.steps;
    // Special: on a finite ground, U(dom f) must already agree with f.
    const auto& whole = M.at(dom);
    for (std::size_t i = 0; i < n; ++i)
      if ((dom >> i & 1) && whole[i] != f[i]) {
        if (out.special_ok)
          out.diagnosis.push_back("after fixing " + X[x].str() + ", U(dom f) disagrees with f at " + X[i].str() +
                                  "; the assignment is probably not #-decreasing");
        out.special_ok = false;
        break;
      }
  }
  std::vector<Tuple> image;
  for (std::size_t i = 0; i < n; ++i) image.push_back(X[static_cast<std::size_t>(f[i])]);
  out.f = Endomorphism(X, std::move(image));
  out.matches_direct = *out.f == U(X);
  if (!out.matches_direct) out.diagnosis.push_back("greedy result differs from U(X^k)");
  return out;
}

struct CompletionVerdict {
  bool holds = true;
  std::optional<TupleSet> uncovered;  // a least B with no admissible C
  bool whole_set_agrees = true;       // cross-check against "f itself matches some U(A)"
  std::uint64_t shapes = 0;
};

/// Every B ⊆ Y^k has some B ⊆ C ⊆ Y^k with f|C order isomorphic to some U(A).
inline CompletionVerdict is_completion(const Endomorphism& f, const FunctionAssignment& U,
                                       const Caps& caps = default_caps()) {
  const TupleSet& Y = f.carrier();
  if (Y.size() > caps.completion_points)
    throw BudgetError("is_completion is limited to " + std::to_string(caps.completion_points) + " points");
  if (U.ground().size() > 16) throw BudgetError("assignment ground too large to enumerate its shapes");
  std::set<TupleSet> shapes;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << U.ground().size()); ++m)
    shapes.insert(canonical_graph(U(U.ground().select(m))));
  CompletionVerdict v;
  v.shapes = shapes.size();
  const std::size_t n = Y.size();
  std::vector<std::size_t> image(n);
  for (std::size_t i = 0; i < n; ++i) image[i] = static_cast<std::size_t>(Y.index_of(f.image()[i]));
  const std::uint64_t full = std::uint64_t{1} << n;
  std::vector<char> covered(full, 0);
  for (std::uint64_t c = 0; c < full; ++c) {
    bool closed = true;
    for (std::size_t i = 0; i < n && closed; ++i)
      if ((c >> i & 1) && !(c >> image[i] & 1)) closed = false;
    if (!closed) continue;
    TupleSet C = Y.select(c);
    std::vector<Tuple> img;
    for (std::size_t i = 0; i < n; ++i)
      if (c >> i & 1) img.push_back(Y[image[i]]);
    covered[c] = shapes.contains(canonical_graph(Endomorphism(C, std::move(img))));
  }
  // covered[B] becomes "some C ⊇ B is covered".
  for (std::size_t bit = 0; bit < n; ++bit)
    for (std::uint64_t b = 0; b < full; ++b)
      if (!(b >> bit & 1) && covered[b | std::uint64_t{1} << bit]) covered[b] = 1;
  std::optional<std::uint64_t> worst;
  for (std::uint64_t b = 0; b < full; ++b) {
    if (covered[b]) continue;
    if (!worst || std::popcount(b) < std::popcount(*worst)) worst = b;
  }
  if (worst) {
    v.holds = false;
    v.uncovered = Y.select(*worst);
  }
  v.whole_set_agrees = v.holds == shapes.contains(canonical_graph(f));
  return v;
}

}  // namespace regressia
