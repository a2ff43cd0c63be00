#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regressia/assignment.hpp"
#include "regressia/bef.hpp"
#include "regressia/closure.hpp"

namespace regressia {

/// A decreasing functional H(f, x): f is a finite scalar map on k-tuples, x a
/// k-tuple. Contract: f ⊆ g implies H(f, x) >= H(g, x), and H(f, x) lies in
/// fld(f) ∪ coords(x).
struct Dfnl {
  enum class Kind { builtin_min_field, bef_derived, custom };
  using Fn = std::function<Nat(const ScalarMap&, const Tuple&)>;

  Kind kind = Kind::custom;
  std::size_t arity = 1;
  Fn fn;
  std::optional<BefFormula> formula;
  std::string name;

  Nat operator()(const ScalarMap& f, const Tuple& x) const { return fn(f, x); }

  /// H(f, x) = min(fld(f) ∪ coords(x)).
  static Dfnl min_field(std::size_t k) {
    Dfnl H;
    H.kind = Kind::builtin_min_field;
    H.arity = k;
    H.name = "min-field";
    H.fn = [](const ScalarMap& f, const Tuple& x) {
      Nat m = x.min();
      for (const auto& [y, v] : f) {
        m = std::min({m, v, y.min()});
      }
      return m;
    };
    return H;
  }
};

inline std::string to_string(Dfnl::Kind k) {
  switch (k) {
    case Dfnl::Kind::builtin_min_field: return "builtin-min-field";
    case Dfnl::Kind::bef_derived: return "bef-derived";
    case Dfnl::Kind::custom: return "custom";
  }
  return "?";
}

/// H(F, x) = min{j ∈ fld(F) ∪ coords(x) : j = |x| or B(x, j) is true in F}.
/// Only j < |x| can beat |x|, and for those the quantifier bound is |x|.
inline Dfnl dfnl_from_bef(const BefFormula& B) {
  if (B.q != B.r + 1)
    throw PreconditionError("a functional needs q = r + 1, got q = " + std::to_string(B.q) +
                            ", r = " + std::to_string(B.r));
  Dfnl H;
  H.kind = Dfnl::Kind::bef_derived;
  H.arity = B.r;
  H.formula = B;
  H.name = to_string(B);
  H.fn = [B](const ScalarMap& f, const Tuple& x) {
    if (x.arity() != B.r)
      throw PreconditionError("functional of arity " + std::to_string(B.r) + " applied to " + x.str());
    std::vector<Nat> candidates = field_of(f);
    for (Nat c : x.coords()) candidates.push_back(c);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    const Nat top = x.sup();
    std::vector<Nat> args(x.vec());
    args.push_back(0);
    for (Nat j : candidates) {
      if (j >= top) break;
      args.back() = j;
      if (eval_bef(B, f, std::span<const Nat>(args))) return j;
    }
    return top;
  };
  return H;
}

struct DfnlVerdict {
  bool holds = true;
  std::string details;
  std::size_t checked = 0;
};

/// Checks both contract clauses along an increasing chain of scalar maps at
/// each of the given points.
inline DfnlVerdict validate_dfnl(const Dfnl& H, const std::vector<ScalarMap>& chain, const std::vector<Tuple>& points) {
  for (std::size_t i = 1; i < chain.size(); ++i)
    for (const auto& [y, v] : chain[i - 1]) {
      auto it = chain[i].find(y);
      if (it == chain[i].end() || it->second != v)
        throw PreconditionError("chain is not increasing at position " + std::to_string(i));
    }
  DfnlVerdict out;
  for (const auto& x : points) {
    std::optional<Nat> prev;
    for (std::size_t i = 0; i < chain.size(); ++i) {
      const Nat h = H(chain[i], x);
      ++out.checked;
      const auto fld = field_of(chain[i]);
      const bool in_field = std::binary_search(fld.begin(), fld.end(), h) ||
                            std::find(x.coords().begin(), x.coords().end(), h) != x.coords().end();
      if (!in_field) {
        out.holds = false;
        out.details = "value " + std::to_string(h) + " at " + x.str() + " on chain member " + std::to_string(i) +
                      " is outside fld(f) and coords(x)";
        return out;
      }
      if (prev && h > *prev) {
        out.holds = false;
        out.details = "value at " + x.str() + " rose from " + std::to_string(*prev) + " to " + std::to_string(h) +
                      " on chain member " + std::to_string(i);
        return out;
      }
      prev = h;
    }
  }
  return out;
}

namespace detail {

// F(x) = H(F restricted to kept points of smaller sup, x), level by level.
template <class Keep>
ScalarMap sup_recursion(std::vector<Tuple> pts, const Dfnl& H, Keep keep) {
  std::stable_sort(pts.begin(), pts.end(), [](const Tuple& a, const Tuple& b) { return a.sup() < b.sup(); });
  ScalarMap F, below;
  std::size_t i = 0;
  while (i < pts.size()) {
    const Nat level = pts[i].sup();
    const auto fld = field_of(below);
    std::vector<std::pair<Tuple, Nat>> done;
    for (; i < pts.size() && pts[i].sup() == level; ++i) {
      const Tuple& x = pts[i];
      const Nat v = H(below, x);
      const bool ok = std::binary_search(fld.begin(), fld.end(), v) ||
                      std::find(x.coords().begin(), x.coords().end(), v) != x.coords().end();
      if (!ok)
        throw ContractViolation("functional " + H.name + " returned " + std::to_string(v) + " at " + x.str() +
                                ", outside fld(f) and coords(x)");
      done.emplace_back(x, v);
    }
    for (auto& [x, v] : done) {
      if (keep(x)) below.emplace(x, v);
      F.emplace(std::move(x), v);
    }
  }
  return F;
}

}  // namespace detail

/// The unique F: A -> fld(A) with F(x) = H(F|{y ∈ A : |y| < |x|}, x).
/// `order`, when given, must list A; it fixes the processing order inside
/// each sup level, which cannot change the result.
inline ScalarMap rcn(const TupleSet& A, const Dfnl& H, std::span<const Tuple> order = {}) {
  if (!A.empty() && A.arity() != H.arity)
    throw PreconditionError("functional of arity " + std::to_string(H.arity) + " on a set of arity " +
                            std::to_string(A.arity()));
  std::vector<Tuple> pts;
  if (order.empty()) {
    pts = A.vec();
  } else {
    pts.assign(order.begin(), order.end());
    if (TupleSet(pts) != A || pts.size() != A.size())
      throw PreconditionError("processing order is not a listing of A");
  }
  return detail::sup_recursion(std::move(pts), H, [](const Tuple&) { return true; });
}

/// F(x) = H(F|{y ∈ A′ : |y| < |x|}, x) where A′ is the closed core of A.
inline ScalarMap mrcn(const TupleSet& A, const Dfnl& H) {
  if (!A.empty() && A.arity() != H.arity)
    throw PreconditionError("functional of arity " + std::to_string(H.arity) + " on a set of arity " +
                            std::to_string(A.arity()));
  const TupleSet core = closed_core(A);
  return detail::sup_recursion(A.vec(), H, [&](const Tuple& x) { return core.contains(x); });
}

/// V(A)(x) = diag(MRCN(A, H)(x)) when x is in the lower closed core of A and
/// the value is below |x|; V(A)(x) = x otherwise.
inline FunctionAssignment lemma_5_2_assignment(const Dfnl& H, const TupleSet& ground) {
  if (!ground.empty() && ground.arity() != H.arity)
    throw PreconditionError("functional arity does not match the ground");
  auto rule = [H](const TupleSet& A) {
    const ScalarMap m = mrcn(A, H);
    const TupleSet hat = lower_closed_core(A);
    std::vector<Tuple> image;
    image.reserve(A.size());
    for (const auto& x : A) {
      const Nat v = m.at(x);
      if (hat.contains(x) && v < x.sup()) {
        Tuple y = Tuple::diagonal(v, x.arity());
        if (!A.contains(y))
          throw ContractViolation("diagonal value " + y.str() + " for " + x.str() + " is not in " + A.str());
        image.push_back(std::move(y));
      } else {
        image.push_back(x);
      }
    }
    return Endomorphism(A, std::move(image));
  };
  return FunctionAssignment(ground, rule, FunctionAssignment::Kind::builtin, "dfnl-derived", H.name);
}

}  // namespace regressia
