#pragma once

// Seeded generators for property tests.

#include <random>
#include <vector>

#include "regressia/bef.hpp"
#include "regressia/closure.hpp"
#include "regressia/combinatorics.hpp"
#include "regressia/assignment.hpp"

namespace gen {

using namespace regressia;

class Source {
public:
  explicit Source(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng_); }
  bool coin() { return below(2) == 1; }
  std::mt19937_64& engine() { return eng_; }

private:
  std::mt19937_64 eng_;
};

inline Tuple tuple(Source& s, std::size_t k, Nat n) {
  std::vector<Nat> c(k);
  for (auto& v : c) v = s.below(n);
  return Tuple(std::move(c));
}

/// A set of `size` distinct k-tuples over [n], or all of [n]^k when that is smaller.
inline TupleSet tuple_set(Source& s, std::size_t k, Nat n, std::size_t size) {
  size = static_cast<std::size_t>(std::min<std::uint64_t>(size, ipow(n, k)));
  TupleSet out;
  while (out.size() < size) out.insert(tuple(s, k, n));
  return out;
}

/// Every nonempty subset mapped by an independent uniform choice per point.
inline FunctionAssignment random_table(Source& s, const TupleSet& ground) {
  AssignmentTable t;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << ground.size()); ++m) {
    TupleSet A = ground.select(m);
    std::vector<Tuple> img;
    for (std::size_t i = 0; i < A.size(); ++i) img.push_back(A[s.below(A.size())]);
    t.emplace(A, Endomorphism(A, std::move(img)));
  }
  return FunctionAssignment::from_table(ground, std::move(t));
}

/// Tables where every image point has sup no larger than its argument:
/// a cheap source of nontrivial candidates for the decreasing filters.
inline FunctionAssignment random_lowering_table(Source& s, const TupleSet& ground) {
  AssignmentTable t;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << ground.size()); ++m) {
    TupleSet A = ground.select(m);
    std::vector<Tuple> img;
    for (const auto& x : A) {
      std::vector<Tuple> low;
      for (const auto& y : A)
        if (y.sup() <= x.sup()) low.push_back(y);
      img.push_back(s.below(3) == 0 ? x : low[s.below(low.size())]);
    }
    t.emplace(A, Endomorphism(A, std::move(img)));
  }
  return FunctionAssignment::from_table(ground, std::move(t));
}

inline BefTerm term(Source& s, const BefFormula& B) {
  BefTerm t;
  switch (s.below(3)) {
    case 0: t.kind = BefTerm::Kind::x; t.index = 1 + s.below(B.q); break;
    case 1: t.kind = BefTerm::Kind::y; t.index = 1 + s.below(B.r * B.t); break;
    default: t.kind = BefTerm::Kind::f; t.index = 1 + s.below(B.t); break;
  }
  return t;
}

/// A random formula of the given shape with 1-3 disjuncts of 1-3 literals.
inline BefFormula formula(Source& s, std::size_t q, std::size_t t, std::size_t r, bool allow_negation = true) {
  BefFormula B;
  B.q = q;
  B.t = t;
  B.r = r;
  const std::size_t d = 1 + s.below(3);
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<BefLiteral> conj;
    const std::size_t c = 1 + s.below(3);
    for (std::size_t j = 0; j < c; ++j) {
      BefLiteral lit;
      lit.lhs = term(s, B);
      lit.rhs = term(s, B);
      lit.rel = static_cast<BefRel>(s.below(3));
      lit.negated = allow_negation && s.below(4) == 0;
      conj.push_back(lit);
    }
    B.dnf.push_back(std::move(conj));
  }
  return B;
}

/// Closure of a few random tuples, so |fld| stays at most n.
inline TupleSet closed_set(Source& s, std::size_t k, Nat n, std::size_t seeds) {
  return closure(tuple_set(s, k, n, seeds));
}

/// A random partial scalar map on a subset of `domain`, values below n.
inline ScalarMap scalar_map(Source& s, const TupleSet& domain, Nat n, unsigned keep_percent = 60) {
  ScalarMap f;
  for (const auto& x : domain)
    if (s.below(100) < keep_percent) f.emplace(x, s.below(n));
  return f;
}

}  // namespace gen
