#include <gtest/gtest.h>

#include "regressia/bef.hpp"
#include "support/generators.hpp"

using namespace regressia;

namespace {

ScalarMap smap(std::initializer_list<std::pair<Nat, Nat>> kv) {
  ScalarMap f;
  for (auto [k, v] : kv) f.emplace(scalar(k), v);
  return f;
}

// Literal evaluation: enumerate every t-tuple of domain keys with all
// coordinates below max(args) and test the matrix directly.
bool eval_oracle(const BefFormula& B, const ScalarMap& f, const std::vector<Nat>& x) {
  Nat bound = 0;
  for (Nat a : x) bound = std::max(bound, a);
  std::vector<std::pair<Tuple, Nat>> keys;
  for (const auto& kv : f)
    if (kv.first.sup() < bound) keys.push_back(kv);
  if (keys.empty()) return false;
  std::vector<std::size_t> idx(B.t, 0);
  for (;;) {
    std::vector<Nat> y, fy;
    for (auto i : idx) {
      for (Nat c : keys[i].first.coords()) y.push_back(c);
      fy.push_back(keys[i].second);
    }
    auto val = [&](const BefTerm& t) {
      return t.kind == BefTerm::Kind::x ? x[t.index - 1] : t.kind == BefTerm::Kind::y ? y[t.index - 1] : fy[t.index - 1];
    };
    for (const auto& conj : B.dnf) {
      bool ok = true;
      for (const auto& l : conj) {
        const Nat a = val(l.lhs), b = val(l.rhs);
        bool v = false;
        if (l.rel == BefRel::less) v = a < b;
        if (l.rel == BefRel::equal) v = a == b;
        if (l.rel == BefRel::greater) v = a > b;
        if (l.negated) v = !v;
        ok = ok && v;
      }
      if (ok) return true;
    }
    std::size_t i = idx.size();
    while (i > 0 && ++idx[i - 1] == keys.size()) idx[--i] = 0;
    if (i == 0) return false;
  }
}

}  // namespace

TEST(BefParse, SingleAtom) {
  const auto B = parse_bef("bef q=2 t=1 r=1 : f1 < x2");
  EXPECT_EQ(B.q, 2u);
  ASSERT_EQ(B.dnf.size(), 1u);
  ASSERT_EQ(B.dnf[0].size(), 1u);
  const auto& l = B.dnf[0][0];
  EXPECT_FALSE(l.negated);
  EXPECT_EQ(l.lhs, (BefTerm{BefTerm::Kind::f, 1}));
  EXPECT_EQ(l.rel, BefRel::less);
  EXPECT_EQ(l.rhs, (BefTerm{BefTerm::Kind::x, 2}));
}

TEST(BefParse, TwoConjuncts) {
  const auto B = parse_bef("bef q=2 t=1 r=1 : (y1 < x1 & f1 = x2) | !(x1 < x2)");
  ASSERT_EQ(B.dnf.size(), 2u);
  EXPECT_EQ(B.dnf[0].size(), 2u);
  EXPECT_EQ(B.dnf[0][1].rel, BefRel::equal);
  ASSERT_EQ(B.dnf[1].size(), 1u);
  EXPECT_TRUE(B.dnf[1][0].negated);
  EXPECT_FALSE(B.negates_f());
  EXPECT_EQ(to_string(B), "bef q=2 t=1 r=1 : (y1 < x1 & f1 = x2) | !(x1 < x2)");
}

TEST(BefParse, MultilineAndBareNegation) {
  const auto B = parse_bef("bef q=3 t=2 r=1 :\n  !f2 > y1 &\n  x3 = y2");
  EXPECT_EQ(B.t, 2u);
  ASSERT_EQ(B.dnf[0].size(), 2u);
  EXPECT_TRUE(B.dnf[0][0].negated);
  EXPECT_TRUE(B.negates_f());
}

TEST(BefParse, Errors) {
  EXPECT_THROW(parse_bef("bef q=1 t=1 r=1 : f2 < x1"), ParseError);
  EXPECT_THROW(parse_bef("bef q=1 t=1 r=1 : x2 < x1"), ParseError);
  EXPECT_THROW(parse_bef("bef q=1 t=1 r=1 : y2 < x1"), ParseError);
  EXPECT_THROW(parse_bef("bef q=1 t=1 r=1 : ff1 < x1"), ParseError);
  EXPECT_THROW(parse_bef("bef q=1 t=1 r=1 : f(y1) < x1"), ParseError);
  EXPECT_THROW(parse_bef("bef q=2 t=1 r=1 : !(x1 < x2 & x2 < x1)"), ParseError);
  EXPECT_THROW(parse_bef("bef q=0 t=1 r=1 : x1 < x1"), ParseError);
  EXPECT_THROW(parse_bef("bef q=1 t=1 r=1 : x1 <"), ParseError);
  EXPECT_THROW(parse_bef("bef q=1 t=1 r=1 : x1 < x1 )"), ParseError);
  EXPECT_THROW(parse_bef("q=1 t=1 r=1 : x1 < x1"), ParseError);
}

TEST(BefParse, ErrorPosition) {
  try {
    parse_bef("bef q=1 t=1 r=1 :\n x1 < f2");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 7u);
  }
}

TEST(BefParse, RandomRoundTrip) {
  gen::Source s(101);
  for (int it = 0; it < 500; ++it) {
    const auto B = gen::formula(s, 1 + s.below(4), 1 + s.below(3), 1 + s.below(3));
    const std::string text = to_string(B);
    EXPECT_EQ(parse_bef(text), B) << text;
  }
}

TEST(BefEval, EmptyMapIsFalse) {
  EXPECT_FALSE(eval_bef(parse_bef("bef q=1 t=1 r=1 : x1 = x1"), {}, {7}));
}

TEST(BefEval, TautologyNeedsABlockBelowTheBound) {
  const auto B = parse_bef("bef q=1 t=1 r=1 : x1 = x1");
  EXPECT_TRUE(eval_bef(B, smap({{0, 0}}), {1}));
  EXPECT_FALSE(eval_bef(B, smap({{0, 0}}), {0}));
}

TEST(BefEval, TwoWitnesses) {
  const auto B = parse_bef("bef q=2 t=1 r=1 : f1 < x1");
  const ScalarMap f = smap({{0, 0}, {2, 0}});
  EXPECT_TRUE(eval_bef(B, f, {3, 5}));
  EXPECT_FALSE(eval_bef(B, f, {0, 1}));
  // Only y = 0 is below the bound 1, and f(0) = 0 is not < 0.
  EXPECT_FALSE(eval_bef(parse_bef("bef q=2 t=1 r=1 : y1 > x1"), f, {0, 1}));
}

TEST(BefEval, PairsOfBlocks) {
  // Two distinct blocks with equal values.
  const auto B = parse_bef("bef q=1 t=2 r=1 : y1 < y2 & f1 = f2");
  EXPECT_TRUE(eval_bef(B, smap({{0, 4}, {1, 4}, {3, 9}}), {2}));
  EXPECT_FALSE(eval_bef(B, smap({{0, 4}, {1, 5}, {3, 4}}), {2}));
  EXPECT_TRUE(eval_bef(B, smap({{0, 4}, {1, 5}, {3, 4}}), {4}));
}

TEST(BefEval, Preconditions) {
  const auto B = parse_bef("bef q=2 t=1 r=1 : f1 < x1");
  EXPECT_THROW(eval_bef(B, smap({{0, 0}}), {1}), PreconditionError);
  ScalarMap g{{Tuple{0, 0}, 0}};
  EXPECT_THROW(eval_bef(B, g, {1, 1}), PreconditionError);
}

TEST(BefEval, MatchesLiteralOracle) {
  gen::Source s(102);
  for (int it = 0; it < 400; ++it) {
    const std::size_t r = 1 + s.below(2), t = 1 + s.below(2), q = 1 + s.below(3);
    const auto B = gen::formula(s, q, t, r);
    const ScalarMap f = gen::scalar_map(s, cube(5, r), 6, 30);
    std::vector<Nat> x;
    for (std::size_t i = 0; i < q; ++i) x.push_back(s.below(7));
    EXPECT_EQ(eval_bef(B, f, std::span<const Nat>(x)), eval_oracle(B, f, x)) << to_string(B);
  }
}

// Without negated f atoms, adding points to f can only add witnesses.
TEST(BefEval, MonotoneInFWithoutNegatedFAtoms) {
  gen::Source s(103);
  std::size_t flips = 0;
  for (int it = 0; it < 600; ++it) {
    const std::size_t r = 1 + s.below(2), t = 1 + s.below(2), q = 1 + s.below(3);
    const auto B = gen::formula(s, q, t, r);
    if (B.negates_f()) continue;
    const TupleSet dom = cube(5, r);
    const ScalarMap g = gen::scalar_map(s, dom, 6, 50);
    ScalarMap f;
    for (const auto& kv : g)
      if (s.coin()) f.insert(kv);
    std::vector<Nat> x;
    for (std::size_t i = 0; i < q; ++i) x.push_back(s.below(7));
    const bool a = eval_bef(B, f, std::span<const Nat>(x)), b = eval_bef(B, g, std::span<const Nat>(x));
    if (a) {
      EXPECT_TRUE(b) << to_string(B);
    }
    flips += !a && b;
  }
  EXPECT_GT(flips, 0u);
}
