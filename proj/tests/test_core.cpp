#include <gtest/gtest.h>

#include <cmath>

#include "regressia/closure.hpp"
#include "regressia/gadgets.hpp"
#include "regressia/order_type.hpp"
#include "regressia/ramsey.hpp"
#include "regressia/regressive.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace regressia;

namespace {

std::vector<Nat> pattern(std::initializer_list<Nat> xs) { return order_type(Tuple(xs)).pattern; }

TupleMap square_difference(const std::vector<Nat>& dom) {
  TupleMap F;
  for (Nat x : dom)
    for (Nat y : dom) {
      const Nat d = x > y ? x - y : y - x;
      F.emplace(Tuple{x, y}, scalar(d * d));
    }
  return F;
}

}  // namespace

TEST(OrderType, RankReplacement) {
  EXPECT_EQ(pattern({0, 1, 2}), (std::vector<Nat>{0, 1, 2}));
  EXPECT_EQ(pattern({7, 7}), (std::vector<Nat>{0, 0}));
  EXPECT_EQ(pattern({5, 2, 5}), (std::vector<Nat>{1, 0, 1}));
}

TEST(OrderType, IdempotentOnPatterns) {
  gen::Source s(11);
  for (int i = 0; i < 500; ++i) {
    const Tuple x = gen::tuple(s, 1 + s.below(6), 9);
    const auto p = order_type(x).pattern;
    EXPECT_EQ(order_type(Tuple(p)).pattern, p);
  }
}

TEST(OrderType, PatternValuesAreAnInitialSegment) {
  gen::Source s(12);
  for (int i = 0; i < 500; ++i) {
    const Tuple x = gen::tuple(s, 1 + s.below(6), 7);
    auto p = order_type(x).pattern;
    const Nat m = *std::max_element(p.begin(), p.end());
    for (Nat v = 0; v <= m; ++v) EXPECT_NE(std::find(p.begin(), p.end(), v), p.end());
    for (std::size_t a = 0; a < p.size(); ++a)
      for (std::size_t b = 0; b < p.size(); ++b) EXPECT_EQ(p[a] < p[b], x[a] < x[b]);
  }
}

TEST(OrderType, SameOrderTypeIsAnEquivalence) {
  gen::Source s(13);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t k = 1 + s.below(3);
    const Tuple x = gen::tuple(s, k, 3), y = gen::tuple(s, k, 3), z = gen::tuple(s, k, 3);
    EXPECT_TRUE(same_order_type(x, x));
    EXPECT_EQ(same_order_type(x, y), same_order_type(y, x));
    if (same_order_type(x, y) && same_order_type(y, z)) {
      EXPECT_TRUE(same_order_type(x, z));
    }
  }
}

TEST(OrderType, CountMatchesSurjectionSum) {
  for (std::size_t k = 1; k <= 6; ++k) EXPECT_EQ(ot(k), oracle::ordered_bell(k)) << "k=" << k;
  EXPECT_EQ(ot(1), 1u);
  EXPECT_EQ(ot(2), 3u);
  EXPECT_EQ(ot(3), 13u);
}

TEST(OrderType, CountWithinBounds) {
  for (std::size_t k = 1; k <= 6; ++k) {
    std::uint64_t fact = 1;
    for (std::size_t i = 2; i <= k; ++i) fact *= i;
    EXPECT_LE(ot(k), ipow(k, k));
    EXPECT_LE(ot(k), (std::uint64_t{1} << k) * fact);
  }
}

TEST(OrderType, CapIsABudgetError) {
  Caps caps;
  caps.max_arity = 4;
  EXPECT_THROW(ot(5, caps), BudgetError);
  EXPECT_THROW(ot(0), PreconditionError);
}

TEST(RegressiveValues, SquareDifferenceOnPowersOfTwo) {
  const std::vector<Nat> B = {1, 2, 4, 8};
  const TupleMap F = square_difference(B);
  EXPECT_EQ(regressive_values(F, power(IndexSet(B), 2)), TupleSet{scalar(0)});
}

TEST(RegressiveValues, EmptyDomain) {
  EXPECT_TRUE(regressive_values(TupleMap{}, TupleSet{}).empty());
}

TEST(RegressiveValues, ConstantZero) {
  TupleMap F;
  for (Nat x = 0; x < 5; ++x) F.emplace(scalar(x), scalar(0));
  EXPECT_EQ(regressive_values(F, TupleSet{scalar(1), scalar(2), scalar(3), scalar(4)}), TupleSet{scalar(0)});
}

TEST(RegressiveValues, MissingKeyNamesTheTuple) {
  TupleMap F{{scalar(1), scalar(0)}};
  try {
    regressive_values(F, TupleSet{scalar(1), scalar(3)});
    FAIL();
  } catch (const MissingKeyError& e) {
    EXPECT_NE(std::string(e.what()).find("(3)"), std::string::npos);
  }
}

TEST(RegressiveValues, MonotoneInB) {
  gen::Source s(21);
  for (int i = 0; i < 200; ++i) {
    const TupleSet ground = cube(5, 2);
    const std::size_t r = 1 + s.below(2);
    TupleMap F;
    for (const auto& x : ground) F.emplace(x, gen::tuple(s, r, 5));
    const TupleSet B = gen::tuple_set(s, 2, 5, 1 + s.below(10));
    TupleSet Bp = B;
    for (int j = 0; j < 5; ++j) Bp.insert(gen::tuple(s, 2, 5));
    EXPECT_TRUE(regressive_values(F, B).subset_of(regressive_values(F, Bp)));
  }
}

TEST(RegressiveValues, SoundAgainstOracle) {
  gen::Source s(22);
  for (int i = 0; i < 200; ++i) {
    const std::size_t k = 1 + s.below(2);
    const std::size_t r = 1 + s.below(2);
    TupleMap F;
    for (const auto& x : cube(5, k)) F.emplace(x, gen::tuple(s, r, 5));
    std::vector<Nat> E = {0, 1, 2, 3, 4};
    E.erase(E.begin() + static_cast<long>(s.below(5)));
    const TupleSet got = regressive_values(F, power(IndexSet(E), k));
    const auto want = oracle::regressive_set([&](const std::vector<Nat>& x) { return F.at(Tuple(x)).vec(); }, E, k);
    ASSERT_EQ(got.size(), want.size());
    for (const auto& y : got) {
      EXPECT_TRUE(want.contains(y.vec()));
      bool witnessed = false;
      for (const auto& [x, v] : F)
        if (v == y && IndexSet(E).contains(x.min()) && x.coords_within(Tuple(E)) && is_regressive_at(x, v))
          witnessed = true;
      EXPECT_TRUE(witnessed);
    }
  }
}

TEST(Closure, DiagonalSetIsClosed) { EXPECT_TRUE(is_closed(TupleSet{Tuple{3, 3, 3}})); }

TEST(Closure, PairClosure) {
  const TupleSet A{Tuple{0, 1}};
  EXPECT_FALSE(is_closed(A));
  EXPECT_EQ(closure(A), (TupleSet{Tuple{0, 0}, Tuple{0, 1}, Tuple{1, 0}, Tuple{1, 1}}));
}

TEST(Closure, IdempotentAndLeast) {
  gen::Source s(31);
  for (int i = 0; i < 200; ++i) {
    const std::size_t k = 1 + s.below(3);
    const TupleSet A = gen::tuple_set(s, k, 4, 1 + s.below(4));
    const TupleSet C = closure(A);
    EXPECT_TRUE(is_closed(C));
    EXPECT_TRUE(A.subset_of(C));
    EXPECT_EQ(closure(C), C);
    // Dropping any non-member of A from C breaks closedness or coverage.
    for (const auto& x : C) {
      if (A.contains(x)) continue;
      TupleSet D = C;
      D.erase(x);
      EXPECT_FALSE(is_closed(D));
    }
  }
}

TEST(Closure, SizeCap) {
  Caps caps;
  caps.closure_size = 10;
  EXPECT_THROW(closure(TupleSet{Tuple{0, 1, 2}}, caps), BudgetError);
}

TEST(Closure, Cores) {
  const TupleSet A{Tuple{0, 0}, Tuple{0, 1}, Tuple{1, 1}, Tuple{2, 2}};
  EXPECT_EQ(closed_core(A), (TupleSet{Tuple{0, 0}, Tuple{1, 1}, Tuple{2, 2}}));
  // (0,1) misses (1,0), which has the same sup, so it survives the lower core.
  EXPECT_EQ(lower_closed_core(A), A);
}

TEST(Ramsey, ConstantColoringTakesFirstElements) {
  auto c = [](std::span<const Nat>) { return Nat{4}; };
  auto r = ramsey_homogeneous(c, IndexSet{2, 4, 6, 8, 10}, 2, 3);
  ASSERT_TRUE(r.subset);
  EXPECT_EQ(*r.subset, (IndexSet{2, 4, 6}));
}

TEST(Ramsey, EverySixPointColoringHasATriangle) {
  const IndexSet E = IndexSet::range(6);
  for (std::uint32_t m = 0; m < (1u << 15); m += 97) {
    auto c = [&](std::span<const Nat> s) {
      unsigned idx = 0;
      for (unsigned i = 0; i < 6; ++i)
        for (unsigned j = i + 1; j < 6; ++j, ++idx)
          if (i == s[0] && j == s[1]) return Nat{(m >> idx) & 1u};
      return Nat{0};
    };
    EXPECT_TRUE(ramsey_homogeneous(c, E, 2, 3).subset.has_value()) << m;
  }
}

TEST(Ramsey, PentagonHasNoTriangle) {
  SetColoring c;
  for (Nat i = 0; i < 5; ++i)
    for (Nat j = i + 1; j < 5; ++j) c[{i, j}] = (j - i == 1 || j - i == 4) ? 0 : 1;
  auto r = ramsey_homogeneous(c, IndexSet::range(5), 2, 3);
  EXPECT_FALSE(r.subset.has_value());
  EXPECT_TRUE(r.complete);
}

TEST(Ramsey, PartialColoringIsAMissingKey) {
  SetColoring c{{{0, 1}, 0}};
  EXPECT_THROW(ramsey_homogeneous(c, IndexSet::range(3), 2, 2), MissingKeyError);
}

TEST(Ramsey, NoneOnlyWhenNoSubsetIsHomogeneous) {
  gen::Source s(41);
  for (int it = 0; it < 300; ++it) {
    const Nat n = 4 + s.below(5);
    const std::size_t k = 1 + s.below(2), p = k + 1 + s.below(2);
    const Nat colors = 2 + s.below(2);
    SetColoring c;
    for_each_combination(n, k, [&](std::span<const std::size_t> idx) {
      c[std::vector<Nat>(idx.begin(), idx.end())] = s.below(colors);
      return true;
    });
    auto r = ramsey_homogeneous(c, IndexSet::range(n), k, p);
    // Independent scan for the least homogeneous p-subset.
    std::optional<std::vector<Nat>> least;
    for (const auto& S : oracle::subsets(n, p)) {
      std::set<Nat> seen;
      for_each_combination(p, k, [&](std::span<const std::size_t> idx) {
        std::vector<Nat> key;
        for (auto i : idx) key.push_back(S[i]);
        seen.insert(c.at(key));
        return true;
      });
      if (seen.size() == 1 && (!least || S < *least)) least = S;
    }
    ASSERT_EQ(r.subset.has_value(), least.has_value());
    if (least) {
      EXPECT_EQ(r.subset->vec(), *least);
    }
  }
}

TEST(MinHomogeneous, ConstantAndMin) {
  auto constant = [](std::span<const Nat>) { return Nat{0}; };
  auto minimum = [](std::span<const Nat> s) { return s[0]; };
  EXPECT_TRUE(min_homogeneous_check(constant, IndexSet::range(6), 2).holds);
  EXPECT_TRUE(min_homogeneous_check(minimum, IndexSet{1, 3, 5, 7}, 3).holds);
}

TEST(MinHomogeneous, MaxFailsWithWitness) {
  auto maximum = [](std::span<const Nat> s) { return s.back(); };
  auto v = min_homogeneous_check(maximum, IndexSet{0, 1, 2, 3}, 2);
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.counterexample);
  EXPECT_EQ(v.counterexample->first, (IndexSet{0, 1}));
  EXPECT_EQ(v.counterexample->second, (IndexSet{0, 2}));
}

TEST(MinHomogeneous, VacuousWhenTooSmall) {
  auto maximum = [](std::span<const Nat> s) { return s.back(); };
  auto v = min_homogeneous_check(maximum, IndexSet{4}, 2);
  EXPECT_TRUE(v.holds);
  EXPECT_TRUE(v.vacuous);
}

TEST(Gadgets, SpreadGadgetIsRegressive) {
  auto F = [](std::span<const Nat> s) { return s[0] == 0 ? Nat{0} : s[0] - 1; };
  const Nat n = 12;
  const SetColoring G = gadget_lemma_1_3(F, n, 2);
  for (const auto& [s, v] : G)
    if (s[0] > 0) {
      EXPECT_LT(v, s[0]);
    }
}

TEST(Gadgets, HomogeneousSetsOfTheSpreadGadgetDoubleEveryOtherStep) {
  // Comparing G on {E_i, E_{i+1}} and {E_i, E_{i+2}}: if E_{i+2} - E_i < E_i
  // both fall in the difference case with different values.
  gen::Source s(51);
  for (int it = 0; it < 20; ++it) {
    const Nat n = 10;
    SetColoring F;
    for_each_combination(n, 2, [&](std::span<const std::size_t> idx) {
      F[{idx[0], idx[1]}] = idx[0] == 0 ? 0 : s.below(idx[0]);
      return true;
    });
    const SetColoring G = gadget_lemma_1_3(F, n, 2);
    for (const auto& E : oracle::subsets(n, 4)) {
      if (!min_homogeneous_check(G, IndexSet(E), 2).holds) continue;
      for (std::size_t i = 0; i + 2 < E.size(); ++i) EXPECT_GE(E[i + 2], 2 * E[i]) << IndexSet(E).str();
    }
  }
}

TEST(Gadgets, PairGadgetShape) {
  auto F = [](std::span<const Nat> s) { return s[0] / 2; };
  const TupleMap G = gadget_lemma_1_5(F, 5, 2);
  EXPECT_EQ(G.at(Tuple{3, 1}), (Tuple{0, 0}));
  EXPECT_EQ(G.at(Tuple{2, 4}), (Tuple{1, 1}));
  EXPECT_EQ(G.at(Tuple{0, 4}), (Tuple{0, 1}));
}

TEST(Gadgets, RejectNonRegressive) {
  auto F = [](std::span<const Nat> s) { return s[0]; };
  EXPECT_THROW(gadget_lemma_1_3(F, 5, 2), PreconditionError);
  EXPECT_THROW(gadget_lemma_1_3([](std::span<const Nat>) { return Nat{0}; }, 5, 1), PreconditionError);
}

TEST(Gadgets, SpreadCheck) {
  auto F = [](std::span<const Nat> s) { return s[0] == 0 ? Nat{0} : Nat{1} % s[0]; };
  auto good = theorem_IV_check(F, IndexSet{1, 3, 9, 513}, 2);
  EXPECT_TRUE(good.spread);
  auto bad = theorem_IV_check(F, IndexSet{1, 3, 4}, 2);
  EXPECT_FALSE(bad.spread);
  ASSERT_TRUE(bad.spread_violation);
  EXPECT_EQ(bad.spread_violation->first, 3u);
}
