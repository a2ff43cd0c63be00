#include <gtest/gtest.h>

#include "regressia/completions.hpp"
#include "regressia/dfnl.hpp"
#include "support/generators.hpp"

using namespace regressia;

namespace {

TupleSet points(std::initializer_list<Nat> xs) {
  std::vector<Tuple> v;
  for (Nat x : xs) v.push_back(scalar(x));
  return TupleSet(std::move(v));
}

// Identity except U(A) sends `from` to `to`.
FunctionAssignment perturbed_identity(const TupleSet& ground, const TupleSet& A, Nat from, Nat to) {
  AssignmentTable t;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << ground.size()); ++m) {
    TupleSet B = ground.select(m);
    TupleMap g;
    for (const auto& x : B) g.emplace(x, x);
    if (B == A) g[scalar(from)] = scalar(to);
    t.emplace(B, Endomorphism::from_map(B, g));
  }
  return FunctionAssignment::from_table(ground, std::move(t));
}

// k = 1 tables whose value at the i-th point of A depends only on (|A|, i):
// order invariant by construction.
FunctionAssignment rank_rule(gen::Source& s, const TupleSet& ground) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> g;
  AssignmentTable t;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << ground.size()); ++m) {
    TupleSet A = ground.select(m);
    std::vector<Tuple> img;
    for (std::size_t i = 0; i < A.size(); ++i) {
      auto it = g.find({A.size(), i});
      if (it == g.end()) it = g.emplace(std::make_pair(A.size(), i), s.below(A.size())).first;
      img.push_back(A[it->second]);
    }
    t.emplace(A, Endomorphism(A, std::move(img)));
  }
  return FunctionAssignment::from_table(ground, std::move(t));
}

// Order isomorphism of two finite graphs, by comparing their rank pictures.
using Graph = std::map<Tuple, Tuple>;

std::set<std::vector<Nat>> rank_picture(const Graph& g) {
  std::set<Nat> fld;
  for (const auto& [x, y] : g) {
    for (Nat c : x.coords()) fld.insert(c);
    for (Nat c : y.coords()) fld.insert(c);
  }
  std::map<Nat, Nat> rank;
  Nat r = 0;
  for (Nat c : fld) rank[c] = r++;
  std::set<std::vector<Nat>> out;
  for (const auto& [x, y] : g) {
    std::vector<Nat> row;
    for (Nat c : x.coords()) row.push_back(rank[c]);
    for (Nat c : y.coords()) row.push_back(rank[c]);
    out.insert(row);
  }
  return out;
}

// Every B ⊆ Y has some f-closed C ⊇ B with f|C order isomorphic to some U(A).
bool completion_oracle(const Graph& f, const FunctionAssignment& U) {
  std::vector<Tuple> Y;
  for (const auto& [x, y] : f) Y.push_back(x);
  std::set<std::set<std::vector<Nat>>> shapes;
  const auto& G = U.ground().vec();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << G.size()); ++m) {
    std::vector<Tuple> A;
    for (std::size_t i = 0; i < G.size(); ++i)
      if (m >> i & 1) A.push_back(G[i]);
    Graph g;
    if (!A.empty()) {
      const auto e = U(TupleSet(A));
      for (const auto& x : A) g.emplace(x, e.at(x));
    }
    shapes.insert(rank_picture(g));
  }
  const std::size_t n = Y.size();
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
    bool ok = false;
    for (std::uint64_t c = b; c < (std::uint64_t{1} << n) && !ok; ++c) {
      if ((c & b) != b) continue;
      Graph part;
      bool closed = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(c >> i & 1)) continue;
        const Tuple& y = f.at(Y[i]);
        const auto j = static_cast<std::size_t>(std::find(Y.begin(), Y.end(), y) - Y.begin());
        if (!(c >> j & 1)) closed = false;
        part.emplace(Y[i], y);
      }
      if (closed && shapes.contains(rank_picture(part))) ok = true;
    }
    if (!ok) return false;
  }
  return true;
}

void expect_identity_on_small_fields(const FunctionAssignment& V, std::size_t p) {
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << V.ground().size()); ++m) {
    const TupleSet A = V.ground().select(m);
    if (A.field().size() > p) continue;
    EXPECT_EQ(V(A), Endomorphism::identity(A));
  }
}

}  // namespace

TEST(RestrictionCode, SingletonsUnderIdentity) {
  const auto U = FunctionAssignment::identity(cube(6, 2));
  EXPECT_EQ(restriction_code(U, IndexSet{1}), restriction_code(U, IndexSet{4}));
}

TEST(RestrictionCode, IdentitySharesOneCodePerSize) {
  const auto U = FunctionAssignment::identity(cube(5, 1));
  for (std::size_t p = 1; p <= 3; ++p) {
    const auto subs = subsets_of_size(std::span<const Nat>(IndexSet::range(5).vec()), p);
    for (const auto& S : subs) EXPECT_EQ(restriction_code(U, S), restriction_code(U, subs.front()));
  }
}

TEST(RestrictionCode, PerturbationSplitsACode) {
  const auto U = perturbed_identity(cube(4, 1), points({1, 3}), 3, 1);
  EXPECT_NE(restriction_code(U, IndexSet{0, 1}), restriction_code(U, IndexSet{1, 3}));
  EXPECT_EQ(restriction_code(U, IndexSet{0, 1}), restriction_code(U, IndexSet{2, 3}));
}

TEST(RestrictionCode, RejectsForeignElements) {
  const auto U = FunctionAssignment::identity(cube(3, 1));
  EXPECT_THROW(restriction_code(U, IndexSet{1, 7}), PreconditionError);
}

TEST(OrderInvariance, Builtins) {
  EXPECT_TRUE(is_order_invariant(FunctionAssignment::identity(cube(3, 2))).holds);
  EXPECT_TRUE(is_order_invariant(FunctionAssignment::min_collapse(cube(4, 1))).holds);
  EXPECT_TRUE(is_order_invariant(FunctionAssignment::min_collapse(cube(3, 2))).holds);
}

TEST(OrderInvariance, PerturbedTableFailsAtThePerturbedPair) {
  const auto U = perturbed_identity(cube(4, 1), points({1, 3}), 3, 1);
  const auto v = is_order_invariant(U);
  ASSERT_FALSE(v.holds);
  EXPECT_EQ(v.counterexample->A, points({0, 1}));
  EXPECT_EQ(*v.counterexample->B, points({1, 3}));
}

TEST(OrderInvariance, ExplicitScopeAndCap) {
  const auto U = perturbed_identity(cube(4, 1), points({1, 3}), 3, 1);
  PairScope scope{{points({0, 2}), points({1, 2})}, {points({0}), points({3})}};
  EXPECT_TRUE(is_order_invariant(U, std::nullopt, scope).holds);
  scope.emplace_back(points({0, 3}), points({1, 3}));
  EXPECT_FALSE(is_order_invariant(U, std::nullopt, scope).holds);
  EXPECT_THROW(is_order_invariant(FunctionAssignment::identity(cube(9, 1))), BudgetError);
}

// Uniform by codes up to p exactly when order invariant on fields up to p.
TEST(OrderInvariance, CodesAgreeWithInvarianceOnSmallInstances) {
  gen::Source s(21);
  std::size_t invariant = 0;
  for (int it = 0; it < 120; ++it) {
    const TupleSet g = cube(3 + s.below(2), 1);
    FunctionAssignment U = FunctionAssignment::identity(g);
    switch (s.below(3)) {
      case 0: U = rank_rule(s, g); break;
      case 1: U = gen::random_table(s, g); break;
      default: {
        const TupleSet A = g.select(1 + s.below((1u << g.size()) - 1));
        U = perturbed_identity(g, A, A.vec().back()[0], A.vec().front()[0]);
        break;
      }
    }
    for (std::size_t p = 1; p <= g.size(); ++p) {
      const bool codes = is_uniform_by_codes(U, p).holds;
      const bool inv = is_order_invariant(U, p).holds;
      ASSERT_EQ(codes, inv) << "p=" << p;
      invariant += inv;
    }
  }
  EXPECT_GT(invariant, 0u);
}

TEST(OrderInvariance, CodesAgreeForPairs) {
  gen::Source s(22);
  for (int it = 0; it < 20; ++it) {
    const TupleSet g = cube(2, 2);
    const auto U = s.coin() ? gen::random_lowering_table(s, g) : FunctionAssignment::min_collapse(g);
    for (std::size_t p = 1; p <= 2; ++p) EXPECT_EQ(is_uniform_by_codes(U, p).holds, is_order_invariant(U, p).holds);
  }
}

TEST(Uniformize, Identity) {
  const auto r = uniformize(FunctionAssignment::identity(cube(7, 1)), 2, 4);
  ASSERT_TRUE(r.E);
  EXPECT_EQ(*r.E, (IndexSet{0, 1, 2, 3}));
  expect_identity_on_small_fields(*r.V, 2);
}

TEST(Uniformize, InvariantInputKeepsThePrefix) {
  const auto U = FunctionAssignment::min_collapse(cube(6, 1));
  const auto r = uniformize(U, 3, 4);
  ASSERT_TRUE(r.E);
  EXPECT_EQ(*r.E, (IndexSet{0, 1, 2, 3}));
  for (std::uint64_t m = 1; m < 16; ++m) {
    const TupleSet A = r.V->ground().select(m);
    if (A.field().size() <= 3) {
      EXPECT_EQ((*r.V)(A), U(A));
    }
  }
}

TEST(Uniformize, RandomTablesAreVerifiedByCodes) {
  gen::Source s(31);
  std::size_t found = 0;
  for (int it = 0; it < 25; ++it) {
    const auto U = gen::random_table(s, cube(8, 1));
    const auto r = uniformize(U, 2, 3);
    if (!r.E) continue;
    ++found;
    EXPECT_EQ(r.E->size(), 3u);
    EXPECT_TRUE(is_uniform_by_codes(U, 2, *r.E).holds);
    EXPECT_TRUE(is_order_invariant(*r.V, 2).holds);
    EXPECT_TRUE(is_uniform_by_codes(*r.V, 2).holds);
  }
  EXPECT_GT(found, 0u);
}

TEST(Uniformize, TooLargeTargetFindsNothing) {
  EXPECT_FALSE(uniformize(FunctionAssignment::identity(cube(3, 1)), 2, 5).E);
}

TEST(Transfer, IdentityToIdentity) {
  const auto V = transfer(FunctionAssignment::identity(cube(4, 1)), 4, 7);
  expect_identity_on_small_fields(V, 4);
}

TEST(Transfer, MinCollapseOnFiveToNine) {
  const auto V = transfer(FunctionAssignment::min_collapse(cube(5, 1)), 5, 9);
  const auto W = FunctionAssignment::min_collapse(cube(9, 1));
  gen::Source s(2);
  for (int it = 0; it < 200; ++it) {
    const TupleSet A = gen::tuple_set(s, 1, 9, 1 + s.below(5));
    EXPECT_EQ(V(A), W(A));
  }
}

TEST(Transfer, RefusesNonInvariantInput) {
  const auto U = perturbed_identity(cube(4, 1), points({1, 3}), 3, 1);
  EXPECT_THROW(transfer(U, 2, 6), PreconditionError);
  EXPECT_NO_THROW(transfer(U, 1, 6));
}

TEST(Transfer, RestrictBackIsTheOriginal) {
  gen::Source s(12);
  for (int it = 0; it < 20; ++it) {
    const TupleSet g = cube(4, 1);
    const auto U = rank_rule(s, g);
    const std::size_t p = 1 + s.below(4);
    const auto V = transfer(U, p, 8);
    for (std::uint64_t m = 1; m < 16; ++m) {
      const TupleSet A = g.select(m);
      if (A.field().size() <= p) {
        EXPECT_EQ(V(A), U(A));
      }
    }
  }
}

TEST(Transfer, FieldBeyondPIsRefused) {
  const auto V = transfer(FunctionAssignment::identity(cube(4, 1)), 2, 6);
  EXPECT_THROW(V(points({0, 1, 2})), PreconditionError);
}

TEST(Greedy, IdentityCompletesToIdentity) {
  const auto U = FunctionAssignment::identity(cube(3, 2));
  const auto g = direct_completion_greedy(U);
  ASSERT_TRUE(g.f);
  EXPECT_EQ(*g.f, Endomorphism::identity(cube(3, 2)));
  EXPECT_TRUE(g.matches_direct);
  EXPECT_TRUE(g.special_ok);
  EXPECT_EQ(g.steps, 9u);
}

TEST(Greedy, SharpDecreasingSamplesMatchDirectEvaluation) {
  gen::Source s(40);
  const auto o = StrictOrder::sup_norm();
  std::size_t tested = 0;
  for (int it = 0; it < 400 && tested < 40; ++it) {
    const auto U = gen::random_lowering_table(s, cube(3, 1));
    if (!check_sharp_decreasing(U, o, o).holds) continue;
    ++tested;
    const auto a = direct_completion_greedy(U, Tiebreak::lex_least, LevelOrder::ascending);
    const auto b = direct_completion_greedy(U, Tiebreak::lex_greatest, LevelOrder::ascending);
    const auto c = direct_completion_greedy(U, Tiebreak::lex_least, LevelOrder::descending);
    ASSERT_TRUE(a.f && b.f && c.f);
    EXPECT_EQ(*a.f, U(U.ground()));
    EXPECT_EQ(*a.f, *b.f);
    EXPECT_EQ(*a.f, *c.f);
    EXPECT_TRUE(a.special_ok && b.special_ok && c.special_ok);
  }
  EXPECT_GT(tested, 5u);
}

TEST(Greedy, DfnlDerivedPairs) {
  const auto U = lemma_5_2_assignment(Dfnl::min_field(2), cube(3, 2));
  const auto a = direct_completion_greedy(U, Tiebreak::lex_least);
  const auto b = direct_completion_greedy(U, Tiebreak::lex_greatest, LevelOrder::descending);
  ASSERT_TRUE(a.f && b.f);
  EXPECT_TRUE(a.matches_direct);
  EXPECT_EQ(*a.f, *b.f);
}

TEST(Greedy, NonDecreasingInputIsDiagnosed) {
  // U({0,2}) sends 2 to 0; every other value is the identity.
  const auto U = perturbed_identity(cube(3, 1), points({0, 2}), 2, 0);
  const auto g = direct_completion_greedy(U);
  ASSERT_TRUE(g.f);
  EXPECT_EQ(g.f->at(scalar(2)), scalar(0));
  EXPECT_FALSE(g.matches_direct);
  EXPECT_FALSE(g.special_ok);
  EXPECT_FALSE(g.diagnosis.empty());
}

TEST(Greedy, Caps) {
  const auto U = FunctionAssignment::identity(cube(5, 2));
  EXPECT_THROW(direct_completion_greedy(U), BudgetError);
  EXPECT_THROW(direct_completion_greedy(FunctionAssignment::identity(TupleSet{Tuple{0, 1}})), PreconditionError);
}

TEST(Completion, DirectValueIsACompletion) {
  gen::Source s(50);
  for (int it = 0; it < 10; ++it) {
    const auto U = gen::random_table(s, cube(3, 1));
    EXPECT_TRUE(is_completion(U(U.ground()), U).holds);
  }
}

TEST(Completion, TransferredUniformAssignment) {
  const auto U = FunctionAssignment::min_collapse(cube(4, 1));
  const auto V = transfer(U, 4, 5);
  const TupleSet Y = cube(4, 1);
  const auto v = is_completion(V(Y), U);
  EXPECT_TRUE(v.holds);
  EXPECT_TRUE(completion_oracle(V(Y).graph(), U));
}

TEST(Completion, SingletonNegative) {
  const auto U = FunctionAssignment::identity(cube(3, 1));
  const Endomorphism f = Endomorphism::from_map(cube(3, 1), {{scalar(0), scalar(0)}, {scalar(1), scalar(0)}, {scalar(2), scalar(2)}});
  const auto v = is_completion(f, U);
  ASSERT_FALSE(v.holds);
  EXPECT_EQ(*v.uncovered, points({1}));
  EXPECT_TRUE(v.whole_set_agrees);
}

TEST(Completion, MatchesLiteralOracle) {
  gen::Source s(51);
  std::size_t positives = 0, negatives = 0;
  for (int it = 0; it < 120; ++it) {
    const TupleSet g = cube(3, 1);
    const auto U = s.coin() ? gen::random_lowering_table(s, g) : rank_rule(s, g);
    const TupleSet Y = gen::tuple_set(s, 1, 5, 2 + s.below(3));
    std::vector<Tuple> img;
    for (std::size_t i = 0; i < Y.size(); ++i) img.push_back(Y[s.below(Y.size())]);
    const Endomorphism f(Y, img);
    const bool got = is_completion(f, U).holds;
    ASSERT_EQ(got, completion_oracle(f.graph(), U)) << f.str();
    (got ? positives : negatives)++;
  }
  EXPECT_GT(positives, 0u);
  EXPECT_GT(negatives, 0u);
}

TEST(Completion, PointCap) {
  const auto U = FunctionAssignment::identity(cube(2, 1));
  EXPECT_THROW(is_completion(Endomorphism::identity(cube(5, 2)), U), BudgetError);
}
