#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "regressia/combinatorics.hpp"
#include "regressia/tuple.hpp"

namespace regressia {

/// A total map A -> A. Values are stored aligned with the carrier's order.
class Endomorphism {
public:
  Endomorphism() = default;

  Endomorphism(TupleSet carrier, std::vector<Tuple> image) : carrier_(std::move(carrier)), image_(std::move(image)) {
    if (image_.size() != carrier_.size()) throw PreconditionError("endomorphism image does not match its carrier");
    for (std::size_t i = 0; i < image_.size(); ++i)
      if (!carrier_.contains(image_[i]))
        throw PreconditionError("endomorphism maps " + carrier_[i].str() + " to " + image_[i].str() +
                                " outside its carrier " + carrier_.str());
  }

  static Endomorphism identity(const TupleSet& A) { return Endomorphism(A, A.vec()); }

  static Endomorphism from_map(const TupleSet& A, const TupleMap& graph) {
    std::vector<Tuple> image;
    image.reserve(A.size());
    for (const auto& x : A) {
      auto it = graph.find(x);
      if (it == graph.end()) throw MissingKeyError("endomorphism graph is missing " + x.str());
      image.push_back(it->second);
    }
    if (graph.size() != A.size()) throw PreconditionError("endomorphism graph has keys outside " + A.str());
    return Endomorphism(A, std::move(image));
  }

  const TupleSet& carrier() const noexcept { return carrier_; }
  const std::vector<Tuple>& image() const noexcept { return image_; }

  const Tuple& at(const Tuple& x) const {
    long i = carrier_.index_of(x);
    if (i < 0) throw MissingKeyError("endomorphism is undefined at " + x.str());
    return image_[static_cast<std::size_t>(i)];
  }

  const Tuple* find(const Tuple& x) const {
    long i = carrier_.index_of(x);
    return i < 0 ? nullptr : &image_[static_cast<std::size_t>(i)];
  }

  /// Graph inclusion: every (x, f(x)) of this map is in `other`.
  bool subgraph_of(const Endomorphism& other) const {
    for (std::size_t i = 0; i < carrier_.size(); ++i) {
      const Tuple* v = other.find(carrier_[i]);
      if (!v || *v != image_[i]) return false;
    }
    return true;
  }

  TupleMap graph() const {
    TupleMap g;
    for (std::size_t i = 0; i < carrier_.size(); ++i) g.emplace(carrier_[i], image_[i]);
    return g;
  }

  friend bool operator==(const Endomorphism&, const Endomorphism&) = default;

  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < carrier_.size(); ++i) {
      if (i) s += ", ";
      s += carrier_[i].str() + "->" + image_[i].str();
    }
    return s + "}";
  }

private:
  TupleSet carrier_;
  std::vector<Tuple> image_;
};

using AssignmentTable = std::map<TupleSet, Endomorphism>;

/// U: finite subsets of a bounded ground -> endomorphisms.
///
/// Table assignments list every subset explicitly. Builtins are rules with a
/// name and parameters; derived assignments come from constructions (lex lift,
/// transfer, uniformization) and can be tabulated when the ground is small.
class FunctionAssignment {
public:
  using Rule = std::function<Endomorphism(const TupleSet&)>;

  enum class Kind { table, builtin, derived };

  FunctionAssignment(TupleSet ground, Rule rule, Kind kind, std::string name, std::string parameter = {})
      : ground_(std::move(ground)), rule_(std::move(rule)), kind_(kind), name_(std::move(name)),
        parameter_(std::move(parameter)) {}

  static FunctionAssignment identity(const TupleSet& ground) {
    return FunctionAssignment(ground, [](const TupleSet& A) { return Endomorphism::identity(A); }, Kind::builtin,
                              "identity");
  }

  /// Every point goes to the lexicographically least member of A.
  static FunctionAssignment min_collapse(const TupleSet& ground) {
    return FunctionAssignment(
        ground,
        [](const TupleSet& A) {
          std::vector<Tuple> image(A.size(), A.empty() ? Tuple{} : A[0]);
          return Endomorphism(A, std::move(image));
        },
        Kind::builtin, "min-collapse");
  }

  /// Explicit table; must cover every nonempty subset of the ground.
  static FunctionAssignment from_table(const TupleSet& ground, AssignmentTable table) {
    if (ground.size() > 20) throw BudgetError("table assignments are limited to grounds of at most 20 tuples");
    for (const auto& [A, endo] : table) {
      if (!A.subset_of(ground)) throw PreconditionError("table key " + A.str() + " is not a subset of the ground");
      if (endo.carrier() != A) throw PreconditionError("table entry for " + A.str() + " has the wrong carrier");
    }
    table.emplace(TupleSet{}, Endomorphism{});
    const std::uint64_t expected = std::uint64_t{1} << ground.size();
    if (table.size() != expected) {
      for (std::uint64_t m = 0; m < expected; ++m) {
        TupleSet A = ground.select(m);
        if (!table.contains(A)) throw MissingKeyError("table assignment has no entry for " + A.str());
      }
    }
    auto shared = std::make_shared<const AssignmentTable>(std::move(table));
    FunctionAssignment U(
        ground, [shared](const TupleSet& A) { return shared->at(A); }, Kind::table, "table");
    U.table_ = shared;
    return U;
  }

  const TupleSet& ground() const noexcept { return ground_; }
  std::size_t arity() const noexcept { return ground_.arity(); }
  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  const std::string& parameter() const noexcept { return parameter_; }
  const AssignmentTable* table() const noexcept { return table_.get(); }

  Endomorphism operator()(const TupleSet& A) const {
    if (!A.subset_of(ground_)) throw MissingKeyError("assignment queried outside its ground on " + A.str());
    if (A.empty()) return Endomorphism{};
    Endomorphism e = rule_(A);
    if (e.carrier() != A) throw PreconditionError("assignment rule returned the wrong carrier for " + A.str());
    return e;
  }

private:
  TupleSet ground_;
  Rule rule_;
  Kind kind_;
  std::string name_;
  std::string parameter_;
  std::shared_ptr<const AssignmentTable> table_;
};

/// Materializes every subset of the ground into an explicit table.
inline FunctionAssignment tabulate(const FunctionAssignment& U) {
  if (U.ground().size() > 20) throw BudgetError("ground too large to tabulate");
  AssignmentTable t;
  const std::uint64_t count = std::uint64_t{1} << U.ground().size();
  for (std::uint64_t m = 1; m < count; ++m) {
    TupleSet A = U.ground().select(m);
    t.emplace(A, U(A));
  }
  return FunctionAssignment::from_table(U.ground(), std::move(t));
}

/// Evaluates an assignment by bitmask over its ground, memoized. Images are
/// ground indices, -1 outside A.
class MaskedAssignment {
public:
  using Image = std::vector<std::int16_t>;

  explicit MaskedAssignment(const FunctionAssignment& U) : U_(&U), n_(U.ground().size()) {
    if (n_ > 24) throw BudgetError("ground too large for masked evaluation");
  }

  std::size_t size() const noexcept { return n_; }
  const TupleSet& ground() const noexcept { return U_->ground(); }
  const FunctionAssignment& assignment() const noexcept { return *U_; }

  const Image& at(std::uint64_t mask) {
    auto it = cache_.find(mask);
    if (it != cache_.end()) return it->second;
    Image img(n_, -1);
    TupleSet A = ground().select(mask);
    Endomorphism e = (*U_)(A);
    for (std::size_t j = 0; j < A.size(); ++j) {
      long i = ground().index_of(A[j]);
      img[static_cast<std::size_t>(i)] = static_cast<std::int16_t>(ground().index_of(e.image()[j]));
    }
    return cache_.emplace(mask, std::move(img)).first->second;
  }

private:
  const FunctionAssignment* U_;
  std::size_t n_;
  std::unordered_map<std::uint64_t, Image> cache_;
};

}  // namespace regressia
