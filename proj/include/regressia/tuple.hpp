#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "regressia/error.hpp"

namespace regressia {

using Nat = std::uint64_t;

/// A point x ∈ N^k. Ordered lexicographically.
class Tuple {
public:
  Tuple() = default;
  Tuple(std::initializer_list<Nat> coords) : coords_(coords) {}
  explicit Tuple(std::vector<Nat> coords) : coords_(std::move(coords)) {}

  /// The k-tuple all of whose coordinates are `value`.
  static Tuple diagonal(Nat value, std::size_t arity) { return Tuple(std::vector<Nat>(arity, value)); }

  std::size_t arity() const noexcept { return coords_.size(); }
  Nat operator[](std::size_t i) const { return coords_[i]; }
  std::span<const Nat> coords() const noexcept { return coords_; }
  const std::vector<Nat>& vec() const noexcept { return coords_; }

  /// Sup norm |x|.
  Nat sup() const noexcept { return coords_.empty() ? 0 : *std::max_element(coords_.begin(), coords_.end()); }
  Nat min() const noexcept { return coords_.empty() ? 0 : *std::min_element(coords_.begin(), coords_.end()); }

  /// x ⊆ y: every coordinate of x is a coordinate of y.
  bool coords_within(const Tuple& y) const {
    return std::all_of(coords_.begin(), coords_.end(), [&](Nat c) {
      return std::find(y.coords_.begin(), y.coords_.end(), c) != y.coords_.end();
    });
  }

  Tuple concat(const Tuple& rhs) const {
    std::vector<Nat> out = coords_;
    out.insert(out.end(), rhs.coords_.begin(), rhs.coords_.end());
    return Tuple(std::move(out));
  }

  Tuple prefix(std::size_t n) const { return Tuple(std::vector<Nat>(coords_.begin(), coords_.begin() + n)); }
  Tuple suffix(std::size_t from) const { return Tuple(std::vector<Nat>(coords_.begin() + from, coords_.end())); }

  friend bool operator==(const Tuple&, const Tuple&) = default;
  friend std::strong_ordering operator<=>(const Tuple& a, const Tuple& b) {
    return std::lexicographical_compare_three_way(a.coords_.begin(), a.coords_.end(), b.coords_.begin(),
                                                  b.coords_.end());
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(coords_[i]);
    }
    return s + ")";
  }

private:
  std::vector<Nat> coords_;
};

/// Finite strictly increasing sequence of naturals; E_i is the i-th least (1-based).
class IndexSet {
public:
  IndexSet() = default;
  IndexSet(std::initializer_list<Nat> xs) : IndexSet(std::vector<Nat>(xs)) {}
  explicit IndexSet(std::vector<Nat> xs) : elems_(std::move(xs)) {
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
  }

  /// {0, 1, ..., n-1}.
  static IndexSet range(Nat n) {
    std::vector<Nat> xs(n);
    for (Nat i = 0; i < n; ++i) xs[i] = i;
    return IndexSet(std::move(xs));
  }

  std::size_t size() const noexcept { return elems_.size(); }
  bool empty() const noexcept { return elems_.empty(); }
  Nat element(std::size_t i) const {
    if (i == 0 || i > elems_.size()) throw MissingKeyError("IndexSet has no element E_" + std::to_string(i));
    return elems_[i - 1];
  }
  Nat operator[](std::size_t i) const { return elems_[i]; }
  bool contains(Nat v) const { return std::binary_search(elems_.begin(), elems_.end(), v); }
  const std::vector<Nat>& vec() const noexcept { return elems_; }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
  friend std::strong_ordering operator<=>(const IndexSet& a, const IndexSet& b) {
    return std::lexicographical_compare_three_way(a.elems_.begin(), a.elems_.end(), b.elems_.begin(),
                                                  b.elems_.end());
  }

  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(elems_[i]);
    }
    return s + "}";
  }

private:
  std::vector<Nat> elems_;
};

/// Finite duplicate-free set of tuples of one arity, kept in lexicographic order.
class TupleSet {
public:
  TupleSet() = default;
  TupleSet(std::initializer_list<Tuple> xs) : TupleSet(std::vector<Tuple>(xs)) {}
  explicit TupleSet(std::vector<Tuple> xs) : members_(std::move(xs)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    check_arity();
  }

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  std::size_t arity() const noexcept { return members_.empty() ? 0 : members_.front().arity(); }
  const Tuple& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<Tuple>& vec() const noexcept { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  bool contains(const Tuple& x) const { return std::binary_search(members_.begin(), members_.end(), x); }

  /// Position of x in lexicographic order, or -1.
  long index_of(const Tuple& x) const {
    auto it = std::lower_bound(members_.begin(), members_.end(), x);
    if (it == members_.end() || *it != x) return -1;
    return static_cast<long>(it - members_.begin());
  }

  void insert(const Tuple& x) {
    if (!members_.empty() && x.arity() != arity())
      throw PreconditionError("arity mismatch inserting " + x.str() + " into a set of arity " +
                              std::to_string(arity()));
    auto it = std::lower_bound(members_.begin(), members_.end(), x);
    if (it == members_.end() || *it != x) members_.insert(it, x);
  }

  void erase(const Tuple& x) {
    auto it = std::lower_bound(members_.begin(), members_.end(), x);
    if (it != members_.end() && *it == x) members_.erase(it);
  }

  TupleSet with(const Tuple& x) const {
    TupleSet out = *this;
    out.insert(x);
    return out;
  }

  bool subset_of(const TupleSet& other) const {
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
  }

  /// fld(A): every coordinate of every member, increasing.
  std::vector<Nat> field() const {
    std::vector<Nat> out;
    for (const auto& x : members_) out.insert(out.end(), x.coords().begin(), x.coords().end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// The sub-family selected by bit i of `mask` for member i.
  TupleSet select(std::uint64_t mask) const {
    std::vector<Tuple> out;
    for (std::size_t i = 0; i < members_.size(); ++i)
      if (mask >> i & 1) out.push_back(members_[i]);
    TupleSet s;
    s.members_ = std::move(out);
    return s;
  }

  /// Inverse of select for subsets of this set.
  std::uint64_t mask_of(const TupleSet& sub) const {
    std::uint64_t m = 0;
    for (const auto& x : sub) {
      long i = index_of(x);
      if (i < 0) throw MissingKeyError(x.str() + " is not a member of the ground set");
      m |= std::uint64_t{1} << i;
    }
    return m;
  }

  friend bool operator==(const TupleSet&, const TupleSet&) = default;
  friend std::strong_ordering operator<=>(const TupleSet& a, const TupleSet& b) {
    return std::lexicographical_compare_three_way(a.members_.begin(), a.members_.end(), b.members_.begin(),
                                                  b.members_.end());
  }

  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (i) s += ",";
      s += members_[i].str();
    }
    return s + "}";
  }

private:
  void check_arity() const {
    for (const auto& x : members_) {
      if (x.arity() == 0) throw PreconditionError("tuples must have arity >= 1");
      if (x.arity() != members_.front().arity())
        throw PreconditionError("mixed arities in tuple set: " + members_.front().str() + " and " + x.str());
    }
  }

  std::vector<Tuple> members_;
};

/// Partial map N^k -> N^r. Scalar values are stored as arity-1 tuples.
using TupleMap = std::map<Tuple, Tuple>;

/// Partial map N^k -> N.
using ScalarMap = std::map<Tuple, Nat>;

/// Calls fn on every tuple of the given arity over `values`, in lexicographic order
/// when `values` is increasing.
template <class Fn>
void for_each_tuple(std::span<const Nat> values, std::size_t arity, Fn&& fn) {
  if (values.empty() || arity == 0) return;
  std::vector<std::size_t> idx(arity, 0);
  std::vector<Nat> coords(arity, values[0]);
  while (true) {
    fn(Tuple(coords));
    std::size_t pos = arity;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < values.size()) {
        coords[pos] = values[idx[pos]];
        break;
      }
      idx[pos] = 0;
      coords[pos] = values[0];
      if (pos == 0) return;
    }
  }
}

/// E^k as a tuple set.
inline TupleSet power(std::span<const Nat> values, std::size_t arity) {
  std::vector<Tuple> out;
  for_each_tuple(values, arity, [&](Tuple t) { out.push_back(std::move(t)); });
  return TupleSet(std::move(out));
}

inline TupleSet power(const IndexSet& e, std::size_t arity) { return power(std::span<const Nat>(e.vec()), arity); }

/// [n]^k.
inline TupleSet cube(Nat n, std::size_t arity) { return power(IndexSet::range(n), arity); }

inline Tuple scalar(Nat v) { return Tuple{v}; }

/// fld of a scalar map's graph: coordinates of the domain together with the values.
inline std::vector<Nat> field_of(const ScalarMap& f) {
  std::vector<Nat> out;
  for (const auto& [x, v] : f) {
    out.insert(out.end(), x.coords().begin(), x.coords().end());
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline TupleSet domain_of(const ScalarMap& f) {
  std::vector<Tuple> xs;
  for (const auto& [x, v] : f) xs.push_back(x);
  return TupleSet(std::move(xs));
}

}  // namespace regressia

template <>
struct std::hash<regressia::Tuple> {
  std::size_t operator()(const regressia::Tuple& t) const noexcept {
    std::size_t h = t.arity();
    for (auto c : t.coords()) h ^= std::hash<regressia::Nat>{}(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};
