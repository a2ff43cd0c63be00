#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "regressia/combinatorics.hpp"
#include "regressia/parallel.hpp"
#include "regressia/tuple.hpp"

namespace regressia {

enum class ThresholdStatement { t03, t04, theorem_I };

inline std::string to_string(ThresholdStatement s) {
  switch (s) {
    case ThresholdStatement::t03: return "0.3";
    case ThresholdStatement::t04: return "0.4";
    case ThresholdStatement::theorem_I: return "I";
  }
  return "?";
}

inline ThresholdStatement parse_threshold_statement(const std::string& s) {
  if (s == "0.3") return ThresholdStatement::t03;
  if (s == "0.4") return ThresholdStatement::t04;
  if (s == "I") return ThresholdStatement::theorem_I;
  throw ParseError("unknown statement '" + s + "' (expected 0.3, 0.4 or I)");
}

struct ThresholdRow {
  Nat n = 0;
  std::uint64_t functions = 0;
  bool holds = true;
  std::optional<TupleMap> counterexample;  // first failing F in enumeration order
};

struct ThresholdResult {
  ThresholdStatement statement;
  std::size_t k = 0, r = 0, p = 0;
  Nat n_max = 0;
  std::vector<ThresholdRow> rows;
  std::optional<Nat> threshold;  // least n with every n..n_max confirmed
};

namespace detail {

// One micro instance: the adversary's slots, their choice counts, and the
// candidate sets E expressed as slot-index lists.
struct ThresholdInstance {
  std::vector<Tuple> points;                    // slot keys
  std::vector<std::uint64_t> radix;             // choices per slot
  std::vector<std::vector<std::uint64_t>> code; // [slot][choice] -> canonical value code
  std::vector<std::vector<Nat>> sup;            // [slot][choice] -> |value|
  std::vector<std::vector<std::size_t>> candidate_slots;
  std::vector<std::vector<Nat>> slot_min;       // per candidate, per listed slot: min of the point
  std::vector<std::vector<Tuple>> values;       // [slot][choice] -> value
};

inline std::uint64_t space_size(ThresholdStatement st, Nat n, std::size_t k, std::size_t r) {
  const auto sat_mul = [](std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
    return a * b;
  };
  std::uint64_t total = 1;
  if (st == ThresholdStatement::theorem_I) {
    for_each_combination(n, k, [&](std::span<const std::size_t> idx) {
      total = sat_mul(total, idx[0] > 0 ? idx[0] : n);
      return true;
    });
    return total;
  }
  for_each_tuple(std::span<const Nat>(IndexSet::range(n).vec()), k, [&](const Tuple& x) {
    total = sat_mul(total, st == ThresholdStatement::t04 ? ipow(n, r) : ipow(x.min() + 1, r));
  });
  return total;
}

inline ThresholdInstance build_instance(ThresholdStatement st, Nat n, std::size_t k, std::size_t r, std::size_t p) {
  ThresholdInstance in;
  std::map<Tuple, std::size_t> slot_of;
  auto add_slot = [&](Tuple key, std::vector<Tuple> vals) {
    slot_of.emplace(key, in.points.size());
    in.points.push_back(std::move(key));
    in.radix.push_back(vals.size());
    std::vector<std::uint64_t> codes;
    std::vector<Nat> sups;
    for (const auto& v : vals) {
      std::uint64_t c = 0;
      for (Nat d : v.coords()) c = c * (n + 1) + d;
      codes.push_back(c);
      sups.push_back(v.sup());
    }
    in.code.push_back(std::move(codes));
    in.sup.push_back(std::move(sups));
    in.values.push_back(std::move(vals));
  };
  auto value_list = [&](Nat bound, std::size_t arity) {
    std::vector<Tuple> out;
    for_each_tuple(std::span<const Nat>(IndexSet::range(bound).vec()), arity, [&](const Tuple& v) { out.push_back(v); });
    return out;
  };
  if (st == ThresholdStatement::theorem_I) {
    for_each_combination(n, k, [&](std::span<const std::size_t> idx) {
      std::vector<Nat> s(idx.begin(), idx.end());
      add_slot(Tuple(s), value_list(s[0] > 0 ? s[0] : n, 1));
      return true;
    });
  } else {
    for_each_tuple(std::span<const Nat>(IndexSet::range(n).vec()), k, [&](const Tuple& x) {
      add_slot(x, value_list(st == ThresholdStatement::t04 ? n : x.min() + 1, r));
    });
  }
  for (const auto& E : subsets_of_size(std::span<const Nat>(IndexSet::range(n).vec()), p)) {
    std::vector<std::size_t> slots;
    std::vector<Nat> mins;
    if (st == ThresholdStatement::theorem_I) {
      for_each_combination(E.size(), k, [&](std::span<const std::size_t> idx) {
        std::vector<Nat> s;
        for (auto i : idx) s.push_back(E[i]);
        slots.push_back(slot_of.at(Tuple(s)));
        mins.push_back(s[0]);
        return true;
      });
    } else {
      for_each_tuple(std::span<const Nat>(E.vec()), k, [&](const Tuple& x) {
        slots.push_back(slot_of.at(x));
        mins.push_back(x.min());
      });
    }
    in.candidate_slots.push_back(std::move(slots));
    in.slot_min.push_back(std::move(mins));
  }
  return in;
}

inline bool instance_satisfied(ThresholdStatement st, const ThresholdInstance& in, const std::vector<std::uint64_t>& f,
                               std::uint64_t bound, std::vector<std::uint64_t>& scratch) {
  for (std::size_t c = 0; c < in.candidate_slots.size(); ++c) {
    const auto& slots = in.candidate_slots[c];
    const auto& mins = in.slot_min[c];
    bool ok = true;
    if (st == ThresholdStatement::theorem_I) {
      // Sets are listed lexicographically, so equal minima are contiguous.
      for (std::size_t i = 1; i < slots.size() && ok; ++i)
        if (mins[i] == mins[i - 1] && f[slots[i]] != f[slots[i - 1]]) ok = false;
    } else {
      scratch.clear();
      for (std::size_t i = 0; i < slots.size(); ++i) {
        const std::size_t s = slots[i];
        if (st == ThresholdStatement::t03 || in.sup[s][f[s]] < mins[i]) scratch.push_back(in.code[s][f[s]]);
      }
      std::sort(scratch.begin(), scratch.end());
      ok = static_cast<std::uint64_t>(std::unique(scratch.begin(), scratch.end()) - scratch.begin()) <= bound;
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace detail

/// Per-n exhaustive verdicts over the whole adversary space. No sampling: a
/// space above caps.function_space is a budget error.
inline ThresholdResult threshold_H(ThresholdStatement st, std::size_t k, std::size_t r, std::size_t p, Nat n_max,
                                   const Caps& caps = default_caps(), unsigned jobs = 1) {
  if (k == 0 || p == 0 || r == 0) throw PreconditionError("threshold_H requires k, r, p >= 1");
  ThresholdResult res{st, k, r, p, n_max, {}, std::nullopt};
  for (Nat n = 1; n <= n_max; ++n) {
    const std::uint64_t size = detail::space_size(st, n, k, r);
    if (size > caps.function_space)
      throw BudgetError("adversary space at n = " + std::to_string(n) + " exceeds the cap " +
                        std::to_string(caps.function_space));
  }
  const std::uint64_t bound = ipow(k, k) * p;
  for (Nat n = 1; n <= n_max; ++n) {
    auto in = detail::build_instance(st, n, k, r, p);
    ThresholdRow row;
    row.n = n;
    row.functions = detail::space_size(st, n, k, r);
    const unsigned workers = std::max(1u, jobs);
    std::vector<std::uint64_t> first_fail(workers, std::numeric_limits<std::uint64_t>::max());
    parallel_chunks(row.functions, workers, [&](std::uint64_t b, std::uint64_t e, unsigned w) {
      std::vector<std::uint64_t> f(in.points.size(), 0), scratch;
      std::uint64_t rest = b;
      for (std::size_t i = in.points.size(); i-- > 0;) {
        f[i] = rest % in.radix[i];
        rest /= in.radix[i];
      }
      for (std::uint64_t idx = b; idx < e; ++idx) {
        if (!detail::instance_satisfied(st, in, f, bound, scratch)) {
          first_fail[w] = idx;
          return;
        }
        for (std::size_t i = in.points.size(); i-- > 0;) {
          if (++f[i] < in.radix[i]) break;
          f[i] = 0;
        }
      }
    });
    const std::uint64_t fail = *std::min_element(first_fail.begin(), first_fail.end());
    if (fail != std::numeric_limits<std::uint64_t>::max()) {
      row.holds = false;
      TupleMap cx;
      std::uint64_t rest = fail;
      std::vector<std::uint64_t> f(in.points.size());
      for (std::size_t i = in.points.size(); i-- > 0;) {
        f[i] = rest % in.radix[i];
        rest /= in.radix[i];
      }
      for (std::size_t i = 0; i < in.points.size(); ++i) cx.emplace(in.points[i], in.values[i][f[i]]);
      row.counterexample = std::move(cx);
    }
    res.rows.push_back(std::move(row));
  }
  for (auto it = res.rows.rbegin(); it != res.rows.rend() && it->holds; ++it) res.threshold = it->n;
  return res;
}

}  // namespace regressia
