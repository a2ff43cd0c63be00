#pragma once

// Command layer behind the regressia executable. Each command takes a JSON
// object of parameters and returns a self-describing report plus an exit
// status, so the same code serves the CLI and the acceptance battery.

#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "regressia/regressia.hpp"
#include "regressia/serialize.hpp"

namespace regressia::cmd {

enum Status : int { ok = 0, property_failure = 1, inconclusive = 2, input_error = 3, usage_error = 4 };

struct RunOptions {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  Caps caps;
  std::uint64_t max_candidates = 1u << 20;
  Strategy strategy = Strategy::exhaustive;
};

struct Outcome {
  json report;
  int status = ok;
  std::string text;
};

inline void set_cap(Caps& c, const std::string& name, std::uint64_t v) {
  if (name == "max_arity") c.max_arity = v;
  else if (name == "ramsey_exhaustive_size") c.ramsey_exhaustive_size = v;
  else if (name == "ramsey_exhaustive_arity") c.ramsey_exhaustive_arity = v;
  else if (name == "assignment_scope") c.assignment_scope = v;
  else if (name == "greedy_domain") c.greedy_domain = v;
  else if (name == "completion_points") c.completion_points = v;
  else if (name == "closure_size") c.closure_size = v;
  else if (name == "function_space") c.function_space = v;
  else if (name == "code_subsets") c.code_subsets = v;
  else throw ParseError("unknown cap '" + name + "'");
}

inline Caps caps_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("caps must be an object");
  Caps c;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
      throw ParseError("cap '" + k + "' must be a natural number");
    set_cap(c, k, v.get<std::uint64_t>());
  }
  return c;
}

/// Parameter access that records the resolved value of every parameter read,
/// so a report carries everything needed to reproduce it.
class Args {
public:
  explicit Args(json in = json::object()) : in_(std::move(in)) {
    if (!in_.is_object()) throw ParseError("parameters must be a JSON object");
  }

  bool has(const std::string& key) const { return in_.contains(key) && !in_.at(key).is_null(); }
  const json& used() const { return used_; }

  Nat nat(const std::string& key, std::optional<Nat> def = {}) {
    Nat v;
    if (!has(key)) {
      v = require(key, def);
    } else {
      const json& j = in_.at(key);
      if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
        v = j.get<Nat>();
      } else if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 19)
          throw ParseError("parameter '" + key + "' expects a natural number, got '" + s + "'");
        v = std::stoull(s);
      } else {
        throw ParseError("parameter '" + key + "' expects a natural number");
      }
    }
    used_[key] = v;
    return v;
  }

  std::string text(const std::string& key, std::optional<std::string> def = {}) {
    std::string v;
    if (!has(key)) {
      v = require(key, def);
    } else {
      if (!in_.at(key).is_string()) throw ParseError("parameter '" + key + "' expects a string");
      v = in_.at(key).get<std::string>();
    }
    used_[key] = v;
    return v;
  }

  bool flag(const std::string& key, bool def) {
    bool v = def;
    if (has(key)) {
      const json& j = in_.at(key);
      if (j.is_boolean()) v = j.get<bool>();
      else if (j == "true" || j == "1") v = true;
      else if (j == "false" || j == "0") v = false;
      else throw ParseError("parameter '" + key + "' expects true or false");
    }
    used_[key] = v;
    return v;
  }

  Tuple tuple(const std::string& key) {
    Tuple x = has(key) ? read_tuple(in_.at(key)) : require<Tuple>(key, std::nullopt);
    used_[key] = to_json(x);
    return x;
  }

  TupleSet tuple_set(const std::string& key, std::optional<TupleSet> def = {}) {
    TupleSet A = has(key) ? read_tuple_set(in_.at(key)) : require(key, def);
    used_[key] = to_json(A);
    return A;
  }

  IndexSet index_set(const std::string& key, std::optional<IndexSet> def = {}) {
    IndexSet E;
    if (!has(key)) {
      E = require(key, def);
    } else {
      const json& j = in_.at(key);
      if (j.is_string()) {
        E = parse_index_set(j.get<std::string>());
      } else if (j.is_array()) {
        std::vector<Nat> xs;
        for (const auto& v : j) {
          if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
            throw ParseError("parameter '" + key + "' expects naturals");
          xs.push_back(v.get<Nat>());
        }
        E = IndexSet(std::move(xs));
      } else {
        throw ParseError("parameter '" + key + "' expects a set of naturals");
      }
    }
    used_[key] = to_json(E);
    return E;
  }

  ScalarMap scalar_map(const std::string& key) {
    if (!has(key)) require<int>(key, std::nullopt);
    const json& j = in_.at(key);
    ScalarMap f = j.is_string() ? parse_scalar_map(j.get<std::string>()) : scalar_map_from_json(j);
    used_[key] = to_json(f);
    return f;
  }

  TupleMap tuple_map(const std::string& key) {
    if (!has(key)) require<int>(key, std::nullopt);
    const json& j = in_.at(key);
    TupleMap f = tuple_map_from_json(j.is_string() ? parse_json(j.get<std::string>()) : j);
    used_[key] = to_json(f);
    return f;
  }

  BefFormula bef(const std::string& key) {
    BefFormula B = parse_bef(text(key));
    used_[key] = to_string(B);
    return B;
  }

  /// A JSON list of BEF strings, or one string with formulas separated by ';'.
  std::vector<BefFormula> befs(const std::string& key) {
    if (!has(key)) require<int>(key, std::nullopt);
    const json& j = in_.at(key);
    std::vector<std::string> parts;
    if (j.is_string()) {
      std::stringstream ss(j.get<std::string>());
      std::string part;
      while (std::getline(ss, part, ';'))
        if (part.find_first_not_of(" \t\n") != std::string::npos) parts.push_back(part);
    } else if (j.is_array()) {
      for (const auto& s : j) {
        if (!s.is_string()) throw ParseError("parameter '" + key + "' expects BEF strings");
        parts.push_back(s.get<std::string>());
      }
    } else {
      throw ParseError("parameter '" + key + "' expects BEF text");
    }
    std::vector<BefFormula> out;
    json rec = json::array();
    for (const auto& s : parts) {
      out.push_back(parse_bef(s));
      rec.push_back(to_string(out.back()));
    }
    used_[key] = rec;
    return out;
  }

  json raw(const std::string& key) {
    if (!has(key)) require<int>(key, std::nullopt);
    json j = in_.at(key);
    if (j.is_string()) j = parse_json(j.get<std::string>());
    used_[key] = j;
    return j;
  }

  Dfnl dfnl(const std::string& key, std::size_t k) {
    const std::string s = text(key, "min-field");
    Dfnl H = parse_dfnl(s, k);
    used_[key] = dfnl_text(H);
    return H;
  }

  /// "assignment" (a full description), else builtin + ground (or n, k).
  FunctionAssignment assignment() {
    if (has("assignment")) {
      json j = in_.at("assignment");
      if (j.is_string()) j = parse_json(j.get<std::string>());
      FunctionAssignment U = assignment_from_json(j);
      used_["assignment"] = j;
      return U;
    }
    TupleSet ground;
    if (has("ground")) {
      ground = tuple_set("ground");
    } else {
      const Nat n = nat("n", 3);
      const Nat k = nat("k", 1);
      ground = cube(n, k);
    }
    if (ground.empty()) throw ParseError("the ground must not be empty");
    const std::string b = text("builtin", "identity");
    if (b == "identity") return FunctionAssignment::identity(ground);
    if (b == "min-collapse") return FunctionAssignment::min_collapse(ground);
    if (b == "dfnl-derived") return lemma_5_2_assignment(dfnl("dfnl", ground.arity()), ground);
    throw ParseError("unknown builtin '" + b + "'");
  }

  static json parse_json(const std::string& s) {
    try {
      return json::parse(s);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what());
    }
  }

private:
  template <class T>
  T require(const std::string& key, const std::optional<T>& def) {
    if (!def) throw ParseError("missing required parameter '" + key + "'");
    return *def;
  }

  static Tuple read_tuple(const json& j) {
    if (j.is_array()) return tuple_from_json(j);
    if (regressia::detail::is_nat(j)) return scalar(j.get<Nat>());
    if (!j.is_string()) throw ParseError("expected a tuple");
    detail::LiteralReader r(j.get<std::string>());
    Tuple x = r.tuple();
    if (!r.done()) r.fail("trailing input after tuple");
    return x;
  }

  static TupleSet read_tuple_set(const json& j) {
    if (j.is_string()) return parse_tuple_set(j.get<std::string>());
    if (j.is_array() && !j.empty() && j.front().is_number()) {
      json wrapped = json::array();
      for (const auto& v : j) wrapped.push_back(json::array({v}));
      return tuple_set_from_json(wrapped);
    }
    return tuple_set_from_json(j);
  }

  json in_;
  json used_ = json::object();
};

namespace detail {

inline StrictOrder order_named(const std::string& s) {
  if (s == "sup") return StrictOrder::sup_norm();
  if (s == "lex") return StrictOrder::lexicographic();
  throw ParseError("unknown order '" + s + "' (expected sup or lex)");
}

inline json counterexample_json(const std::optional<Counterexample>& c) {
  if (!c) return nullptr;
  json j{{"A", to_json(c->A)}};
  j["x"] = c->x ? to_json(*c->x) : json(nullptr);
  j["B"] = c->B ? to_json(*c->B) : json(nullptr);
  j["details"] = c->details;
  return j;
}

inline json verdict_json(const PropertyVerdict& v) {
  return json{{"holds", v.holds}, {"checked", v.checked}, {"counterexample", counterexample_json(v.counterexample)}};
}

inline json system_verdict_json(const SystemVerdict& v) {
  json j{{"holds", v.holds}};
  if (!v.holds) {
    json args = json::array();
    for (const auto& a : v.args) args.push_back(to_json(a));
    j["counterexample"] = json{{"clause", v.clause},
                               {"formula", v.formula ? json(*v.formula) : json(nullptr)},
                               {"args", args},
                               {"details", v.details}};
  }
  return j;
}

// Arity-1 sets print bare: {0,2} rather than {(0),(2)}.
inline std::string set_text(const TupleSet& A) {
  if (A.empty() || A.arity() != 1) return A.str();
  std::string s = "{";
  for (std::size_t i = 0; i < A.size(); ++i) s += (i ? "," : "") + std::to_string(A[i][0]);
  return s + "}";
}

inline std::string map_text(const ScalarMap& f) {
  std::string s;
  for (const auto& [x, v] : f) s += (s.empty() ? "" : " ") + (x.arity() == 1 ? std::to_string(x[0]) : x.str()) + ":" + std::to_string(v);
  return s.empty() ? "(empty)" : s;
}

inline std::string verdict_text(const std::string& what, const PropertyVerdict& v) {
  std::string s = what + ": " + (v.holds ? "holds" : "fails") + " (" + std::to_string(v.checked) + " checked)";
  if (v.counterexample) s += "\ncounterexample: " + v.counterexample->details;
  return s;
}

inline std::string search_text(const SearchReport& r) {
  std::string s;
  if (r.E) {
    s = "witness " + (r.A ? "A = " + r.A->str() + ", " : std::string()) + "E = " + r.E->str() + ", count " + std::to_string(r.count) + " <= target " +
        std::to_string(r.target) + (r.verified ? " (verified)" : " (NOT verified)");
  } else {
    s = "no witness within budget";
    if (r.best_count) s += "; best count " + std::to_string(*r.best_count) + " vs target " + std::to_string(r.target);
  }
  s += "\nexplored " + std::to_string(r.explored) + (r.vacuous ? ", vacuous target" : "");
  return s;
}

inline int search_status(const SearchReport& r) {
  if (r.E && !r.verified) return property_failure;
  if (!r.E || r.inconclusive) return inconclusive;
  return ok;
}

inline SearchBudget budget_of(const RunOptions& o) { return SearchBudget{o.max_candidates, o.strategy, o.seed, o.jobs}; }

// Random table assignment; `lowering` keeps images at or below their argument
// in sup-norm, which makes decreasing tables common.
inline FunctionAssignment random_table(Rng& rng, const TupleSet& ground, bool lowering) {
  AssignmentTable t;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << ground.size()); ++m) {
    TupleSet A = ground.select(m);
    std::vector<Tuple> img;
    for (const auto& x : A) {
      if (!lowering) {
        img.push_back(A[rng.below(A.size())]);
        continue;
      }
      std::vector<Tuple> low;
      for (const auto& y : A)
        if (y.sup() <= x.sup()) low.push_back(y);
      img.push_back(rng.below(3) == 0 ? x : low[rng.below(low.size())]);
    }
    t.emplace(A, Endomorphism(A, std::move(img)));
  }
  return FunctionAssignment::from_table(ground, std::move(t));
}

inline TupleSet random_ground(Rng& rng, std::size_t k, Nat n, std::size_t size) {
  const TupleSet all = cube(n, k);
  std::vector<Tuple> pool = all.vec();
  std::vector<Tuple> pick;
  for (std::size_t i = 0; i < size && i < pool.size(); ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
    pick.push_back(pool[i]);
  }
  return TupleSet(std::move(pick));
}

// Subsets A with |fld(A)| <= p, tabulated, when the ground is small.
inline json partial_table(const FunctionAssignment& V, std::size_t p, std::size_t max_ground = 10) {
  if (V.ground().size() > max_ground) return nullptr;
  json rows = json::array();
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << V.ground().size()); ++m) {
    const TupleSet A = V.ground().select(m);
    if (A.field().size() > p) continue;
    rows.push_back(json{{"subset", to_json(A)}, {"graph", to_json(V(A).graph())}});
  }
  return rows;
}

}  // namespace detail

// ---- commands ----

inline Outcome run_ot(Args& a, const RunOptions& o) {
  const Nat k = a.nat("k");
  const std::uint64_t v = ot(k, o.caps);
  return {json{{"statement", "ot"}, {"value", v}}, ok, std::to_string(v)};
}

inline Outcome run_order_type(Args& a, const RunOptions&) {
  const Tuple x = a.tuple("tuple");
  const OrderTypeCode c = order_type(x);
  const Tuple pattern(c.pattern);
  return {json{{"statement", "order-type"}, {"pattern", to_json(pattern)}}, ok, pattern.str()};
}

inline Outcome run_regressive_values(Args& a, const RunOptions&) {
  TupleSet values;
  if (a.has("example") || !a.has("F")) {
    const std::string ex = a.text("example", "intro");
    if (ex != "intro") throw ParseError("unknown example '" + ex + "'");
    // F(x, y) = (x - y)^2 on {2^0, ..., 2^10}^2.
    std::vector<Nat> E;
    for (int i = 0; i <= 10; ++i) E.push_back(Nat{1} << i);
    const TupleSet B = power(std::span<const Nat>(E), 2);
    TupleMap F;
    for (const auto& x : B) {
      const Nat d = x[0] > x[1] ? x[0] - x[1] : x[1] - x[0];
      F.emplace(x, scalar(d * d));
    }
    values = regressive_values(F, B);
  } else {
    const TupleMap F = a.tuple_map("F");
    TupleSet B;
    if (a.has("B")) {
      B = a.tuple_set("B");
    } else {
      std::vector<Tuple> keys;
      for (const auto& kv : F) keys.push_back(kv.first);
      B = TupleSet(std::move(keys));
    }
    values = regressive_values(F, B);
  }
  return {json{{"statement", "regressive-values"}, {"values", to_json(values)}, {"count", values.size()}}, ok,
          detail::set_text(values)};
}

inline Outcome run_check_assignment(Args& a, const RunOptions& o) {
  const FunctionAssignment U = a.assignment();
  const std::string prop = a.text("prop", "sharp");
  const StrictOrder o1 = detail::order_named(a.text("order1", "sup"));
  const Nat sample = a.nat("sample", 0);
  PropertyVerdict v;
  if (prop == "sharp") {
    const StrictOrder o2 = detail::order_named(a.text("order2", "sup"));
    std::optional<InsertionScope> scope;
    if (sample) scope = sample_insertion_scope(U.ground(), sample, o.seed);
    v = check_sharp_decreasing(U, o1, o2, scope, o.caps);
  } else if (prop == "star") {
    const StrictOrder o2 = detail::order_named(a.text("order2", "sup"));
    std::optional<PairScope> scope;
    if (sample) scope = sample_pair_scope(U.ground(), sample, o.seed);
    v = check_star_decreasing(U, o1, o2, scope, o.caps);
  } else if (prop == "end") {
    std::optional<PairScope> scope;
    if (sample) scope = sample_pair_scope(U.ground(), sample, o.seed);
    v = check_end_preserving(U, o1, scope, o.caps);
  } else {
    throw ParseError("unknown property '" + prop + "' (expected sharp, star or end)");
  }
  json r{{"statement", prop == "end" ? "end-preserving" : prop + "-decreasing"}, {"verdict", detail::verdict_json(v)}};
  return {r, v.holds ? ok : property_failure, detail::verdict_text(prop, v)};
}

inline Outcome run_audit_3_10(Args& a, const RunOptions& o) {
  const Nat tables = a.nat("tables", 1000);
  const Nat max_ground = a.nat("max-ground", 5);
  if (max_ground == 0 || max_ground > o.caps.assignment_scope)
    throw ParseError("max-ground must lie in [1, assignment_scope]");
  Rng rng(o.seed);
  const std::vector<std::string> names = {"sup", "lex"};
  std::uint64_t checks = 0, agree = 0, sharp_holds = 0, end_ok = 0;
  json first_disagreement = nullptr, first_end_failure = nullptr;
  for (Nat i = 0; i < tables; ++i) {
    const std::size_t k = 1 + rng.below(2);
    const TupleSet g = detail::random_ground(rng, k, k == 1 ? 8 : 3, 1 + rng.below(max_ground));
    const bool lowering = rng.coin();
    const FunctionAssignment U = detail::random_table(rng, g, lowering);
    for (const auto& n1 : names)
      for (const auto& n2 : names) {
        const StrictOrder o1 = detail::order_named(n1), o2 = detail::order_named(n2);
        const auto sharp = check_sharp_decreasing(U, o1, o2, std::nullopt, o.caps);
        const auto star = check_star_decreasing(U, o1, o2, std::nullopt, o.caps);
        ++checks;
        const json where{{"table", i}, {"order1", n1}, {"order2", n2}, {"assignment", assignment_to_json(U)}};
        if (sharp.holds == star.holds) {
          ++agree;
        } else if (first_disagreement.is_null()) {
          first_disagreement = where;
          first_disagreement["sharp"] = detail::verdict_json(sharp);
          first_disagreement["star"] = detail::verdict_json(star);
        }
        if (sharp.holds) {
          ++sharp_holds;
          const auto end = check_end_preserving(U, o1, std::nullopt, o.caps);
          if (end.holds) {
            ++end_ok;
          } else if (first_end_failure.is_null()) {
            first_end_failure = where;
            first_end_failure["end"] = detail::verdict_json(end);
          }
        }
      }
  }
  const bool good = agree == checks && end_ok == sharp_holds;
  json r{{"statement", "audit-3-10"},
         {"tables", tables},
         {"checks", checks},
         {"agree", agree},
         {"sharp_holds", sharp_holds},
         {"end_preserving", end_ok},
         {"holds", good},
         {"first_disagreement", first_disagreement},
         {"first_end_failure", first_end_failure}};
  std::string text = "sharp/star agreement " + std::to_string(agree) + "/" + std::to_string(checks) +
                     "; sharp => end-preserving " + std::to_string(end_ok) + "/" + std::to_string(sharp_holds);
  return {r, good ? ok : property_failure, text};
}

inline Outcome run_lex_lift(Args& a, const RunOptions& o) {
  const FunctionAssignment U = a.assignment();
  std::vector<Tuple> extra;
  if (a.has("extra")) extra = a.tuple_set("extra").vec();
  const FunctionAssignment V = lex_lift(U, extra);
  const StrictOrder sup = StrictOrder::sup_norm(), lex = StrictOrder::lexicographic();
  const auto src = check_sharp_decreasing(U, sup, sup, std::nullopt, o.caps);
  const auto lifted = check_sharp_decreasing(V, lex, lex, std::nullopt, o.caps);

  // Regressive values of U(A') at w reappear, lifted, in V(lift A').
  const Nat samples = a.nat("samples", 256);
  const std::size_t n = U.ground().size();
  if (n > 62) throw BudgetError("ground too large for subset sampling");
  std::vector<std::uint64_t> masks;
  if (n <= 8) {
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) masks.push_back(m);
  } else {
    Rng rng(o.seed);
    for (Nat i = 0; i < samples; ++i) masks.push_back(1 + rng.below((std::uint64_t{1} << n) - 1));
  }
  std::uint64_t transfer_checked = 0, transfer_failures = 0;
  json first_failure = nullptr;
  for (auto m : masks) {
    const TupleSet Ap = U.ground().select(m);
    std::vector<Tuple> lifted_pts;
    for (const auto& x : Ap) lifted_pts.push_back(lift_point(x));
    const TupleSet A(std::move(lifted_pts));
    const Endomorphism u = U(Ap), v = V(A);
    for (const auto& w : Ap) {
      const Tuple& y = u.at(w);
      if (!is_regressive_at(w, y)) continue;
      ++transfer_checked;
      const Tuple& z = v.at(lift_point(w));
      if (z != lift_point(y) || !is_regressive_at(lift_point(w), z)) {
        ++transfer_failures;
        if (first_failure.is_null())
          first_failure = json{{"A", to_json(Ap)}, {"x", to_json(w)}, {"expected", to_json(lift_point(y))},
                               {"got", to_json(z)}};
      }
    }
  }
  const bool good = (!src.holds || lifted.holds) && transfer_failures == 0;
  json r{{"statement", "lex-lift"},
         {"source_sharp", detail::verdict_json(src)},
         {"lifted_lex_sharp", detail::verdict_json(lifted)},
         {"lifted_ground", to_json(V.ground())},
         {"transfer_checked", transfer_checked},
         {"transfer_failures", transfer_failures},
         {"first_transfer_failure", first_failure},
         {"holds", good}};
  std::string text = std::string("source #-decreasing: ") + (src.holds ? "yes" : "no") +
                     "; lift lex-#-decreasing: " + (lifted.holds ? "yes" : "no") + "; transfer " +
                     std::to_string(transfer_checked - transfer_failures) + "/" + std::to_string(transfer_checked);
  return {r, good ? ok : property_failure, text};
}

inline SetColoring coloring_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("coloring must be a list of [subset, color] pairs");
  SetColoring c;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_array() || !regressia::detail::is_nat(e[1]))
      throw ParseError("coloring entries must be [subset, color]");
    std::vector<Nat> s;
    for (const auto& v : e[0]) {
      if (!regressia::detail::is_nat(v)) throw ParseError("coloring subsets must hold naturals");
      s.push_back(v.get<Nat>());
    }
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw ParseError("coloring subset with repeated elements");
    if (!c.emplace(s, e[1].get<Nat>()).second) throw ParseError("coloring lists a subset twice");
  }
  return c;
}

inline json coloring_to_json(const SetColoring& c) {
  json j = json::array();
  for (const auto& [s, v] : c) j.push_back(json::array({s, v}));
  return j;
}

inline Outcome run_ramsey(Args& a, const RunOptions& o) {
  const std::string mode = a.text("mode", a.has("coloring") ? "given" : "all");
  const Nat k = a.nat("k", 2);
  const Nat p = a.nat("p", 3);
  if (mode == "all") {
    // Every coloring of S_k[n] in c colors has a homogeneous p-set?
    const Nat n = a.nat("n", 6);
    const Nat colors = a.nat("colors", 2);
    if (k == 0 || colors == 0) throw ParseError("k and colors must be positive");
    std::vector<std::vector<Nat>> subsets;
    for (const auto& S : subsets_of_size(std::span<const Nat>(IndexSet::range(n).vec()), k)) subsets.push_back(S.vec());
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      if (total > o.max_candidates / colors + 1) throw BudgetError("coloring space exceeds max_candidates");
      total *= colors;
    }
    if (total > o.max_candidates) throw BudgetError("coloring space exceeds max_candidates");
    const IndexSet E = IndexSet::range(n);
    std::uint64_t explored = 0;
    json counterexample = nullptr;
    std::vector<Nat> digits(subsets.size(), 0);
    for (std::uint64_t code = 0; code < total; ++code) {
      std::uint64_t c = code;
      for (auto& d : digits) {
        d = c % colors;
        c /= colors;
      }
      SetColoring col;
      for (std::size_t i = 0; i < subsets.size(); ++i) col.emplace(subsets[i], digits[i]);
      const RamseyResult res = ramsey_homogeneous(col, E, k, p, o.caps);
      explored += res.explored;
      if (!res.subset) {
        if (!res.complete) throw BudgetError("homogeneous search was not exhaustive");
        counterexample = coloring_to_json(col);
        break;
      }
    }
    const bool holds = counterexample.is_null();
    json r{{"statement", "ramsey"}, {"colorings", total}, {"holds", holds},
           {"counterexample", counterexample}, {"explored", explored}};
    std::string text = holds ? "every " + std::to_string(colors) + "-coloring of S" + std::to_string(k) + "[" +
                                   std::to_string(n) + "] has a homogeneous " + std::to_string(p) + "-set (" +
                                   std::to_string(total) + " colorings)"
                             : "some coloring has no homogeneous " + std::to_string(p) + "-set";
    return {r, holds ? ok : property_failure, text};
  }
  SetColoring col;
  IndexSet E;
  if (mode == "given") {
    col = coloring_from_json(a.raw("coloring"));
    std::vector<Nat> fld;
    for (const auto& [s, v] : col) fld.insert(fld.end(), s.begin(), s.end());
    E = a.index_set("E", IndexSet(std::move(fld)));
  } else if (mode == "random") {
    E = a.index_set("E", IndexSet::range(a.nat("n", 8)));
    const Nat colors = a.nat("colors", 2);
    Rng rng(o.seed);
    for (const auto& S : subsets_of_size(std::span<const Nat>(E.vec()), k)) col.emplace(S.vec(), rng.below(colors));
  } else {
    throw ParseError("unknown ramsey mode '" + mode + "'");
  }
  const RamseyResult res = ramsey_homogeneous(col, E, k, p, o.caps);
  json r{{"statement", "ramsey"},
         {"subset", res.subset ? to_json(*res.subset) : json(nullptr)},
         {"complete", res.complete},
         {"explored", res.explored}};
  if (mode == "random") r["coloring"] = coloring_to_json(col);
  if (res.subset) return {r, ok, "homogeneous set " + res.subset->str()};
  return {r, res.complete ? property_failure : inconclusive,
          res.complete ? "no homogeneous set" : "no homogeneous set found (greedy, inconclusive)"};
}

inline Outcome search_outcome(const SearchReport& rep) {
  json r = report_to_json(rep);
  return {r, detail::search_status(rep), detail::search_text(rep)};
}

/// F for search-04: explicit map, a seeded random table, or the truncated
/// squared difference.
inline TupleMap search04_function(Args& a, const RunOptions& o, Nat n, std::size_t k) {
  if (a.has("F")) return a.tuple_map("F");
  const std::string kind = a.text("function", "random");
  const TupleSet dom = cube(n, k);
  if (dom.size() > o.caps.closure_size) throw BudgetError("[n]^k exceeds closure_size");
  TupleMap F;
  if (kind == "random") {
    const Nat r = a.nat("r", 1);
    Rng rng(o.seed);
    for (const auto& x : dom) {
      std::vector<Nat> v;
      for (Nat i = 0; i < r; ++i) v.push_back(rng.below(n));
      F.emplace(x, Tuple(std::move(v)));
    }
  } else if (kind == "square-difference") {
    for (const auto& x : dom) {
      const Nat lo = x.min(), hi = x.sup();
      F.emplace(x, scalar(std::min<Nat>((hi - lo) * (hi - lo), n - 1)));
    }
  } else if (kind == "min") {
    for (const auto& x : dom) F.emplace(x, scalar(x.min()));
  } else {
    throw ParseError("unknown function '" + kind + "'");
  }
  return F;
}

inline Outcome run_search_04(Args& a, const RunOptions& o) {
  const Nat n = a.nat("n", 8);
  const Nat k = a.nat("k", 2);
  const Nat p = a.nat("p", 3);
  const TupleMap F = search04_function(a, o, n, k);
  return search_outcome(find_witness_04(F, n, k, p, detail::budget_of(o), o.caps));
}

inline Outcome run_search_A(Args& a, const RunOptions& o) {
  const FunctionAssignment U = a.assignment();
  const Nat p = a.nat("p", 2);
  const std::string fam = a.text("family", "products");
  CandidateFamily family;
  if (fam == "products") family = CandidateFamily::products;
  else if (fam == "all-subsets") family = CandidateFamily::all_subsets;
  else throw ParseError("unknown family '" + fam + "'");
  return search_outcome(find_witness_A(U, p, detail::budget_of(o), family, o.caps));
}

inline Outcome run_threshold_H(Args& a, const RunOptions& o) {
  const ThresholdStatement st = parse_threshold_statement(a.text("target", "0.4"));
  const Nat k = a.nat("k", 1), r = a.nat("r", 1), p = a.nat("p", 2), n_max = a.nat("n-max", 4);
  const ThresholdResult t = threshold_H(st, k, r, p, n_max, o.caps, o.jobs);
  json j = threshold_to_json(t);
  std::string text;
  for (const auto& row : t.rows)
    text += "n=" + std::to_string(row.n) + " functions=" + std::to_string(row.functions) + " " +
            (row.holds ? "holds" : "fails") + "\n";
  text += t.threshold ? "threshold " + std::to_string(*t.threshold) : "no threshold up to n_max";
  return {j, t.threshold ? ok : inconclusive, text};
}

inline Outcome run_uniformize(Args& a, const RunOptions& o) {
  const FunctionAssignment U = a.assignment();
  const Nat p = a.nat("p", 1), m = a.nat("m", 2);
  const UniformizeResult res = uniformize(U, p, m, o.caps);
  json r{{"statement", "uniformize"}, {"E", res.E ? to_json(*res.E) : json(nullptr)}, {"explored", res.explored}};
  if (!res.V) return {r, inconclusive, "no p-uniform set of size m"};
  r["V"] = detail::partial_table(*res.V, p);
  return {r, ok, "uniform on " + res.E->str()};
}

inline Outcome run_transfer(Args& a, const RunOptions&) {
  const FunctionAssignment U = a.assignment();
  const Nat p = a.nat("p", 1), m = a.nat("m", 3);
  const PropertyVerdict inv = is_order_invariant(U, p);
  json r{{"statement", "transfer"}, {"invariant", detail::verdict_json(inv)}};
  if (!inv.holds) return {r, property_failure, detail::verdict_text("order invariance", inv)};
  const FunctionAssignment V = transfer(U, p, m);
  r["ground"] = to_json(V.ground());
  r["V"] = detail::partial_table(V, p);
  return {r, ok, "transferred onto " + detail::set_text(V.ground())};
}

inline Outcome run_complete(Args& a, const RunOptions& o) {
  const FunctionAssignment U = a.assignment();
  const auto g1 = direct_completion_greedy(U, Tiebreak::lex_least, LevelOrder::ascending, o.caps);
  const auto g2 = direct_completion_greedy(U, Tiebreak::lex_greatest, LevelOrder::descending, o.caps);
  const bool agree = g1.f && g2.f && *g1.f == *g2.f;
  json r{{"statement", "complete"},
         {"f", g1.f ? to_json(g1.f->graph()) : json(nullptr)},
         {"matches_direct", g1.matches_direct},
         {"tiebreaks_agree", agree},
         {"special_ok", g1.special_ok && g2.special_ok},
         {"steps", g1.steps},
         {"diagnosis", g1.diagnosis}};
  bool good = g1.matches_direct && agree;
  if (g1.f && a.flag("check-completion", U.ground().size() <= o.caps.completion_points)) {
    const CompletionVerdict cv = is_completion(*g1.f, U, o.caps);
    r["completion"] = json{{"holds", cv.holds},
                           {"uncovered", cv.uncovered ? to_json(*cv.uncovered) : json(nullptr)},
                           {"whole_set_agrees", cv.whole_set_agrees},
                           {"shapes", cv.shapes}};
    good = good && cv.holds;
  }
  std::string text = g1.f ? "f = " + g1.f->str() : "greedy stalled";
  text += std::string("\nmatches U(X^k): ") + (g1.matches_direct ? "yes" : "no") +
          "; tiebreak invariant: " + (agree ? "yes" : "no");
  for (const auto& d : g1.diagnosis) text += "\n" + d;
  return {r, good ? ok : property_failure, text};
}

inline Outcome run_rcn(Args& a, const RunOptions&) {
  const TupleSet A = a.tuple_set("A");
  if (A.empty()) throw ParseError("A must not be empty");
  const Dfnl H = a.dfnl("dfnl", A.arity());
  const std::string mode = a.text("mode", "rcn");
  ScalarMap f;
  if (mode == "rcn") f = rcn(A, H);
  else if (mode == "mrcn") f = mrcn(A, H);
  else throw ParseError("unknown mode '" + mode + "' (expected rcn or mrcn)");
  return {json{{"statement", mode}, {"f", to_json(f)}}, ok, detail::map_text(f)};
}

inline Outcome run_df(Args& a, const RunOptions&) {
  const BefFormula B = a.bef("bef");
  const TupleSet A = a.tuple_set("A");
  const ScalarMap f = df(B, A);
  const FixpointVerdict fx = validate_df_fixpoint(B, A, f);
  const ScalarMap g = rcn(A, dfnl_from_bef(B));
  json r{{"statement", "df"},
         {"f", to_json(f)},
         {"fixpoint", json{{"holds", fx.holds}, {"x", fx.x ? to_json(*fx.x) : json(nullptr)}, {"details", fx.details}}},
         {"equals_rcn", f == g}};
  std::string text = detail::map_text(f);
  if (!fx.holds) text += "\nfixpoint fails: " + fx.details;
  if (f != g) text += "\ndiffers from rcn: " + detail::map_text(g);
  return {r, fx.holds && f == g ? ok : property_failure, text};
}

inline Outcome run_bef_eval(Args& a, const RunOptions&) {
  const BefFormula B = a.bef("bef");
  const ScalarMap f = a.has("f") ? a.scalar_map("f") : ScalarMap{};
  const std::vector<Nat> args = a.tuple("args").vec();
  const bool v = eval_bef(B, f, std::span<const Nat>(args));
  return {json{{"statement", "bef-eval"}, {"value", v}}, ok, v ? "true" : "false"};
}

inline Outcome run_check_regular(Args& a, const RunOptions&) {
  const ScalarMap f = a.scalar_map("f");
  const IndexSet E = a.index_set("E");
  json r{{"statement", "regular"}};
  if (a.has("formulas")) {
    const auto formulas = a.befs("formulas");
    const Nat t = a.nat("t", 1);
    const SystemVerdict v = tr_regular_check(E, f, formulas, t);
    r["statement"] = "tr-regular";
    r["verdict"] = detail::system_verdict_json(v);
    return {r, v.holds ? ok : property_failure,
            v.holds ? "holds" : "fails at clause " + v.clause + ": " + v.details};
  }
  const RegularityVerdict v = is_regressively_regular(f, E);
  json vj{{"holds", v.holds}};
  if (!v.holds)
    vj["counterexample"] = json{{"clause", v.clause},
                                {"x", v.x ? to_json(*v.x) : json(nullptr)},
                                {"y", v.y ? to_json(*v.y) : json(nullptr)},
                                {"details", v.details}};
  r["verdict"] = vj;
  return {r, v.holds ? ok : property_failure, v.holds ? "holds" : "fails at clause " + v.clause + ": " + v.details};
}

inline Outcome run_search_regular(Args& a, const RunOptions& o) {
  const Nat p = a.nat("p", 2);
  const Nat n_max = a.nat("n-max", 5);
  SearchReport rep;
  if (a.has("bef")) {
    rep = search_regular(a.bef("bef"), p, n_max, detail::budget_of(o));
  } else {
    const Nat k = a.nat("k", 1);
    rep = search_regular(a.dfnl("dfnl", k), p, n_max, detail::budget_of(o));
  }
  return search_outcome(rep);
}

inline Outcome run_soi_check(Args& a, const RunOptions&) {
  const ScalarMap f = a.scalar_map("f");
  const IndexSet E = a.index_set("E");
  const auto formulas = a.befs("formulas");
  const Nat t = a.nat("t", 1);
  const SystemVerdict v = soi_check(E, f, formulas, t);
  json r{{"statement", "soi"}, {"verdict", detail::system_verdict_json(v)}};
  return {r, v.holds ? ok : property_failure, v.holds ? "holds" : "fails at clause " + v.clause + ": " + v.details};
}

using Handler = std::function<Outcome(Args&, const RunOptions&)>;

inline const std::map<std::string, Handler>& commands() {
  static const std::map<std::string, Handler> table = {
      {"ot", run_ot},
      {"order-type", run_order_type},
      {"regressive-values", run_regressive_values},
      {"check-assignment", run_check_assignment},
      {"audit-3-10", run_audit_3_10},
      {"lex-lift", run_lex_lift},
      {"ramsey", run_ramsey},
      {"search-04", run_search_04},
      {"search-A", run_search_A},
      {"threshold-H", run_threshold_H},
      {"uniformize", run_uniformize},
      {"transfer", run_transfer},
      {"complete", run_complete},
      {"rcn", run_rcn},
      {"df", run_df},
      {"bef-eval", run_bef_eval},
      {"check-regular", run_check_regular},
      {"search-regular", run_search_regular},
      {"soi-check", run_soi_check},
  };
  return table;
}

/// Runs a command and wraps its result into the full report:
/// {version, command, statement, seed, budget, caps, params, ...}.
inline Outcome run(const std::string& command, const json& params, const RunOptions& o) {
  auto it = commands().find(command);
  if (it == commands().end()) throw ParseError("unknown command '" + command + "'");
  Args a(params);
  Outcome out = it->second(a, o);
  json r;
  r["version"] = kVersion;
  r["command"] = command;
  r["statement"] = out.report.value("statement", command);
  r["seed"] = o.seed;
  r["budget"] = json{{"strategy", to_string(o.strategy)}, {"max_candidates", o.max_candidates}};
  r["caps"] = to_json(o.caps);
  r["params"] = a.used();
  for (auto& [k, v] : out.report.items())
    if (!r.contains(k)) r[k] = v;
  out.report = std::move(r);
  return out;
}

/// Run options recorded in a report, for re-running it.
inline RunOptions options_from_report(const json& r) {
  RunOptions o;
  if (r.contains("seed")) o.seed = r.at("seed").get<std::uint64_t>();
  if (r.contains("caps")) o.caps = caps_from_json(r.at("caps"));
  if (r.contains("budget")) {
    const json& b = r.at("budget");
    if (b.contains("strategy")) o.strategy = parse_strategy(b.at("strategy").get<std::string>());
    if (b.contains("max_candidates")) o.max_candidates = b.at("max_candidates").get<std::uint64_t>();
  }
  return o;
}

inline std::string csv_cell(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

/// Reports with a "rows" array emit one line per row; others emit key,value.
inline std::string to_csv(const json& r) {
  std::string out;
  if (r.contains("rows") && r.at("rows").is_array() && !r.at("rows").empty() && r.at("rows").front().is_object()) {
    const json& rows = r.at("rows");
    std::vector<std::string> keys;
    for (const auto& [k, v] : rows.front().items()) keys.push_back(k);
    for (std::size_t i = 0; i < keys.size(); ++i) out += (i ? "," : "") + keys[i];
    out += "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < keys.size(); ++i) out += (i ? "," : "") + csv_cell(row.value(keys[i], json(nullptr)));
      out += "\n";
    }
    return out;
  }
  out = "key,value\n";
  for (const auto& [k, v] : r.items()) out += csv_cell(k) + "," + csv_cell(v) + "\n";
  return out;
}

}  // namespace regressia::cmd
