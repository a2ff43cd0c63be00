#pragma once

#include <cctype>
#include <string>
#include <vector>

#include <json.hpp>

#include "regressia/dfnl.hpp"
#include "regressia/search.hpp"
#include "regressia/threshold.hpp"

namespace regressia {

using json = nlohmann::ordered_json;

namespace detail {
// Non-negative integers, whether the parser stored them signed or not.
inline bool is_nat(const json& j) { return j.is_number_integer() && (j.is_number_unsigned() || j.get<std::int64_t>() >= 0); }
}  // namespace detail

inline constexpr const char* kVersion = "0.1.0";

inline json to_json(const Tuple& x) { return json(x.vec()); }

inline json to_json(const TupleSet& A) {
  json out = json::array();
  for (const auto& x : A) out.push_back(to_json(x));
  return out;
}

inline json to_json(const IndexSet& E) { return json(E.vec()); }

inline json to_json(const TupleMap& f) {
  json out = json::array();
  for (const auto& [x, y] : f) out.push_back(json::array({to_json(x), to_json(y)}));
  return out;
}

inline json to_json(const ScalarMap& f) {
  json out = json::array();
  for (const auto& [x, v] : f) out.push_back(json::array({to_json(x), v}));
  return out;
}

inline json to_json(const Caps& c) {
  return json{{"max_arity", c.max_arity},
              {"ramsey_exhaustive_size", c.ramsey_exhaustive_size},
              {"ramsey_exhaustive_arity", c.ramsey_exhaustive_arity},
              {"assignment_scope", c.assignment_scope},
              {"greedy_domain", c.greedy_domain},
              {"completion_points", c.completion_points},
              {"closure_size", c.closure_size},
              {"function_space", c.function_space},
              {"code_subsets", c.code_subsets}};
}

inline Tuple tuple_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected a tuple (array of naturals)");
  std::vector<Nat> out;
  for (const auto& c : j) {
    if (!detail::is_nat(c)) throw ParseError("tuple coordinates must be naturals");
    out.push_back(c.get<Nat>());
  }
  if (out.empty()) throw ParseError("tuples must have arity >= 1");
  return Tuple(std::move(out));
}

inline TupleSet tuple_set_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of tuples");
  std::vector<Tuple> out;
  for (const auto& x : j) out.push_back(tuple_from_json(x));
  try {
    return TupleSet(std::move(out));
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
}

inline ScalarMap scalar_map_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of [tuple, value] pairs");
  ScalarMap f;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !detail::is_nat(e[1]))
      throw ParseError("map entries are [tuple, natural]");
    if (!f.emplace(tuple_from_json(e[0]), e[1].get<Nat>()).second) throw ParseError("duplicate key in map");
  }
  return f;
}

inline TupleMap tuple_map_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of [tuple, tuple] pairs");
  TupleMap f;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw ParseError("map entries are [tuple, tuple]");
    if (!f.emplace(tuple_from_json(e[0]), tuple_from_json(e[1])).second) throw ParseError("duplicate key in map");
  }
  return f;
}

// ---- textual literals used on the command line ----

namespace detail {

class LiteralReader {
public:
  explicit LiteralReader(const std::string& s) : s_(s) {}

  void skip() {
    while (pos_ < s_.size() && (std::isspace(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == ',')) ++pos_;
  }
  bool done() {
    skip();
    return pos_ >= s_.size();
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  Nat number() {
    skip();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected a natural number");
    Nat v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + static_cast<Nat>(s_[pos_] - '0');
      ++pos_;
    }
    return v;
  }
  // "(a, b, c)" or a bare natural (a 1-tuple).
  Tuple tuple() {
    if (peek() != '(') return scalar(number());
    ++pos_;
    std::vector<Nat> cs;
    while (peek() != ')') {
      if (done()) fail("unterminated tuple");
      cs.push_back(number());
    }
    ++pos_;
    if (cs.empty()) fail("empty tuple");
    return Tuple(std::move(cs));
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, 1, pos_ + 1); }

  std::size_t pos_ = 0;

private:
  const std::string& s_;
};

}  // namespace detail

/// "{(0,1), (2,3)}", "(0,1) (2,3)" or "0 2 5" (1-tuples).
inline TupleSet parse_tuple_set(const std::string& text) {
  detail::LiteralReader r(text);
  const bool braced = r.peek() == '{';
  if (braced) r.expect('{');
  std::vector<Tuple> out;
  while (!r.done() && r.peek() != '}') out.push_back(r.tuple());
  if (braced) r.expect('}');
  if (!r.done()) r.fail("trailing input");
  try {
    return TupleSet(std::move(out));
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
}

/// Naturals separated by spaces or commas, optionally braced.
inline IndexSet parse_index_set(const std::string& text) {
  detail::LiteralReader r(text);
  const bool braced = r.peek() == '{';
  if (braced) r.expect('{');
  std::vector<Nat> out;
  while (!r.done() && r.peek() != '}') out.push_back(r.number());
  if (braced) r.expect('}');
  if (!r.done()) r.fail("trailing input");
  return IndexSet(std::move(out));
}

/// "x:v" entries: "0:0, 2:0" or "(0,1):3 (1,1):0".
inline ScalarMap parse_scalar_map(const std::string& text) {
  detail::LiteralReader r(text);
  ScalarMap f;
  while (!r.done()) {
    Tuple x = r.tuple();
    r.expect(':');
    Nat v = r.number();
    if (!f.emplace(x, v).second) r.fail("duplicate key " + x.str());
  }
  if (!f.empty()) {
    const std::size_t k = f.begin()->first.arity();
    for (const auto& [x, v] : f)
      if (x.arity() != k) throw ParseError("mixed arities in map: " + x.str());
  }
  return f;
}

// ---- functionals and assignments ----

/// "min-field" or BEF text.
inline Dfnl parse_dfnl(const std::string& text, std::size_t k = 1) {
  if (text == "min-field") return Dfnl::min_field(k);
  return dfnl_from_bef(parse_bef(text));
}

inline std::string dfnl_text(const Dfnl& H) {
  if (H.kind == Dfnl::Kind::builtin_min_field) return "min-field";
  if (H.formula) return to_string(*H.formula);
  throw PreconditionError("custom functionals cannot be serialized");
}

inline json assignment_to_json(const FunctionAssignment& U) {
  if (U.kind() == FunctionAssignment::Kind::builtin && U.name() != "dfnl-derived")
    return json{{"kind", "builtin"}, {"arity", U.arity()}, {"ground", to_json(U.ground())}, {"builtin", U.name()}};
  if (U.kind() == FunctionAssignment::Kind::builtin) {
    return json{{"kind", "builtin"},
                {"arity", U.arity()},
                {"ground", to_json(U.ground())},
                {"builtin", U.name()},
                {"dfnl", U.parameter()}};
  }
  const FunctionAssignment T = U.table() ? U : tabulate(U);
  json table = json::array();
  for (const auto& [A, e] : *T.table()) {
    if (A.empty()) continue;
    json graph = json::array();
    for (std::size_t i = 0; i < e.carrier().size(); ++i)
      graph.push_back(json::array({to_json(e.carrier()[i]), to_json(e.image()[i])}));
    table.push_back(json{{"subset", to_json(A)}, {"graph", std::move(graph)}});
  }
  return json{{"kind", "table"}, {"arity", U.arity()}, {"ground", to_json(U.ground())}, {"table", std::move(table)}};
}

inline FunctionAssignment assignment_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("assignment must be an object");
  const std::string kind = j.value("kind", "");
  if (!j.contains("ground")) throw ParseError("assignment has no ground");
  const TupleSet ground = tuple_set_from_json(j.at("ground"));
  if (j.contains("arity") && (!detail::is_nat(j.at("arity")) || j.at("arity").get<std::size_t>() != ground.arity()))
    throw ParseError("declared arity does not match the ground");
  if (kind == "builtin") {
    const std::string name = j.value("builtin", "");
    if (name == "identity") return FunctionAssignment::identity(ground);
    if (name == "min-collapse") return FunctionAssignment::min_collapse(ground);
    if (name == "dfnl-derived") {
      if (!j.contains("dfnl") || !j.at("dfnl").is_string()) throw ParseError("dfnl-derived needs a dfnl string");
      return lemma_5_2_assignment(parse_dfnl(j.at("dfnl").get<std::string>(), ground.arity()), ground);
    }
    throw ParseError("unknown builtin '" + name + "'");
  }
  if (kind != "table") throw ParseError("assignment kind must be table or builtin");
  if (!j.contains("table") || !j.at("table").is_array()) throw ParseError("table assignment has no table");
  AssignmentTable table;
  for (const auto& entry : j.at("table")) {
    const TupleSet A = tuple_set_from_json(entry.at("subset"));
    TupleMap g = tuple_map_from_json(entry.at("graph"));
    try {
      table.emplace(A, Endomorphism::from_map(A, g));
    } catch (const Error& e) {
      throw ParseError(std::string("bad graph for ") + A.str() + ": " + e.what());
    }
  }
  try {
    return FunctionAssignment::from_table(ground, std::move(table));
  } catch (const MissingKeyError& e) {
    throw ParseError(e.what());
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
}

// ---- reports ----

inline json report_to_json(const SearchReport& r) {
  json j;
  j["statement"] = r.statement;
  j["params"] = r.params;
  if (r.E)
    j["witness"] = json{{"A", r.A ? to_json(*r.A) : json(nullptr)}, {"E", to_json(*r.E)}};
  else
    j["witness"] = nullptr;
  j["count"] = r.count;
  j["target"] = r.target;
  if (r.target_kk) j["target_kk"] = *r.target_kk;
  j["verified"] = r.verified;
  j["explored"] = r.explored;
  j["seed"] = r.seed;
  j["strategy"] = r.strategy;
  j["vacuous"] = r.vacuous;
  j["inconclusive"] = r.inconclusive;
  if (r.best_count) j["best_count"] = *r.best_count;
  return j;
}

inline json threshold_to_json(const ThresholdResult& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json jr{{"n", row.n}, {"functions", row.functions}, {"holds", row.holds}};
    jr["counterexample"] = row.counterexample ? to_json(*row.counterexample) : json(nullptr);
    rows.push_back(std::move(jr));
  }
  return json{{"statement", to_string(t.statement)},
              {"params", {{"k", t.k}, {"r", t.r}, {"p", t.p}, {"n_max", t.n_max}}},
              {"rows", std::move(rows)},
              {"threshold", t.threshold ? json(*t.threshold) : json(nullptr)}};
}

}  // namespace regressia
