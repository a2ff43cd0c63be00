#pragma once

#include <cctype>
#include <compare>
#include <span>
#include <string>
#include <vector>

#include "regressia/tuple.hpp"

namespace regressia {

/// x_i (argument), y_i (witness coordinate) or f_j (the function symbol on the
/// j-th r-block of y). Indices are 1-based.
struct BefTerm {
  enum class Kind { x, y, f } kind = Kind::x;
  std::size_t index = 1;

  friend bool operator==(const BefTerm&, const BefTerm&) = default;
};

enum class BefRel { less, equal, greater };

struct BefLiteral {
  bool negated = false;
  BefTerm lhs;
  BefRel rel = BefRel::less;
  BefTerm rhs;

  friend bool operator==(const BefLiteral&, const BefLiteral&) = default;
};

/// (∃y ∈ dom(f)^t)(|y| < |x| & D(x, y, f(y))) with D in disjunctive normal form.
struct BefFormula {
  std::size_t q = 1, t = 1, r = 1;
  std::vector<std::vector<BefLiteral>> dnf;

  friend bool operator==(const BefFormula&, const BefFormula&) = default;

  /// True when some negated literal mentions an f term.
  bool negates_f() const {
    for (const auto& conj : dnf)
      for (const auto& lit : conj)
        if (lit.negated && (lit.lhs.kind == BefTerm::Kind::f || lit.rhs.kind == BefTerm::Kind::f)) return true;
    return false;
  }
};

namespace detail {

class BefParser {
public:
  explicit BefParser(const std::string& text) : s_(text) {}

  BefFormula parse() {
    BefFormula B;
    expect_word("bef");
    B.q = header_value("q");
    B.t = header_value("t");
    B.r = header_value("r");
    if (B.q == 0 || B.t == 0 || B.r == 0) fail("q, t and r must be at least 1", hdr_line_, hdr_col_);
    expect(':');
    B_ = &B;
    B.dnf.push_back(conjunction());
    while (peek() == '|') {
      advance();
      B.dnf.push_back(conjunction());
    }
    skip_space();
    if (pos_ < s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return B;
  }

private:
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line_, col_); }
  [[noreturn]] void fail(const std::string& msg, std::size_t line, std::size_t col) {
    throw ParseError(msg, line, col);
  }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
  }

  char peek() {
    skip_space();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void expect(char c) {
    if (peek() != c) {
      if (pos_ >= s_.size()) fail(std::string("expected '") + c + "' but the input ended");
      fail(std::string("expected '") + c + "' but found '" + s_[pos_] + "'");
    }
    advance();
  }

  std::string word() {
    skip_space();
    std::string w;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
      w += s_[pos_];
      advance();
    }
    return w;
  }

  void expect_word(const std::string& w) {
    skip_space();
    const std::size_t l = line_, c = col_;
    if (word() != w) fail("expected '" + w + "'", l, c);
  }

  std::size_t number() {
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected a number");
    std::size_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      if (v > 100000) fail("number too large");
      v = v * 10 + static_cast<std::size_t>(s_[pos_] - '0');
      advance();
    }
    return v;
  }

  std::size_t header_value(const std::string& key) {
    expect_word(key);
    expect('=');
    skip_space();
    hdr_line_ = line_;
    hdr_col_ = col_;
    return number();
  }

  std::vector<BefLiteral> conjunction() {
    std::vector<BefLiteral> out;
    item(out);
    while (peek() == '&') {
      advance();
      item(out);
    }
    return out;
  }

  // item := "(" conj ")" | literal
  void item(std::vector<BefLiteral>& out) {
    if (peek() == '(') {
      advance();
      auto inner = conjunction();
      expect(')');
      out.insert(out.end(), inner.begin(), inner.end());
      return;
    }
    out.push_back(literal());
  }

  BefLiteral literal() {
    BefLiteral lit;
    if (peek() == '!') {
      advance();
      lit.negated = true;
      if (peek() == '(') {
        advance();
        atom(lit);
        if (peek() == '&' || peek() == '|') fail("negation applies to a single atom");
        expect(')');
        return lit;
      }
    }
    atom(lit);
    return lit;
  }

  void atom(BefLiteral& lit) {
    lit.lhs = term();
    switch (peek()) {
      case '<': lit.rel = BefRel::less; break;
      case '=': lit.rel = BefRel::equal; break;
      case '>': lit.rel = BefRel::greater; break;
      default:
        if (pos_ >= s_.size()) fail("expected a comparison but the input ended");
        fail(std::string("expected '<', '=' or '>' but found '") + s_[pos_] + "'");
    }
    advance();
    lit.rhs = term();
  }

  BefTerm term() {
    skip_space();
    const std::size_t l = line_, c = col_;
    std::string w = word();
    if (w.empty()) {
      if (pos_ >= s_.size()) fail("expected a term but the input ended");
      fail(std::string("expected a term but found '") + s_[pos_] + "'");
    }
    if (w.size() > 1 && w.find('f') != std::string::npos)
      fail("nested application of the function symbol in '" + w + "'", l, c);
    if (w.size() != 1 || (w[0] != 'x' && w[0] != 'y' && w[0] != 'f'))
      fail("unknown term '" + w + "' (expected x<i>, y<i> or f<j>)", l, c);
    if (w[0] == 'f' && pos_ < s_.size() && s_[pos_] == '(')
      fail("the function symbol is written f<j>; explicit applications are not allowed", l, c);
    BefTerm t;
    t.index = number();
    const BefFormula& B = *B_;
    std::size_t limit = 0;
    switch (w[0]) {
      case 'x': t.kind = BefTerm::Kind::x; limit = B.q; break;
      case 'y': t.kind = BefTerm::Kind::y; limit = B.r * B.t; break;
      default: t.kind = BefTerm::Kind::f; limit = B.t; break;
    }
    if (t.index == 0 || t.index > limit)
      fail("index of " + w + std::to_string(t.index) + " is out of range 1.." + std::to_string(limit), l, c);
    return t;
  }

  const std::string& s_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
  std::size_t hdr_line_ = 1, hdr_col_ = 1;
  const BefFormula* B_ = nullptr;
};

inline std::string term_str(const BefTerm& t) {
  const char* p = t.kind == BefTerm::Kind::x ? "x" : t.kind == BefTerm::Kind::y ? "y" : "f";
  return p + std::to_string(t.index);
}

inline std::string atom_str(const BefLiteral& l) {
  const char* op = l.rel == BefRel::less ? " < " : l.rel == BefRel::equal ? " = " : " > ";
  return term_str(l.lhs) + op + term_str(l.rhs);
}

}  // namespace detail

inline BefFormula parse_bef(const std::string& text) { return detail::BefParser(text).parse(); }

/// Canonical text; parse_bef(to_string(B)) == B.
inline std::string to_string(const BefFormula& B) {
  std::string s = "bef q=" + std::to_string(B.q) + " t=" + std::to_string(B.t) + " r=" + std::to_string(B.r) + " :";
  for (std::size_t d = 0; d < B.dnf.size(); ++d) {
    s += d ? " | " : " ";
    const auto& conj = B.dnf[d];
    const bool wrap = B.dnf.size() > 1 && conj.size() > 1;
    if (wrap) s += "(";
    for (std::size_t i = 0; i < conj.size(); ++i) {
      if (i) s += " & ";
      s += conj[i].negated ? "!(" + detail::atom_str(conj[i]) + ")" : detail::atom_str(conj[i]);
    }
    if (wrap) s += ")";
  }
  return s;
}

namespace detail {

inline bool matrix_holds(const BefFormula& B, std::span<const Nat> x, const std::vector<Nat>& y,
                         const std::vector<Nat>& fy) {
  auto value = [&](const BefTerm& t) -> Nat {
    switch (t.kind) {
      case BefTerm::Kind::x: return x[t.index - 1];
      case BefTerm::Kind::y: return y[t.index - 1];
      case BefTerm::Kind::f: return fy[t.index - 1];
    }
    return 0;
  };
  for (const auto& conj : B.dnf) {
    bool all = true;
    for (const auto& lit : conj) {
      const Nat a = value(lit.lhs), b = value(lit.rhs);
      bool v = lit.rel == BefRel::less ? a < b : lit.rel == BefRel::equal ? a == b : a > b;
      if (v == lit.negated) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace detail

/// Whether B(args) is true in f: some t blocks from dom(f), all coordinates
/// below max(args), satisfy the matrix with f_j = f(block_j).
inline bool eval_bef(const BefFormula& B, const ScalarMap& f, std::span<const Nat> args) {
  if (args.size() != B.q)
    throw PreconditionError("formula expects " + std::to_string(B.q) + " arguments, got " +
                            std::to_string(args.size()));
  Nat bound = 0;
  for (Nat a : args) bound = std::max(bound, a);
  std::vector<std::pair<const Tuple*, Nat>> blocks;
  for (const auto& [key, val] : f) {
    if (key.arity() != B.r)
      throw PreconditionError("f has a key of arity " + std::to_string(key.arity()) + " but the formula has r = " +
                              std::to_string(B.r));
    if (key.sup() < bound) blocks.emplace_back(&key, val);
  }
  if (blocks.empty()) return false;
  std::vector<std::size_t> pick(B.t, 0);
  std::vector<Nat> y(B.r * B.t), fy(B.t);
  for (;;) {
    for (std::size_t j = 0; j < B.t; ++j) {
      const auto& [key, val] = blocks[pick[j]];
      for (std::size_t i = 0; i < B.r; ++i) y[j * B.r + i] = (*key)[i];
      fy[j] = val;
    }
    if (detail::matrix_holds(B, args, y, fy)) return true;
    std::size_t j = B.t;
    while (j > 0 && ++pick[j - 1] == blocks.size()) pick[--j] = 0;
    if (j == 0) return false;
  }
}

inline bool eval_bef(const BefFormula& B, const ScalarMap& f, std::initializer_list<Nat> args) {
  std::vector<Nat> a(args);
  return eval_bef(B, f, std::span<const Nat>(a));
}

}  // namespace regressia
