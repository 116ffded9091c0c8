#pragma once

// Surface syntax with string names. Grammar:
//
//   file   ::= ('free' ident* ';')? par
//   par    ::= choice ('|' choice)*
//   choice ::= prefix ('+' prefix)*
//   prefix ::= '0' | '_' | '(' par ')' | 'new' ident '.' prefix | '!' prefix
//            | ident '<' (ident | '_') '>' '.' prefix | ident '(' ident ')' '.' prefix
//
// Line comments start with `--`.

#include <cctype>
#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lattice.hpp"
#include "syntax.hpp"

namespace pislice {

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t col)
      : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line_(line), col_(col) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return col_; }

 private:
  std::size_t line_;
  std::size_t col_;
};

struct NamedProcess {
  ProcKind kind = ProcKind::Hole;
  std::string channel;
  std::optional<std::string> payload;  // empty: erased payload
  std::string binder;                  // input and nu
  std::vector<NamedProcess> children;

  static NamedProcess hole() { return {}; }
  static NamedProcess nil() { return {ProcKind::Nil, {}, {}, {}, {}}; }
  static NamedProcess input(std::string x, std::string u, NamedProcess body) {
    return {ProcKind::Input, std::move(x), {}, std::move(u), {std::move(body)}};
  }
  static NamedProcess output(std::string x, std::optional<std::string> z, NamedProcess body) {
    return {ProcKind::Output, std::move(x), std::move(z), {}, {std::move(body)}};
  }
  static NamedProcess choice(NamedProcess l, NamedProcess r) {
    return {ProcKind::Choice, {}, {}, {}, {std::move(l), std::move(r)}};
  }
  static NamedProcess par(NamedProcess l, NamedProcess r) {
    return {ProcKind::Par, {}, {}, {}, {std::move(l), std::move(r)}};
  }
  static NamedProcess nu(std::string u, NamedProcess body) {
    return {ProcKind::Nu, {}, {}, std::move(u), {std::move(body)}};
  }
  static NamedProcess bang(NamedProcess body) {
    return {ProcKind::Bang, {}, {}, {}, {std::move(body)}};
  }

  friend bool operator==(const NamedProcess&, const NamedProcess&) = default;
};

/// A parsed file: the ordered free-name preamble and the term.
struct ParsedFile {
  std::vector<std::string> freeNames;
  NamedProcess term;
};

namespace detail {

class Parser {
 public:
  explicit Parser(const std::string& text, std::vector<std::string> defaultFree = {})
      : s_(text), defaultFree_(std::move(defaultFree)) {}

  ParsedFile file() {
    ParsedFile out;
    skip();
    if (!keyword("free")) {
      out.freeNames = defaultFree_;
    } else {
      skip();
      while (!at(';')) {
        if (eof()) fail("expected ';' after free-name preamble");
        out.freeNames.push_back(ident());
        skip();
      }
      ++pos_;
      col_++;
    }
    scope_ = out.freeNames;
    out.term = par();
    skip();
    if (!eof()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return out;
  }

 private:
  const std::string& s_;
  std::vector<std::string> defaultFree_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::vector<std::string> scope_;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

  bool eof() const { return pos_ >= s_.size(); }
  bool at(char c) const { return !eof() && s_[pos_] == c; }

  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (!eof()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        advance();
      } else if (s_.compare(pos_, 2, "--") == 0) {
        while (!eof() && s_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    skip();
    if (!at(c)) fail(std::string("expected '") + c + "'");
    advance();
  }

  static bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
  static bool identChar(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '\'';
  }

  std::string peekIdent() const {
    if (eof() || !identStart(s_[pos_])) return {};
    std::size_t e = pos_;
    while (e < s_.size() && identChar(s_[e])) ++e;
    return s_.substr(pos_, e - pos_);
  }

  bool keyword(const char* kw) {
    if (peekIdent() != kw) return false;
    for (std::size_t i = 0; kw[i]; ++i) advance();
    return true;
  }

  std::string ident() {
    skip();
    auto id = peekIdent();
    if (id.empty()) fail("expected identifier");
    if (id == "new" || id == "free") fail("'" + id + "' is a keyword");
    for (std::size_t i = 0; i < id.size(); ++i) advance();
    return id;
  }

  std::string reference() {
    const auto line = line_;
    const auto col = col_;
    auto id = ident();
    for (const auto& n : scope_) {
      if (n == id) return id;
    }
    throw ParseError("unbound name '" + id + "'", line, col);
  }

  NamedProcess par() {
    auto p = choice();
    for (skip(); at('|'); skip()) {
      advance();
      p = NamedProcess::par(std::move(p), choice());
    }
    return p;
  }

  NamedProcess choice() {
    auto p = prefix();
    for (skip(); at('+'); skip()) {
      advance();
      p = NamedProcess::choice(std::move(p), prefix());
    }
    return p;
  }

  NamedProcess bound(const std::string& u) {
    scope_.push_back(u);
    auto body = prefix();
    scope_.pop_back();
    return body;
  }

  NamedProcess prefix() {
    skip();
    if (eof()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '0') {
      advance();
      return NamedProcess::nil();
    }
    if (c == '_') {
      advance();
      return NamedProcess::hole();
    }
    if (c == '(') {
      advance();
      auto p = par();
      expect(')');
      return p;
    }
    if (c == '!') {
      advance();
      return NamedProcess::bang(prefix());
    }
    if (keyword("new")) {
      auto u = ident();
      expect('.');
      return NamedProcess::nu(u, bound(u));
    }
    auto x = reference();
    skip();
    if (at('<')) {
      advance();
      skip();
      std::optional<std::string> z;
      if (at('_')) {
        advance();
      } else {
        z = reference();
      }
      expect('>');
      expect('.');
      return NamedProcess::output(x, z, prefix());
    }
    if (at('(')) {
      advance();
      auto u = ident();
      expect(')');
      expect('.');
      return NamedProcess::input(x, u, bound(u));
    }
    fail("expected '<' or '(' after channel name");
  }
};

}  // namespace detail

inline ParsedFile parse(const std::string& text) { return detail::Parser(text).file(); }

/// As above; a file without a preamble gets `defaultFree` as its free names.
inline ParsedFile parse(const std::string& text, const std::vector<std::string>& defaultFree) {
  return detail::Parser(text, defaultFree).file();
}

namespace detail {

inline Name lookup(const std::vector<std::string>& env, const std::string& n) {
  for (std::size_t i = env.size(); i-- > 0;) {
    if (env[i] == n) return Name{static_cast<std::uint32_t>(env.size() - 1 - i)};
  }
  throw Error("unbound name '" + n + "'");
}

inline Process toDeBruijn(const NamedProcess& p, std::vector<std::string>& env) {
  switch (p.kind) {
    case ProcKind::Hole:
      return Process::hole();
    case ProcKind::Nil:
      return Process::nil();
    case ProcKind::Input: {
      const auto x = lookup(env, p.channel);
      env.push_back(p.binder);
      auto body = toDeBruijn(p.children.at(0), env);
      env.pop_back();
      return Process::input(x, body);
    }
    case ProcKind::Output: {
      const auto x = lookup(env, p.channel);
      const auto z = p.payload ? Payload{lookup(env, *p.payload)} : Payload::hole();
      return Process::output(x, z, toDeBruijn(p.children.at(0), env));
    }
    case ProcKind::Choice:
      return Process::choice(toDeBruijn(p.children.at(0), env), toDeBruijn(p.children.at(1), env));
    case ProcKind::Par:
      return Process::par(toDeBruijn(p.children.at(0), env), toDeBruijn(p.children.at(1), env));
    case ProcKind::Nu: {
      env.push_back(p.binder);
      auto body = toDeBruijn(p.children.at(0), env);
      env.pop_back();
      return Process::nu(body);
    }
    case ProcKind::Bang:
      return Process::bang(toDeBruijn(p.children.at(0), env));
  }
  return Process::hole();
}

}  // namespace detail

/// The last entry of `freeOrder` is index 0.
inline std::pair<Process, Context> toDeBruijn(const NamedProcess& p,
                                              const std::vector<std::string>& freeOrder) {
  auto env = freeOrder;
  return {detail::toDeBruijn(p, env), freeOrder.size()};
}

namespace detail {

/// Fresh binder names x0, x1, ... that never collide with the hints.
class FreshNames {
 public:
  explicit FreshNames(const std::vector<std::string>& avoid, std::string stem = "x")
      : avoid_(avoid.begin(), avoid.end()), stem_(std::move(stem)) {}

  std::string next() {
    for (;;) {
      auto n = stem_ + std::to_string(counter_++);
      if (!avoid_.count(n)) return n;
    }
  }

 private:
  std::set<std::string> avoid_;
  std::string stem_;
  std::size_t counter_ = 0;
};

inline const std::string& nameAt(const std::vector<std::string>& env, Name x) {
  if (x.index >= env.size()) throw Error("fromDeBruijn: index " + std::to_string(x.index) + " out of scope");
  return env[env.size() - 1 - x.index];
}

inline NamedProcess fromDeBruijn(const Process& p, std::vector<std::string>& env, FreshNames& fresh) {
  switch (p.kind()) {
    case ProcKind::Hole:
      return NamedProcess::hole();
    case ProcKind::Nil:
      return NamedProcess::nil();
    case ProcKind::Input: {
      auto x = nameAt(env, p.channel());
      auto u = fresh.next();
      env.push_back(u);
      auto body = fromDeBruijn(p.body(), env, fresh);
      env.pop_back();
      return NamedProcess::input(x, u, std::move(body));
    }
    case ProcKind::Output: {
      std::optional<std::string> z;
      if (!p.payload().isHole()) z = nameAt(env, p.payload().name());
      return NamedProcess::output(nameAt(env, p.channel()), z, fromDeBruijn(p.body(), env, fresh));
    }
    case ProcKind::Choice:
    case ProcKind::Par: {
      // Left before right, so fresh binder names read in textual order.
      auto l = fromDeBruijn(p.left(), env, fresh);
      auto r = fromDeBruijn(p.right(), env, fresh);
      return p.kind() == ProcKind::Choice ? NamedProcess::choice(std::move(l), std::move(r))
                                          : NamedProcess::par(std::move(l), std::move(r));
    }
    case ProcKind::Nu: {
      auto u = fresh.next();
      env.push_back(u);
      auto body = fromDeBruijn(p.body(), env, fresh);
      env.pop_back();
      return NamedProcess::nu(u, std::move(body));
    }
    case ProcKind::Bang:
      return NamedProcess::bang(fromDeBruijn(p.body(), env, fresh));
  }
  return NamedProcess::hole();
}

}  // namespace detail

/// `hints` names the free indices, last entry is index 0.
inline NamedProcess fromDeBruijn(const Process& p, const std::vector<std::string>& hints) {
  auto env = hints;
  detail::FreshNames fresh(hints);
  return detail::fromDeBruijn(p, env, fresh);
}

namespace detail {

// Precedence levels: 0 par, 1 choice, 2 prefix.
//
// With a mask (a slice of the same term), the parts the mask erases are
// printed in full between `erasedOpen` and `erasedClose` instead of as `_`.
struct Overlay {
  std::string erasedOpen;
  std::string erasedClose;
};

inline void print(const NamedProcess& p, int level, std::string& out, const Process* mask = nullptr,
                  const Overlay* style = nullptr) {
  if (mask && mask->isHole() && p.kind != ProcKind::Hole) {
    out += style->erasedOpen;
    print(p, level, out);
    out += style->erasedClose;
    return;
  }
  auto sub = [&](std::size_t i) -> const Process* {
    if (!mask) return nullptr;
    if (p.kind == ProcKind::Choice || p.kind == ProcKind::Par) return i == 0 ? &mask->left() : &mask->right();
    return &mask->body();
  };
  auto open = [&](int need) {
    if (level > need) out += '(';
  };
  auto close = [&](int need) {
    if (level > need) out += ')';
  };
  switch (p.kind) {
    case ProcKind::Hole:
      out += '_';
      return;
    case ProcKind::Nil:
      out += '0';
      return;
    case ProcKind::Input:
      out += p.channel + "(" + p.binder + ").";
      print(p.children[0], 2, out, sub(0), style);
      return;
    case ProcKind::Output: {
      std::string z = p.payload ? *p.payload : std::string("_");
      if (mask && p.payload && mask->payload().isHole()) z = style->erasedOpen + z + style->erasedClose;
      out += p.channel + "<" + z + ">.";
      print(p.children[0], 2, out, sub(0), style);
      return;
    }
    case ProcKind::Choice:
      open(1);
      print(p.children[0], 1, out, sub(0), style);
      out += " + ";
      print(p.children[1], 2, out, sub(1), style);
      close(1);
      return;
    case ProcKind::Par:
      open(0);
      print(p.children[0], 0, out, sub(0), style);
      out += " | ";
      print(p.children[1], 1, out, sub(1), style);
      close(0);
      return;
    case ProcKind::Nu:
      out += "new " + p.binder + ".";
      print(p.children[0], 2, out, sub(0), style);
      return;
    case ProcKind::Bang:
      out += '!';
      print(p.children[0], 2, out, sub(0), style);
      return;
  }
}

}  // namespace detail

inline std::string print(const NamedProcess& p) {
  std::string out;
  detail::print(p, 0, out);
  return out;
}

inline std::string print(const ParsedFile& f) {
  std::string out;
  if (!f.freeNames.empty()) {
    out += "free";
    for (const auto& n : f.freeNames) out += " " + n;
    out += "; ";
  }
  return out + print(f.term);
}

/// Print a de Bruijn process with the given free-name hints.
inline std::string show(const Process& p, const std::vector<std::string>& hints) {
  return print(fromDeBruijn(p, hints));
}

inline std::string show(const Action& a, const std::vector<std::string>& hints) {
  switch (a.kind) {
    case ActionKind::Hole:
      return "_";
    case ActionKind::Tau:
      return "tau";
    case ActionKind::Input:
      return detail::nameAt(hints, a.channel);
    case ActionKind::BoundOutput:
      return "'" + detail::nameAt(hints, a.channel) + "()";
    case ActionKind::Output:
      return "'" + detail::nameAt(hints, a.channel) + "<" +
             (a.payload.isHole() ? std::string("_") : detail::nameAt(hints, a.payload.name())) + ">";
  }
  return "?";
}

/// Names for `extra` new free indices, appended after `hints`.
inline std::vector<std::string> extendHints(std::vector<std::string> hints, std::size_t extra) {
  detail::FreshNames fresh(hints, "v");
  for (std::size_t i = 0; i < extra; ++i) hints.push_back(fresh.next());
  return hints;
}

using detail::Overlay;

/// Print `full` with the parts erased by its slice `slice` wrapped in the
/// overlay markers.
inline std::string showOverlay(const Process& full, const Process& slice, const std::vector<std::string>& hints,
                               const Overlay& style) {
  if (!leq(slice, full)) throw Error("showOverlay: not a slice of the reference");
  std::string out;
  detail::print(fromDeBruijn(full, hints), 0, out, &slice, &style);
  return out;
}

/// Parse a file straight to de Bruijn form.
struct Program {
  Process process;
  Context context = 0;
  std::vector<std::string> freeNames;
};

inline Program parseProgram(const std::string& text) {
  auto f = parse(text);
  auto [p, ctx] = toDeBruijn(f.term, f.freeNames);
  return {p, ctx, f.freeNames};
}

}  // namespace pislice
