#pragma once

// Late labelled transitions as explicit derivation trees.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "renaming.hpp"
#include "syntax.hpp"

namespace pislice {

enum class Rule : std::uint8_t {
  InputPrefix,
  OutputPrefix,
  ChoiceL,
  ChoiceR,
  ParLNonbound,
  ParRNonbound,
  ParLBound,
  ParRBound,
  SyncLR,
  SyncRL,
  Extrude,
  CloseLR,
  CloseRL,
  NuNonbound,
  NuBound,
  BangUnfold,
};

inline const char* ruleName(Rule r) {
  switch (r) {
    case Rule::InputPrefix: return "InputPrefix";
    case Rule::OutputPrefix: return "OutputPrefix";
    case Rule::ChoiceL: return "ChoiceL";
    case Rule::ChoiceR: return "ChoiceR";
    case Rule::ParLNonbound: return "ParL-nonbound";
    case Rule::ParRNonbound: return "ParR-nonbound";
    case Rule::ParLBound: return "ParL-bound";
    case Rule::ParRBound: return "ParR-bound";
    case Rule::SyncLR: return "SyncLR";
    case Rule::SyncRL: return "SyncRL";
    case Rule::Extrude: return "Extrude";
    case Rule::CloseLR: return "CloseLR";
    case Rule::CloseRL: return "CloseRL";
    case Rule::NuNonbound: return "NuNonbound";
    case Rule::NuBound: return "NuBound";
    case Rule::BangUnfold: return "BangUnfold";
  }
  return "?";
}

inline bool isParRule(Rule r) {
  return r == Rule::ParLNonbound || r == Rule::ParRNonbound || r == Rule::ParLBound ||
         r == Rule::ParRBound || r == Rule::SyncLR || r == Rule::SyncRL || r == Rule::CloseLR ||
         r == Rule::CloseRL;
}

inline bool isNuRule(Rule r) {
  return r == Rule::Extrude || r == Rule::NuNonbound || r == Rule::NuBound;
}

inline bool isClose(Rule r) { return r == Rule::CloseLR || r == Rule::CloseRL; }
inline bool isSync(Rule r) { return r == Rule::SyncLR || r == Rule::SyncRL; }

/// A derivation of source -action-> target. Premises of Par-family rules are
/// stored by position: left premise first, then right.
class Transition {
 public:
  Rule rule() const { return n_->rule; }
  Context context() const { return n_->ctx; }
  Context targetContext() const { return n_->ctx + (n_->action.isBound() ? 1 : 0); }
  const Process& source() const { return n_->source; }
  const Action& action() const { return n_->action; }
  const Process& target() const { return n_->target; }
  const std::vector<Transition>& premises() const { return n_->premises; }
  const Transition& premise(std::size_t i = 0) const { return n_->premises.at(i); }

  /// Premise acting on the left / right component of a Par-family rule.
  std::optional<Transition> leftPremise() const;
  std::optional<Transition> rightPremise() const;

  friend bool operator==(const Transition& a, const Transition& b) {
    if (a.n_ == b.n_) return true;
    return a.rule() == b.rule() && a.context() == b.context() && a.action() == b.action() &&
           a.source() == b.source() && a.target() == b.target() && a.premises() == b.premises();
  }

  static Transition make(Rule r, Context ctx, Process src, Action a, Process tgt,
                         std::vector<Transition> premises = {}) {
    return Transition{std::make_shared<const Node>(
        Node{r, ctx, std::move(src), a, std::move(tgt), std::move(premises)})};
  }

 private:
  struct Node {
    Rule rule;
    Context ctx;
    Process source;
    Action action;
    Process target;
    std::vector<Transition> premises;
  };
  explicit Transition(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

inline std::optional<Transition> Transition::leftPremise() const {
  switch (rule()) {
    case Rule::ParLNonbound:
    case Rule::ParLBound:
    case Rule::SyncLR:
    case Rule::SyncRL:
    case Rule::CloseLR:
    case Rule::CloseRL:
      return premise(0);
    default:
      return std::nullopt;
  }
}

inline std::optional<Transition> Transition::rightPremise() const {
  switch (rule()) {
    case Rule::ParRNonbound:
    case Rule::ParRBound:
      return premise(0);
    case Rule::SyncLR:
    case Rule::SyncRL:
    case Rule::CloseLR:
    case Rule::CloseRL:
      return premise(1);
    default:
      return std::nullopt;
  }
}

// Smart constructors: each builds the conclusion of one rule from its
// premises and checks the side conditions.

inline Transition inputPrefix(Context ctx, Name x, Process body) {
  auto src = Process::input(x, body);
  return Transition::make(Rule::InputPrefix, ctx, src, Action::input(x), std::move(body));
}

inline Transition outputPrefix(Context ctx, Name x, Payload z, Process body) {
  auto src = Process::output(x, z, body);
  return Transition::make(Rule::OutputPrefix, ctx, src, Action::output(x, z), std::move(body));
}

inline Transition choiceL(const Transition& t, const Process& q) {
  return Transition::make(Rule::ChoiceL, t.context(), Process::choice(t.source(), q), t.action(),
                          t.target(), {t});
}

inline Transition choiceR(const Process& p, const Transition& t) {
  return Transition::make(Rule::ChoiceR, t.context(), Process::choice(p, t.source()), t.action(),
                          t.target(), {t});
}

inline Transition parL(const Transition& t, const Process& q) {
  const auto ctx = t.context();
  auto src = Process::par(t.source(), q);
  if (t.action().isBound()) {
    return Transition::make(Rule::ParLBound, ctx, src, t.action(),
                            Process::par(t.target(), apply(Renaming::push(ctx), q)), {t});
  }
  return Transition::make(Rule::ParLNonbound, ctx, src, t.action(), Process::par(t.target(), q), {t});
}

inline Transition parR(const Process& p, const Transition& t) {
  const auto ctx = t.context();
  auto src = Process::par(p, t.source());
  if (t.action().isBound()) {
    return Transition::make(Rule::ParRBound, ctx, src, t.action(),
                            Process::par(apply(Renaming::push(ctx), p), t.target()), {t});
  }
  return Transition::make(Rule::ParRNonbound, ctx, src, t.action(), Process::par(p, t.target()), {t});
}

/// Communication between a left and right premise, if their actions match.
inline std::optional<Transition> trySync(const Transition& l, const Transition& r) {
  if (l.context() != r.context()) throw Error("sync: premises at different contexts");
  const auto ctx = l.context();
  const auto& a = l.action();
  const auto& b = r.action();
  auto src = Process::par(l.source(), r.source());
  if (!a.hasChannel() || !b.hasChannel() || a.channel != b.channel) return std::nullopt;
  if (a.kind == ActionKind::Input && b.kind == ActionKind::Output) {
    auto tgt = Process::par(apply(Renaming::pop(b.payload, ctx), l.target()), r.target());
    return Transition::make(Rule::SyncLR, ctx, src, Action::tau(), tgt, {l, r});
  }
  if (a.kind == ActionKind::Output && b.kind == ActionKind::Input) {
    auto tgt = Process::par(l.target(), apply(Renaming::pop(a.payload, ctx), r.target()));
    return Transition::make(Rule::SyncRL, ctx, src, Action::tau(), tgt, {l, r});
  }
  if (a.kind == ActionKind::Input && b.kind == ActionKind::BoundOutput) {
    return Transition::make(Rule::CloseLR, ctx, src, Action::tau(),
                            Process::nu(Process::par(l.target(), r.target())), {l, r});
  }
  if (a.kind == ActionKind::BoundOutput && b.kind == ActionKind::Input) {
    return Transition::make(Rule::CloseRL, ctx, src, Action::tau(),
                            Process::nu(Process::par(l.target(), r.target())), {l, r});
  }
  return std::nullopt;
}

inline Transition sync(const Transition& l, const Transition& r) {
  auto t = trySync(l, r);
  if (!t) throw Error("sync: premise actions do not communicate");
  return *t;
}

namespace detail {

inline bool mentionsZero(const Action& a) {
  if (a.hasChannel() && a.channel.index == 0) return true;
  return a.kind == ActionKind::Output && !a.payload.isHole() && a.payload.name().index == 0;
}

/// Inverse of push on an action not mentioning 0.
inline Action unpush(const Action& a) {
  auto down = [](Name x) { return Name{x.index - 1}; };
  switch (a.kind) {
    case ActionKind::Hole:
    case ActionKind::Tau:
      return a;
    case ActionKind::Input:
      return Action::input(down(a.channel));
    case ActionKind::BoundOutput:
      return Action::boundOutput(down(a.channel));
    case ActionKind::Output:
      return Action::output(down(a.channel), a.payload.isHole()
                                                 ? a.payload
                                                 : Payload::ref(a.payload.name().index - 1));
  }
  return a;
}

}  // namespace detail

/// Restriction over a premise at ctx+1, choosing extrusion, the non-bound or
/// the bound rule from the premise's action. Empty when the name is blocked.
inline std::optional<Transition> tryNu(const Transition& t) {
  if (t.context() == 0) throw Error("nu: premise at empty context");
  const auto ctx = t.context() - 1;
  const auto& a = t.action();
  auto src = Process::nu(t.source());
  if (a.kind == ActionKind::Output && a.channel.index != 0 && a.payload == Payload::ref(0)) {
    return Transition::make(Rule::Extrude, ctx, src, Action::boundOutput(Name{a.channel.index - 1}),
                            t.target(), {t});
  }
  if (detail::mentionsZero(a)) return std::nullopt;
  if (a.isBound()) {
    return Transition::make(Rule::NuBound, ctx, src, detail::unpush(a),
                            Process::nu(apply(Renaming::swap(ctx), t.target())), {t});
  }
  return Transition::make(Rule::NuNonbound, ctx, src, detail::unpush(a), Process::nu(t.target()), {t});
}

inline Transition nu(const Transition& t) {
  auto r = tryNu(t);
  if (!r) throw Error("nu: action is blocked by the restriction");
  return *r;
}

/// Replication over a transition of P | !P whose source is the unfolding.
inline Transition bang(const Transition& t) {
  const auto& s = t.source();
  if (s.kind() != ProcKind::Par || s.right().kind() != ProcKind::Bang || !(s.right().body() == s.left())) {
    throw Error("bang: premise source is not an unfolding");
  }
  return Transition::make(Rule::BangUnfold, t.context(), s.right(), t.action(), t.target(), {t});
}

namespace detail {

inline void enumerate(const Process& p, Context ctx, std::vector<Transition>& out);

inline void enumeratePar(const Process& l, const Process& r, const std::vector<Transition>& ls,
                         const std::vector<Transition>& rs, std::vector<Transition>& out) {
  for (const auto& t : ls) out.push_back(parL(t, r));
  for (const auto& t : rs) out.push_back(parR(l, t));
  auto pairs = [&](ActionKind a, ActionKind b) {
    for (const auto& tl : ls) {
      if (tl.action().kind != a) continue;
      for (const auto& tr : rs) {
        if (tr.action().kind != b || tr.action().channel != tl.action().channel) continue;
        out.push_back(sync(tl, tr));
      }
    }
  };
  pairs(ActionKind::Input, ActionKind::Output);
  pairs(ActionKind::Output, ActionKind::Input);
  pairs(ActionKind::Input, ActionKind::BoundOutput);
  pairs(ActionKind::BoundOutput, ActionKind::Input);
}

inline void enumerate(const Process& p, Context ctx, std::vector<Transition>& out) {
  switch (p.kind()) {
    case ProcKind::Hole:
      throw Error("enumerateTransitions: hole encountered");
    case ProcKind::Nil:
      return;
    case ProcKind::Input:
      out.push_back(inputPrefix(ctx, p.channel(), p.body()));
      return;
    case ProcKind::Output:
      if (p.payload().isHole()) throw Error("enumerateTransitions: hole encountered");
      out.push_back(outputPrefix(ctx, p.channel(), p.payload(), p.body()));
      return;
    case ProcKind::Choice: {
      std::vector<Transition> ls, rs;
      enumerate(p.left(), ctx, ls);
      enumerate(p.right(), ctx, rs);
      for (const auto& t : ls) out.push_back(choiceL(t, p.right()));
      for (const auto& t : rs) out.push_back(choiceR(p.left(), t));
      return;
    }
    case ProcKind::Par: {
      std::vector<Transition> ls, rs;
      enumerate(p.left(), ctx, ls);
      enumerate(p.right(), ctx, rs);
      enumeratePar(p.left(), p.right(), ls, rs, out);
      return;
    }
    case ProcKind::Nu: {
      std::vector<Transition> inner;
      enumerate(p.body(), ctx + 1, inner);
      for (const auto& t : inner) {
        if (auto r = tryNu(t)) out.push_back(*r);
      }
      return;
    }
    case ProcKind::Bang: {
      // The inner copy of !P stays frozen for this unfolding.
      std::vector<Transition> ls, unfolded;
      enumerate(p.body(), ctx, ls);
      enumeratePar(p.body(), p, ls, {}, unfolded);
      for (const auto& t : unfolded) out.push_back(bang(t));
      return;
    }
  }
}

}  // namespace detail

inline std::vector<Transition> enumerateTransitions(const Process& p, Context ctx) {
  if (!wellFormed(p, ctx)) throw Error("enumerateTransitions: process is not well formed");
  if (containsHole(p)) throw Error("enumerateTransitions: process contains a hole");
  std::vector<Transition> out;
  detail::enumerate(p, ctx, out);
  return out;
}

inline Transition stepBy(const Process& p, Context ctx, std::size_t index) {
  auto ts = enumerateTransitions(p, ctx);
  if (index >= ts.size()) {
    throw Error("stepBy: index " + std::to_string(index) + " out of range (" +
                std::to_string(ts.size()) + " transitions)");
  }
  return ts[index];
}

/// Image of a derivation under an unsliced renaming, with the same rule
/// skeleton.
inline Transition renameTransition(const Renaming& rho, const Transition& t) {
  if (rho.source() != t.context()) throw Error("renameTransition: context mismatch");
  const auto& s = t.source();
  switch (t.rule()) {
    case Rule::InputPrefix:
      return inputPrefix(rho.target, detail::subject(rho, s.channel()), apply(lift(rho), s.body()));
    case Rule::OutputPrefix:
      return outputPrefix(rho.target, detail::subject(rho, s.channel()), apply(rho, s.payload()),
                          apply(rho, s.body()));
    case Rule::ChoiceL:
      return choiceL(renameTransition(rho, t.premise()), apply(rho, s.right()));
    case Rule::ChoiceR:
      return choiceR(apply(rho, s.left()), renameTransition(rho, t.premise()));
    case Rule::ParLNonbound:
    case Rule::ParLBound:
      return parL(renameTransition(rho, t.premise()), apply(rho, s.right()));
    case Rule::ParRNonbound:
    case Rule::ParRBound:
      return parR(apply(rho, s.left()), renameTransition(rho, t.premise()));
    case Rule::SyncLR:
    case Rule::SyncRL:
    case Rule::CloseLR:
    case Rule::CloseRL:
      return sync(renameTransition(rho, t.premise(0)), renameTransition(rho, t.premise(1)));
    case Rule::Extrude:
    case Rule::NuNonbound:
    case Rule::NuBound:
      return nu(renameTransition(lift(rho), t.premise()));
    case Rule::BangUnfold:
      return bang(renameTransition(rho, t.premise()));
  }
  throw Error("renameTransition: unknown rule");
}

/// Re-derives the conclusion of every node from its premises and the rule
/// definitions, independently of the smart constructors.
inline bool checkDerivation(const Transition& t) {
  const auto ctx = t.context();
  const auto& s = t.source();
  const auto& a = t.action();
  const auto& q = t.target();
  if (!wellFormed(s, ctx) || !wellFormed(a, ctx) || !wellFormed(q, t.targetContext())) return false;
  auto premisesOk = [&](std::size_t n) {
    if (t.premises().size() != n) return false;
    for (const auto& p : t.premises()) {
      if (!checkDerivation(p)) return false;
    }
    return true;
  };
  switch (t.rule()) {
    case Rule::InputPrefix:
      return premisesOk(0) && s.kind() == ProcKind::Input && a == Action::input(s.channel()) &&
             q == s.body();
    case Rule::OutputPrefix:
      return premisesOk(0) && s.kind() == ProcKind::Output &&
             a == Action::output(s.channel(), s.payload()) && q == s.body();
    case Rule::ChoiceL:
    case Rule::ChoiceR: {
      if (!premisesOk(1) || s.kind() != ProcKind::Choice) return false;
      const auto& p = t.premise();
      const auto& side = t.rule() == Rule::ChoiceL ? s.left() : s.right();
      return p.context() == ctx && p.source() == side && p.action() == a && p.target() == q;
    }
    case Rule::ParLNonbound:
    case Rule::ParLBound:
    case Rule::ParRNonbound:
    case Rule::ParRBound: {
      if (!premisesOk(1) || s.kind() != ProcKind::Par) return false;
      const auto& p = t.premise();
      const bool left = t.rule() == Rule::ParLNonbound || t.rule() == Rule::ParLBound;
      const bool bound = t.rule() == Rule::ParLBound || t.rule() == Rule::ParRBound;
      if (p.context() != ctx || p.action() != a || p.action().isBound() != bound) return false;
      const auto& active = left ? s.left() : s.right();
      auto passive = left ? s.right() : s.left();
      if (bound) passive = apply(Renaming::push(ctx), passive);
      if (p.source() != active || q.kind() != ProcKind::Par) return false;
      return left ? (q.left() == p.target() && q.right() == passive)
                  : (q.left() == passive && q.right() == p.target());
    }
    case Rule::SyncLR:
    case Rule::SyncRL: {
      if (!premisesOk(2) || s.kind() != ProcKind::Par || a != Action::tau()) return false;
      const auto& l = t.premise(0);
      const auto& r = t.premise(1);
      const bool lr = t.rule() == Rule::SyncLR;
      const auto& in = lr ? l : r;
      const auto& outp = lr ? r : l;
      if (l.source() != s.left() || r.source() != s.right()) return false;
      if (in.action().kind != ActionKind::Input || outp.action().kind != ActionKind::Output ||
          in.action().channel != outp.action().channel) {
        return false;
      }
      const auto popped = apply(Renaming::pop(outp.action().payload, ctx), in.target());
      return lr ? q == Process::par(popped, outp.target()) : q == Process::par(outp.target(), popped);
    }
    case Rule::CloseLR:
    case Rule::CloseRL: {
      if (!premisesOk(2) || s.kind() != ProcKind::Par || a != Action::tau()) return false;
      const auto& l = t.premise(0);
      const auto& r = t.premise(1);
      const bool lr = t.rule() == Rule::CloseLR;
      const auto& in = lr ? l : r;
      const auto& outp = lr ? r : l;
      if (l.source() != s.left() || r.source() != s.right()) return false;
      if (in.action().kind != ActionKind::Input || outp.action().kind != ActionKind::BoundOutput ||
          in.action().channel != outp.action().channel) {
        return false;
      }
      return q == Process::nu(Process::par(l.target(), r.target()));
    }
    case Rule::Extrude: {
      if (!premisesOk(1) || s.kind() != ProcKind::Nu || a.kind != ActionKind::BoundOutput) return false;
      const auto& p = t.premise();
      return p.context() == ctx + 1 && p.source() == s.body() &&
             p.action() == Action::output(Name{a.channel.index + 1}, Payload::ref(0)) && q == p.target();
    }
    case Rule::NuNonbound:
    case Rule::NuBound: {
      if (!premisesOk(1) || s.kind() != ProcKind::Nu || a.isHole()) return false;
      const auto& p = t.premise();
      const bool bound = t.rule() == Rule::NuBound;
      if (a.isBound() != bound || p.context() != ctx + 1 || p.source() != s.body()) return false;
      if (p.action() != apply(Renaming::push(ctx), a)) return false;
      return bound ? q == Process::nu(apply(Renaming::swap(ctx), p.target()))
                   : q == Process::nu(p.target());
    }
    case Rule::BangUnfold: {
      if (!premisesOk(1) || s.kind() != ProcKind::Bang) return false;
      const auto& p = t.premise();
      return p.source() == Process::par(s.body(), s) && p.action() == a && p.target() == q;
    }
  }
  return false;
}

struct Trace {
  Process start;
  Context context = 0;
  std::vector<Transition> steps;

  const Process& end() const { return steps.empty() ? start : steps.back().target(); }
  Context endContext() const { return steps.empty() ? context : steps.back().targetContext(); }
};

inline bool composable(const Trace& tr) {
  Process cur = tr.start;
  Context ctx = tr.context;
  for (const auto& t : tr.steps) {
    if (!(t.source() == cur) || t.context() != ctx) return false;
    cur = t.target();
    ctx = t.targetContext();
  }
  return true;
}

inline Trace runTrace(const Process& p, Context ctx, const std::vector<std::size_t>& script) {
  Trace tr{p, ctx, {}};
  Process cur = p;
  Context c = ctx;
  for (std::size_t i = 0; i < script.size(); ++i) {
    try {
      auto t = stepBy(cur, c, script[i]);
      cur = t.target();
      c = t.targetContext();
      tr.steps.push_back(std::move(t));
    } catch (const Error& e) {
      throw Error("runTrace: step " + std::to_string(i) + ": " + e.what());
    }
  }
  return tr;
}

}  // namespace pislice
