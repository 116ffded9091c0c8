#pragma once

// Forward and backward slicing of transitions and traces. Forward slicing
// follows the ordered rule dispatch of the forward judgement; backward
// slicing computes the least source slice whose forward image covers the
// criterion.

#include <functional>
#include <utility>
#include <vector>

#include "lattice.hpp"
#include "renaming.hpp"
#include "semantics.hpp"

namespace pislice {

struct StepSlice {
  Action action;
  Process target;

  friend bool operator==(const StepSlice&, const StepSlice&) = default;
};

inline bool leq(const StepSlice& a, const StepSlice& b) {
  return leq(a.action, b.action) && leq(a.target, b.target);
}

namespace detail {

[[noreturn]] inline void sliceMismatch(const char* where) {
  throw Error(std::string(where) + ": slice does not match the transition");
}

inline void expectKind(const Process& r, ProcKind k, const char* where) {
  if (r.kind() != k) sliceMismatch(where);
}

/// pop z' as a slice of pop z.
inline Renaming popSlice(Payload zp, Context ctx) { return Renaming::pop(zp, ctx); }

inline Action unpushSlice(const Action& a) { return unpush(a); }

}  // namespace detail

inline StepSlice fwdStep(const Transition& t, const Process& r) {
  if (r.isHole()) return {Action::hole(), Process::hole()};
  const auto ctx = t.context();
  const auto& s = t.source();
  switch (t.rule()) {
    case Rule::InputPrefix:
      detail::expectKind(r, ProcKind::Input, "fwdStep");
      return {t.action(), r.body()};
    case Rule::OutputPrefix:
      detail::expectKind(r, ProcKind::Output, "fwdStep");
      return {Action::output(s.channel(), r.payload()), r.body()};
    case Rule::ChoiceL:
      detail::expectKind(r, ProcKind::Choice, "fwdStep");
      return fwdStep(t.premise(), r.left());
    case Rule::ChoiceR:
      detail::expectKind(r, ProcKind::Choice, "fwdStep");
      return fwdStep(t.premise(), r.right());
    case Rule::ParLNonbound: {
      detail::expectKind(r, ProcKind::Par, "fwdStep");
      auto [a, l] = fwdStep(t.premise(), r.left());
      return {a, Process::par(l, r.right())};
    }
    case Rule::ParRNonbound: {
      detail::expectKind(r, ProcKind::Par, "fwdStep");
      auto [a, rr] = fwdStep(t.premise(), r.right());
      return {a, Process::par(r.left(), rr)};
    }
    case Rule::ParLBound: {
      detail::expectKind(r, ProcKind::Par, "fwdStep");
      auto [a, l] = fwdStep(t.premise(), r.left());
      const auto push = Renaming::push(ctx);
      return {a, Process::par(l, renF(push, s.right(), push, r.right()))};
    }
    case Rule::ParRBound: {
      detail::expectKind(r, ProcKind::Par, "fwdStep");
      auto [a, rr] = fwdStep(t.premise(), r.right());
      const auto push = Renaming::push(ctx);
      return {a, Process::par(renF(push, s.left(), push, r.left()), rr)};
    }
    case Rule::SyncLR:
    case Rule::SyncRL: {
      detail::expectKind(r, ProcKind::Par, "fwdStep");
      const bool lr = t.rule() == Rule::SyncLR;
      const auto& tin = lr ? t.premise(0) : t.premise(1);
      const auto& tout = lr ? t.premise(1) : t.premise(0);
      auto [ain, rin] = fwdStep(tin, lr ? r.left() : r.right());
      auto [aout, rout] = fwdStep(tout, lr ? r.right() : r.left());
      const auto zp = aout.isHole() ? Payload::hole() : aout.payload;
      const auto z = tout.action().payload;
      auto popped = renF(Renaming::pop(z, ctx), tin.target(), detail::popSlice(zp, ctx), rin);
      const auto a = (!ain.isHole() && !aout.isHole()) ? Action::tau() : Action::hole();
      return {a, lr ? Process::par(popped, rout) : Process::par(rout, popped)};
    }
    case Rule::Extrude: {
      detail::expectKind(r, ProcKind::Nu, "fwdStep");
      auto [a1, r1] = fwdStep(t.premise(), r.body());
      const auto a = a1 == t.premise().action() ? t.action() : Action::hole();
      return {a, r1};
    }
    case Rule::CloseLR:
    case Rule::CloseRL: {
      detail::expectKind(r, ProcKind::Par, "fwdStep");
      auto [al, rl] = fwdStep(t.premise(0), r.left());
      auto [ar, rr] = fwdStep(t.premise(1), r.right());
      const auto a = (!al.isHole() && !ar.isHole()) ? Action::tau() : Action::hole();
      return {a, Process::nu(Process::par(rl, rr))};
    }
    case Rule::NuNonbound: {
      detail::expectKind(r, ProcKind::Nu, "fwdStep");
      auto [a1, r1] = fwdStep(t.premise(), r.body());
      return {detail::unpushSlice(a1), Process::nu(r1)};
    }
    case Rule::NuBound: {
      detail::expectKind(r, ProcKind::Nu, "fwdStep");
      auto [a1, r1] = fwdStep(t.premise(), r.body());
      const auto sw = Renaming::swap(ctx);
      return {detail::unpushSlice(a1), Process::nu(renF(sw, t.premise().target(), sw, r1))};
    }
    case Rule::BangUnfold:
      detail::expectKind(r, ProcKind::Bang, "fwdStep");
      return fwdStep(t.premise(), Process::par(r.body(), r));
  }
  throw Error("fwdStep: unknown rule");
}

namespace detail {

/// Split a criterion target into the two Par components; a hole splits into
/// two holes.
inline std::pair<Process, Process> splitPar(const Process& r) {
  if (r.isHole()) return {r, r};
  expectKind(r, ProcKind::Par, "bwdStep");
  return {r.left(), r.right()};
}

inline Process nuBody(const Process& r) {
  if (r.isHole()) return r;
  expectKind(r, ProcKind::Nu, "bwdStep");
  return r.body();
}

}  // namespace detail

inline Process bwdStep(const Transition& t, const Action& ap, const Process& rp) {
  if (ap.isHole() && rp.isHole()) return Process::hole();
  if (!leq(ap, t.action())) throw Error("bwdStep: action slice does not match the transition");
  const auto ctx = t.context();
  const auto& s = t.source();
  switch (t.rule()) {
    case Rule::InputPrefix:
      return Process::input(s.channel(), rp);
    case Rule::OutputPrefix:
      return Process::output(s.channel(), ap.isHole() ? Payload::hole() : ap.payload, rp);
    case Rule::ChoiceL:
      return Process::choice(bwdStep(t.premise(), ap, rp), Process::hole());
    case Rule::ChoiceR:
      return Process::choice(Process::hole(), bwdStep(t.premise(), ap, rp));
    case Rule::ParLNonbound: {
      auto [l, q] = detail::splitPar(rp);
      return Process::par(bwdStep(t.premise(), ap, l), q);
    }
    case Rule::ParRNonbound: {
      auto [q, r] = detail::splitPar(rp);
      return Process::par(q, bwdStep(t.premise(), ap, r));
    }
    case Rule::ParLBound: {
      auto [l, q] = detail::splitPar(rp);
      auto passive = unren(Renaming::push(ctx), s.right(), q).second;
      return Process::par(bwdStep(t.premise(), ap, l), passive);
    }
    case Rule::ParRBound: {
      auto [q, r] = detail::splitPar(rp);
      auto passive = unren(Renaming::push(ctx), s.left(), q).second;
      return Process::par(passive, bwdStep(t.premise(), ap, r));
    }
    case Rule::SyncLR:
    case Rule::SyncRL: {
      const bool lr = t.rule() == Rule::SyncLR;
      const auto& tin = lr ? t.premise(0) : t.premise(1);
      const auto& tout = lr ? t.premise(1) : t.premise(0);
      auto [l, r] = detail::splitPar(rp);
      const auto& popped = lr ? l : r;
      const auto& other = lr ? r : l;
      const auto z = tout.action().payload;
      auto [sigma, inSlice] = unren(Renaming::pop(z, ctx), tin.target(), popped);
      const auto s0 = sigma[0];
      const bool tau = !ap.isHole();
      const auto needIn = tau ? tin.action() : Action::hole();
      const auto needOut = (tau || !s0.isHole()) ? Action::output(tout.action().channel, s0) : Action::hole();
      auto pin = bwdStep(tin, needIn, inSlice);
      auto pout = bwdStep(tout, needOut, other);
      return lr ? Process::par(pin, pout) : Process::par(pout, pin);
    }
    case Rule::Extrude: {
      const auto need = ap.isHole() ? Action::hole() : t.premise().action();
      return Process::nu(bwdStep(t.premise(), need, rp));
    }
    case Rule::CloseLR:
    case Rule::CloseRL: {
      auto [l, r] = detail::splitPar(detail::nuBody(rp));
      const bool tau = !ap.isHole();
      const auto needL = tau ? t.premise(0).action() : Action::hole();
      const auto needR = tau ? t.premise(1).action() : Action::hole();
      return Process::par(bwdStep(t.premise(0), needL, l), bwdStep(t.premise(1), needR, r));
    }
    case Rule::NuNonbound: {
      const auto need = apply(Renaming::push(ctx), ap);
      return Process::nu(bwdStep(t.premise(), need, detail::nuBody(rp)));
    }
    case Rule::NuBound: {
      const auto need = apply(Renaming::push(ctx), ap);
      const auto sw = Renaming::swap(ctx);
      auto inner = unren(sw, t.premise().target(), detail::nuBody(rp)).second;
      return Process::nu(bwdStep(t.premise(), need, inner));
    }
    case Rule::BangUnfold: {
      auto unfolded = bwdStep(t.premise(), ap, rp);
      if (unfolded.isHole()) return unfolded;
      detail::expectKind(unfolded, ProcKind::Par, "bwdStep");
      auto copy = unfolded.left();
      const auto& rest = unfolded.right();
      if (!rest.isHole()) {
        detail::expectKind(rest, ProcKind::Bang, "bwdStep");
        copy = join(copy, rest.body());
      }
      return Process::bang(copy);
    }
  }
  throw Error("bwdStep: unknown rule");
}

/// Step maps that discard (forward) or erase (backward) the action slice.
inline Process fwdStepNoAction(const Transition& t, const Process& r) { return fwdStep(t, r).target; }
inline Process bwdStepNoAction(const Transition& t, const Process& rp) {
  return bwdStep(t, Action::hole(), rp);
}

inline Process fwdTrace(const Trace& tr, const Process& r) {
  Process cur = r;
  for (const auto& t : tr.steps) {
    if (cur.isHole()) return cur;
    cur = fwdStepNoAction(t, cur);
  }
  return cur;
}

inline Process bwdTrace(const Trace& tr, const Process& rp) {
  Process cur = rp;
  for (auto it = tr.steps.rbegin(); it != tr.steps.rend(); ++it) {
    if (cur.isHole()) return cur;
    cur = bwdStepNoAction(*it, cur);
  }
  return cur;
}

/// Backward trace slice that keeps every step's action as part of the
/// criterion, so both parties of each communication are retained.
inline Process bwdTraceKeepingActions(const Trace& tr, const Process& rp) {
  Process cur = rp;
  for (auto it = tr.steps.rbegin(); it != tr.steps.rend(); ++it) {
    cur = bwdStep(*it, it->action(), cur);
  }
  return cur;
}

// Brute-force adjoints over enumerated lattices; test support only.

/// Least source slice whose forward image is above the criterion.
inline Process oracleBwdStep(const Transition& t, const Action& ap, const Process& rp,
                             std::size_t maxNodes = kDefaultSliceCap) {
  Process best;
  bool found = false;
  for (const auto& r : enumerateSlices(t.source(), maxNodes)) {
    if (!leq(StepSlice{ap, rp}, fwdStep(t, r))) continue;
    best = found ? meet(best, r) : r;
    found = true;
  }
  if (!found) throw Error("oracleBwdStep: criterion is not reachable");
  return best;
}

/// Greatest criterion whose backward image is below the source slice.
inline StepSlice oracleFwdStep(const Transition& t, const Process& r,
                               std::size_t maxNodes = kDefaultSliceCap) {
  StepSlice best{Action::hole(), Process::hole()};
  for (const auto& a : enumerateSlices(t.action())) {
    for (const auto& q : enumerateSlices(t.target(), maxNodes)) {
      if (!leq(bwdStep(t, a, q), r)) continue;
      best = {join(best.action, a), join(best.target, q)};
    }
  }
  return best;
}

inline Process oracleBwdTrace(const Trace& tr, const Process& rp, std::size_t maxNodes = kDefaultSliceCap) {
  Process best;
  bool found = false;
  for (const auto& r : enumerateSlices(tr.start, maxNodes)) {
    if (!leq(rp, fwdTrace(tr, r))) continue;
    best = found ? meet(best, r) : r;
    found = true;
  }
  if (!found) throw Error("oracleBwdTrace: criterion is not reachable");
  return best;
}

inline Process oracleFwdTrace(const Trace& tr, const Process& r, std::size_t maxNodes = kDefaultSliceCap) {
  Process best;
  for (const auto& q : enumerateSlices(tr.end(), maxNodes)) {
    if (leq(bwdTrace(tr, q), r)) best = join(best, q);
  }
  return best;
}

}  // namespace pislice
