#pragma once

// Concurrency of coinitial transitions, residuals, braidings relating the
// cofinal end states of a pentagon, their lattice isomorphisms, and adjacent
// permutation of traces.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lattice.hpp"
#include "renaming.hpp"
#include "semantics.hpp"
#include "slicing.hpp"

namespace pislice {

namespace detail {

inline void requireCoinitial(const Transition& t, const Transition& u, const char* where) {
  if (t.context() != u.context() || !(t.source() == u.source())) {
    throw Error(std::string(where) + ": transitions are not coinitial");
  }
}

inline bool concurrentImpl(const Transition& t, const Transition& u) {
  const auto rt = t.rule();
  const auto ru = u.rule();
  switch (t.source().kind()) {
    case ProcKind::Hole:
    case ProcKind::Nil:
    case ProcKind::Input:
    case ProcKind::Output:
      return false;
    case ProcKind::Choice:
      if (rt != ru) return false;
      return concurrentImpl(t.premise(), u.premise());
    case ProcKind::Par: {
      const auto tl = t.leftPremise(), tr = t.rightPremise();
      const auto ul = u.leftPremise(), ur = u.rightPremise();
      if (tl && ul && !concurrentImpl(*tl, *ul)) return false;
      if (tr && ur && !concurrentImpl(*tr, *ur)) return false;
      return true;
    }
    case ProcKind::Nu:
    case ProcKind::Bang:
      return concurrentImpl(t.premise(), u.premise());
  }
  return false;
}

}  // namespace detail

/// t ⌣ u: coinitial transitions consuming independent redexes.
inline bool concurrent(const Transition& t, const Transition& u) {
  detail::requireCoinitial(t, u, "concurrent");
  return detail::concurrentImpl(t, u);
}

namespace detail {

inline Transition residualImpl(const Transition& u, const Transition& t) {
  const auto ctx = t.context();
  switch (t.source().kind()) {
    case ProcKind::Choice:
    case ProcKind::Bang:
      return residualImpl(u.premise(), t.premise());
    case ProcKind::Par: {
      const bool close = isClose(t.rule());
      const Process inner = close ? t.target().body() : t.target();
      const auto tl = t.leftPremise(), tr = t.rightPremise();
      const auto ul = u.leftPremise(), ur = u.rightPremise();

      // Residual of one of u's premises on the component it acts on.
      auto side = [&](const std::optional<Transition>& up, const std::optional<Transition>& tp,
                      const std::optional<Transition>& tother, bool popHere) -> std::optional<Transition> {
        if (!up) return std::nullopt;
        if (tp) {
          auto r = residualImpl(*up, *tp);
          if (popHere) {
            const auto& outAct = tother->action();
            r = renameTransition(Renaming::pop(outAct.payload, ctx), r);
          }
          return r;
        }
        if (tother && tother->action().isBound() && !close) {
          return renameTransition(Renaming::push(ctx), *up);
        }
        return *up;
      };
      const bool popLeft = t.rule() == Rule::SyncLR;
      const bool popRight = t.rule() == Rule::SyncRL;
      auto nl = side(ul, tl, tr, popLeft);
      auto nr = side(ur, tr, tl, popRight);
      Transition out = nl && nr ? sync(*nl, *nr) : nl ? parL(*nl, inner.right()) : parR(inner.left(), *nr);
      return close ? nu(out) : out;
    }
    case ProcKind::Nu: {
      auto base = residualImpl(u.premise(), t.premise());
      switch (t.rule()) {
        case Rule::Extrude:
          return base;
        case Rule::NuNonbound:
          return nu(base);
        case Rule::NuBound:
          return nu(renameTransition(Renaming::swap(ctx), base));
        default:
          break;
      }
      break;
    }
    default:
      break;
  }
  throw Error("residual: transitions are not concurrent");
}

}  // namespace detail

/// u/t: the transition from target(t) consuming u's redex.
inline Transition residual(const Transition& u, const Transition& t) {
  if (!concurrent(t, u)) throw Error("residual: transitions are not concurrent");
  return detail::residualImpl(u, t);
}

// Bound braids. A leaf relates νν P to νν P' with P = swap P'; the other
// constructors carry the leaf through one syntactic position.

enum class BraidKind : std::uint8_t { Leaf, ChoiceL, ChoiceR, ParL, ParR, Nu, Bang };

class BoundBraid {
 public:
  BraidKind kind() const { return n_->kind; }
  /// Leaf: the body P of the left-hand νν P.
  const Process& leafBody() const { return n_->body; }
  /// Context of the position (free indices in scope at this node).
  Context context() const { return n_->ctx; }
  /// Passive component of a Choice / Par congruence.
  const Process& sibling() const { return n_->body; }
  const BoundBraid& sub() const { return *n_->sub; }

  static BoundBraid leaf(Process p, Context ctx) { return make(BraidKind::Leaf, std::move(p), ctx, nullptr); }
  static BoundBraid congruence(BraidKind k, Process sibling, Context ctx, BoundBraid sub) {
    return make(k, std::move(sibling), ctx, std::make_shared<const BoundBraid>(std::move(sub)));
  }

  friend bool operator==(const BoundBraid& a, const BoundBraid& b) {
    if (a.kind() != b.kind() || a.context() != b.context() || !(a.n_->body == b.n_->body)) return false;
    if (a.kind() == BraidKind::Leaf) return true;
    return a.sub() == b.sub();
  }

 private:
  struct Node {
    BraidKind kind;
    Process body;
    Context ctx;
    std::shared_ptr<const BoundBraid> sub;
  };
  static BoundBraid make(BraidKind k, Process p, Context ctx, std::shared_ptr<const BoundBraid> sub) {
    BoundBraid b;
    b.n_ = std::make_shared<const Node>(Node{k, std::move(p), ctx, std::move(sub)});
    return b;
  }
  std::shared_ptr<const Node> n_;
};

struct BraidEq {
  friend bool operator==(const BraidEq&, const BraidEq&) = default;
};
/// Q' = swap Q at the top of a context Γ+2; `context` is Γ+2.
struct BraidSwapTop {
  Process left;
  Context context = 0;
  friend bool operator==(const BraidSwapTop&, const BraidSwapTop&) = default;
};
using Braiding = std::variant<BraidEq, BraidSwapTop, BoundBraid>;

inline const char* braidingKind(const Braiding& g) {
  switch (g.index()) {
    case 0: return "Eq";
    case 1: return "SwapTop";
    default: return "Bound";
  }
}

/// Compact term notation for braid witnesses: a leaf is `(νν)` applied to the
/// outline of its body, congruences put the sub-witness at the active position.
inline std::string compact(const BoundBraid& phi) {
  switch (phi.kind()) {
    case BraidKind::Leaf:
      switch (phi.leafBody().kind()) {
        case ProcKind::Par: return "(νν)(·|·)";
        case ProcKind::Choice: return "(νν)(·+·)";
        case ProcKind::Nu: return "(νν)ν·";
        case ProcKind::Bang: return "(νν)!·";
        default: return "(νν)·";
      }
    case BraidKind::ChoiceL: return "(" + compact(phi.sub()) + "+·)";
    case BraidKind::ChoiceR: return "(·+" + compact(phi.sub()) + ")";
    case BraidKind::ParL: return "(" + compact(phi.sub()) + "|·)";
    case BraidKind::ParR: return "(·|" + compact(phi.sub()) + ")";
    case BraidKind::Nu: return "ν" + compact(phi.sub());
    case BraidKind::Bang: return "!" + compact(phi.sub());
  }
  return "?";
}

inline std::string compact(const Braiding& g) {
  if (std::holds_alternative<BraidEq>(g)) return "=";
  if (std::holds_alternative<BraidSwapTop>(g)) return "swap";
  return compact(std::get<BoundBraid>(g));
}

/// Left and right end states of a braid witness.
inline Process braidSource(const BoundBraid& phi);
inline Process braidTarget(const BoundBraid& phi);

namespace detail {

inline Process braidSide(const BoundBraid& phi, bool right) {
  switch (phi.kind()) {
    case BraidKind::Leaf: {
      const auto& p = phi.leafBody();
      auto body = right ? apply(Renaming::swap(phi.context()), p) : p;
      return Process::nu(Process::nu(body));
    }
    case BraidKind::ChoiceL:
      return Process::choice(braidSide(phi.sub(), right), phi.sibling());
    case BraidKind::ChoiceR:
      return Process::choice(phi.sibling(), braidSide(phi.sub(), right));
    case BraidKind::ParL:
      return Process::par(braidSide(phi.sub(), right), phi.sibling());
    case BraidKind::ParR:
      return Process::par(phi.sibling(), braidSide(phi.sub(), right));
    case BraidKind::Nu:
      return Process::nu(braidSide(phi.sub(), right));
    case BraidKind::Bang:
      return Process::bang(braidSide(phi.sub(), right));
  }
  throw Error("braid: unknown constructor");
}

inline std::optional<BoundBraid> findBraid(const Process& q, const Process& qp, Context ctx) {
  if (q.kind() != qp.kind()) return std::nullopt;
  if (q.kind() == ProcKind::Nu && q.body().kind() == ProcKind::Nu && qp.body().kind() == ProcKind::Nu) {
    const auto& p = q.body().body();
    if (p == apply(Renaming::swap(ctx), qp.body().body())) return BoundBraid::leaf(p, ctx);
  }
  switch (q.kind()) {
    case ProcKind::Choice:
    case ProcKind::Par: {
      const bool choice = q.kind() == ProcKind::Choice;
      if (q.left() == qp.left()) {
        if (auto s = findBraid(q.right(), qp.right(), ctx)) {
          return BoundBraid::congruence(choice ? BraidKind::ChoiceR : BraidKind::ParR, q.left(), ctx, *s);
        }
      } else if (q.right() == qp.right()) {
        if (auto s = findBraid(q.left(), qp.left(), ctx)) {
          return BoundBraid::congruence(choice ? BraidKind::ChoiceL : BraidKind::ParL, q.right(), ctx, *s);
        }
      }
      return std::nullopt;
    }
    case ProcKind::Nu:
      if (auto s = findBraid(q.body(), qp.body(), ctx + 1)) {
        return BoundBraid::congruence(BraidKind::Nu, Process::hole(), ctx, *s);
      }
      return std::nullopt;
    case ProcKind::Bang:
      if (auto s = findBraid(q.body(), qp.body(), ctx)) {
        return BoundBraid::congruence(BraidKind::Bang, Process::hole(), ctx, *s);
      }
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

}  // namespace detail

inline Process braidSource(const BoundBraid& phi) { return detail::braidSide(phi, false); }
inline Process braidTarget(const BoundBraid& phi) { return detail::braidSide(phi, true); }

/// Re-checks a witness: leaf side conditions hold by construction of
/// braidTarget, so it suffices to compare both sides with the given states.
inline bool checkBraid(const BoundBraid& phi, const Process& q, const Process& qp) {
  return braidSource(phi) == q && braidTarget(phi) == qp;
}

/// The witness relating Q (reached by t·u/t) to Q' (reached by u·t/u).
inline Braiding braidingBetween(const Process& q, const Process& qp, Context ctx) {
  if (q == qp) return BraidEq{};
  if (ctx >= 2 && apply(Renaming::swap(ctx - 2), q) == qp) return BraidSwapTop{q, ctx};
  if (auto phi = detail::findBraid(q, qp, ctx)) return *phi;
  throw Error("computeBraiding: no witness relates the end states");
}

inline Braiding computeBraiding(const Transition& t, const Transition& u) {
  const auto tu = residual(u, t);
  const auto ut = residual(t, u);
  if (tu.targetContext() != ut.targetContext()) throw Error("computeBraiding: end contexts differ");
  return braidingBetween(tu.target(), ut.target(), tu.targetContext());
}

inline Process braidIsoFwd(const BoundBraid& phi, const Process& r) {
  if (r.isHole()) return r;
  switch (phi.kind()) {
    case BraidKind::Leaf: {
      if (r.kind() != ProcKind::Nu) break;
      if (r.body().isHole()) return r;
      if (r.body().kind() != ProcKind::Nu) break;
      const auto sw = Renaming::swap(phi.context());
      return Process::nu(Process::nu(renF(sw, phi.leafBody(), sw, r.body().body())));
    }
    case BraidKind::ChoiceL:
    case BraidKind::ParL:
    case BraidKind::ChoiceR:
    case BraidKind::ParR: {
      const bool choice = phi.kind() == BraidKind::ChoiceL || phi.kind() == BraidKind::ChoiceR;
      const bool left = phi.kind() == BraidKind::ChoiceL || phi.kind() == BraidKind::ParL;
      if (r.kind() != (choice ? ProcKind::Choice : ProcKind::Par)) break;
      auto l = left ? braidIsoFwd(phi.sub(), r.left()) : r.left();
      auto rr = left ? r.right() : braidIsoFwd(phi.sub(), r.right());
      return choice ? Process::choice(l, rr) : Process::par(l, rr);
    }
    case BraidKind::Nu:
      if (r.kind() != ProcKind::Nu) break;
      return Process::nu(braidIsoFwd(phi.sub(), r.body()));
    case BraidKind::Bang:
      if (r.kind() != ProcKind::Bang) break;
      return Process::bang(braidIsoFwd(phi.sub(), r.body()));
  }
  throw Error("braidIso: slice does not match the braid");
}

inline Process braidIsoBwd(const BoundBraid& phi, const Process& rp) {
  if (rp.isHole()) return rp;
  switch (phi.kind()) {
    case BraidKind::Leaf: {
      if (rp.kind() != ProcKind::Nu) break;
      if (rp.body().isHole()) return rp;
      if (rp.body().kind() != ProcKind::Nu) break;
      const auto sw = Renaming::swap(phi.context());
      const auto pp = apply(sw, phi.leafBody());
      return Process::nu(Process::nu(renF(sw, pp, sw, rp.body().body())));
    }
    case BraidKind::ChoiceL:
    case BraidKind::ParL:
    case BraidKind::ChoiceR:
    case BraidKind::ParR: {
      const bool choice = phi.kind() == BraidKind::ChoiceL || phi.kind() == BraidKind::ChoiceR;
      const bool left = phi.kind() == BraidKind::ChoiceL || phi.kind() == BraidKind::ParL;
      if (rp.kind() != (choice ? ProcKind::Choice : ProcKind::Par)) break;
      auto l = left ? braidIsoBwd(phi.sub(), rp.left()) : rp.left();
      auto rr = left ? rp.right() : braidIsoBwd(phi.sub(), rp.right());
      return choice ? Process::choice(l, rr) : Process::par(l, rr);
    }
    case BraidKind::Nu:
      if (rp.kind() != ProcKind::Nu) break;
      return Process::nu(braidIsoBwd(phi.sub(), rp.body()));
    case BraidKind::Bang:
      if (rp.kind() != ProcKind::Bang) break;
      return Process::bang(braidIsoBwd(phi.sub(), rp.body()));
  }
  throw Error("braidIso: slice does not match the braid");
}

inline Process cofinalIsoFwd(const Braiding& g, const Process& r) {
  if (std::holds_alternative<BraidEq>(g)) return r;
  if (const auto* s = std::get_if<BraidSwapTop>(&g)) {
    const auto sw = Renaming::swap(s->context - 2);
    return renF(sw, s->left, sw, r);
  }
  return braidIsoFwd(std::get<BoundBraid>(g), r);
}

inline Process cofinalIsoBwd(const Braiding& g, const Process& rp) {
  if (std::holds_alternative<BraidEq>(g)) return rp;
  if (const auto* s = std::get_if<BraidSwapTop>(&g)) {
    const auto sw = Renaming::swap(s->context - 2);
    return unren(sw, s->left, rp).second;
  }
  return braidIsoBwd(std::get<BoundBraid>(g), rp);
}

/// Left-hand end state Q of a braiding; Eq carries none.
inline Process braidingLeft(const Braiding& g, const Process& fallback) {
  if (const auto* s = std::get_if<BraidSwapTop>(&g)) return s->left;
  if (const auto* b = std::get_if<BoundBraid>(&g)) return braidSource(*b);
  return fallback;
}

struct PentagonReport {
  bool holds = true;
  std::size_t forwardChecked = 0;
  std::size_t backwardChecked = 0;
};

/// Both pentagon equations, pointwise over every source slice (forward) and
/// every slice of the u-first end state (backward).
inline PentagonReport checkPentagonReport(const Transition& t, const Transition& u,
                                          std::size_t maxNodes = kDefaultSliceCap) {
  PentagonReport rep;
  const auto tu = residual(u, t);
  const auto ut = residual(t, u);
  const auto g = braidingBetween(tu.target(), ut.target(), tu.targetContext());
  for (const auto& r : enumerateSlices(t.source(), maxNodes)) {
    const auto viaT = cofinalIsoFwd(g, fwdStepNoAction(tu, fwdStepNoAction(t, r)));
    const auto viaU = fwdStepNoAction(ut, fwdStepNoAction(u, r));
    ++rep.forwardChecked;
    if (!(viaT == viaU)) rep.holds = false;
  }
  for (const auto& rp : enumerateSlices(ut.target(), maxNodes)) {
    const auto viaT = bwdStepNoAction(t, bwdStepNoAction(tu, cofinalIsoBwd(g, rp)));
    const auto viaU = bwdStepNoAction(u, bwdStepNoAction(ut, rp));
    ++rep.backwardChecked;
    if (!(viaT == viaU)) rep.holds = false;
  }
  return rep;
}

inline bool checkPentagon(const Transition& t, const Transition& u, std::size_t maxNodes = kDefaultSliceCap) {
  return checkPentagonReport(t, u, maxNodes).holds;
}

struct Permuted {
  Trace trace;
  Braiding braiding;
  /// Enumeration indices of the two swapped steps in the new trace.
  std::size_t firstIndex = 0;
  std::size_t secondIndex = 0;
};

/// Swap steps i and i+1. The braiding relates the old end state to the new
/// one; interior swaps must have a trivial braiding.
inline Permuted permuteAdjacent(const Trace& tr, std::size_t i) {
  if (i + 1 >= tr.steps.size()) throw Error("permute: position out of range");
  const auto& t = tr.steps[i];
  const auto& s = tr.steps[i + 1];
  const auto candidates = enumerateTransitions(t.source(), t.context());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const auto& u = candidates[k];
    if (u == t || !concurrent(t, u)) continue;
    if (!(residual(u, t) == s)) continue;
    const auto tu = residual(t, u);
    const auto g = braidingBetween(s.target(), tu.target(), s.targetContext());
    const bool last = i + 2 == tr.steps.size();
    if (!std::holds_alternative<BraidEq>(g) && !last) {
      throw Error("permute: non-trivial braiding at an interior position is not supported");
    }
    Trace out = tr;
    out.steps[i] = u;
    out.steps[i + 1] = tu;
    std::size_t second = 0;
    const auto next = enumerateTransitions(u.target(), u.targetContext());
    for (std::size_t j = 0; j < next.size(); ++j) {
      if (next[j] == tu) second = j;
    }
    return {out, g, k, second};
  }
  throw Error("permute: steps " + std::to_string(i) + " and " + std::to_string(i + 1) +
              " are not concurrent");
}

}  // namespace pislice
