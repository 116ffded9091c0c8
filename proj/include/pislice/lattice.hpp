#pragma once

// Slice order: the least compatible order with the hole at the bottom. Only
// output payloads are erasable among name positions.

#include <cstddef>
#include <vector>

#include "syntax.hpp"

namespace pislice {

/// A slice paired with the term it was cut from.
template <class T>
struct SliceOf {
  T reference;
  T value;
};

inline bool leq(const Payload& a, const Payload& b) { return a.isHole() || a == b; }

inline Payload meet(const Payload& a, const Payload& b) {
  return a == b ? a : Payload::hole();
}

inline Payload join(const Payload& a, const Payload& b) {
  if (a.isHole()) return b;
  if (b.isHole() || a == b) return a;
  throw Error("join: payloads have no common upper bound");
}

inline bool leq(const Action& a, const Action& b) {
  if (a.isHole()) return true;
  if (a.kind != b.kind) return false;
  if (a.kind == ActionKind::Output) return a.channel == b.channel && leq(a.payload, b.payload);
  return a == b;
}

inline Action meet(const Action& a, const Action& b) {
  if (a.isHole() || b.isHole()) return Action::hole();
  if (a.kind != b.kind || a.channel != b.channel) {
    throw Error("meet: actions are not slices of one action");
  }
  if (a.kind == ActionKind::Output) return Action::output(a.channel, meet(a.payload, b.payload));
  return a;
}

inline Action join(const Action& a, const Action& b) {
  if (a.isHole()) return b;
  if (b.isHole()) return a;
  if (a.kind != b.kind || a.channel != b.channel) {
    throw Error("join: actions have no common upper bound");
  }
  if (a.kind == ActionKind::Output) return Action::output(a.channel, join(a.payload, b.payload));
  return a;
}

inline bool leq(const Process& a, const Process& b) {
  if (a.isHole()) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ProcKind::Hole:
    case ProcKind::Nil:
      return true;
    case ProcKind::Input:
      return a.channel() == b.channel() && leq(a.body(), b.body());
    case ProcKind::Output:
      return a.channel() == b.channel() && leq(a.payload(), b.payload()) &&
             leq(a.body(), b.body());
    case ProcKind::Choice:
    case ProcKind::Par:
      return leq(a.left(), b.left()) && leq(a.right(), b.right());
    case ProcKind::Nu:
    case ProcKind::Bang:
      return leq(a.body(), b.body());
  }
  return false;
}

namespace detail {

inline void requireSameShape(const Process& a, const Process& b, const char* op) {
  bool ok = a.kind() == b.kind();
  if (ok && (a.kind() == ProcKind::Input || a.kind() == ProcKind::Output)) {
    ok = a.channel() == b.channel();
  }
  if (!ok) throw Error(std::string(op) + ": processes are not slices of one term");
}

}  // namespace detail

inline Process meet(const Process& a, const Process& b) {
  if (a.isHole() || b.isHole()) return Process::hole();
  if (a == b) return a;
  detail::requireSameShape(a, b, "meet");
  switch (a.kind()) {
    case ProcKind::Input:
      return Process::input(a.channel(), meet(a.body(), b.body()));
    case ProcKind::Output:
      return Process::output(a.channel(), meet(a.payload(), b.payload()), meet(a.body(), b.body()));
    case ProcKind::Choice:
      return Process::choice(meet(a.left(), b.left()), meet(a.right(), b.right()));
    case ProcKind::Par:
      return Process::par(meet(a.left(), b.left()), meet(a.right(), b.right()));
    case ProcKind::Nu:
      return Process::nu(meet(a.body(), b.body()));
    case ProcKind::Bang:
      return Process::bang(meet(a.body(), b.body()));
    default:
      return a;
  }
}

inline Process join(const Process& a, const Process& b) {
  if (a.isHole()) return b;
  if (b.isHole()) return a;
  if (a == b) return a;
  detail::requireSameShape(a, b, "join");
  switch (a.kind()) {
    case ProcKind::Input:
      return Process::input(a.channel(), join(a.body(), b.body()));
    case ProcKind::Output:
      return Process::output(a.channel(), join(a.payload(), b.payload()), join(a.body(), b.body()));
    case ProcKind::Choice:
      return Process::choice(join(a.left(), b.left()), join(a.right(), b.right()));
    case ProcKind::Par:
      return Process::par(join(a.left(), b.left()), join(a.right(), b.right()));
    case ProcKind::Nu:
      return Process::nu(join(a.body(), b.body()));
    case ProcKind::Bang:
      return Process::bang(join(a.body(), b.body()));
    default:
      return a;
  }
}

/// Top of the action slice lattice is the action itself.
inline std::vector<Action> enumerateSlices(const Action& a) {
  if (a.isHole()) return {a};
  if (a.kind == ActionKind::Output && !a.payload.isHole()) {
    return {Action::hole(), Action::output(a.channel, Payload::hole()), a};
  }
  return {Action::hole(), a};
}

inline std::vector<Payload> enumerateSlices(const Payload& z) {
  if (z.isHole()) return {z};
  return {Payload::hole(), z};
}

/// Slice count without materialising the lattice.
inline std::size_t sliceCount(const Process& p) {
  switch (p.kind()) {
    case ProcKind::Hole:
      return 1;
    case ProcKind::Nil:
      return 2;
    case ProcKind::Input:
      return 1 + sliceCount(p.body());
    case ProcKind::Output:
      return 1 + (p.payload().isHole() ? 1 : 2) * sliceCount(p.body());
    case ProcKind::Choice:
    case ProcKind::Par:
      return 1 + sliceCount(p.left()) * sliceCount(p.right());
    case ProcKind::Nu:
    case ProcKind::Bang:
      return 1 + sliceCount(p.body());
  }
  return 0;
}

inline constexpr std::size_t kDefaultSliceCap = 12;

/// All of ↓p: the hole first, then each shape-preserving slice with children
/// varying in enumeration order (left component outermost).
inline std::vector<Process> enumerateSlices(const Process& p, std::size_t maxNodes = kDefaultSliceCap) {
  if (p.nodeCount() > maxNodes) {
    throw Error("enumerateSlices: reference has " + std::to_string(p.nodeCount()) +
                " nodes, cap is " + std::to_string(maxNodes));
  }
  std::vector<Process> out{Process::hole()};
  switch (p.kind()) {
    case ProcKind::Hole:
      break;
    case ProcKind::Nil:
      out.push_back(p);
      break;
    case ProcKind::Input:
      for (const auto& b : enumerateSlices(p.body(), maxNodes)) {
        out.push_back(Process::input(p.channel(), b));
      }
      break;
    case ProcKind::Output: {
      const auto bodies = enumerateSlices(p.body(), maxNodes);
      for (const auto& z : enumerateSlices(p.payload())) {
        for (const auto& b : bodies) out.push_back(Process::output(p.channel(), z, b));
      }
      break;
    }
    case ProcKind::Choice:
    case ProcKind::Par: {
      const auto ls = enumerateSlices(p.left(), maxNodes);
      const auto rs = enumerateSlices(p.right(), maxNodes);
      for (const auto& l : ls) {
        for (const auto& r : rs) {
          out.push_back(p.kind() == ProcKind::Choice ? Process::choice(l, r) : Process::par(l, r));
        }
      }
      break;
    }
    case ProcKind::Nu:
      for (const auto& b : enumerateSlices(p.body(), maxNodes)) out.push_back(Process::nu(b));
      break;
    case ProcKind::Bang:
      for (const auto& b : enumerateSlices(p.body(), maxNodes)) out.push_back(Process::bang(b));
      break;
  }
  return out;
}

}  // namespace pislice
