#pragma once

// Renamings as finite maps into payloads, the distinguished push / pop /
// swap, and the two renaming-level Galois connections.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "lattice.hpp"
#include "syntax.hpp"

namespace pislice {

/// Total map from [0, source) to payloads over `target`. Hole entries mark a
/// sliced renaming.
struct Renaming {
  Context target = 0;
  std::vector<Payload> map;

  Context source() const { return map.size(); }
  const Payload& operator[](std::size_t i) const { return map.at(i); }

  friend bool operator==(const Renaming&, const Renaming&) = default;

  static Renaming identity(Context ctx) {
    Renaming r{ctx, {}};
    for (std::uint32_t i = 0; i < ctx; ++i) r.map.push_back(Payload::ref(i));
    return r;
  }

  /// Γ → Γ+1, x ↦ x+1.
  static Renaming push(Context ctx) {
    Renaming r{ctx + 1, {}};
    for (std::uint32_t i = 0; i < ctx; ++i) r.map.push_back(Payload::ref(i + 1));
    return r;
  }

  /// Γ+1 → Γ, 0 ↦ z, x+1 ↦ x.
  static Renaming pop(Payload z, Context ctx) {
    Renaming r{ctx, {z}};
    for (std::uint32_t i = 0; i < ctx; ++i) r.map.push_back(Payload::ref(i));
    return r;
  }

  /// Γ+2 → Γ+2, exchanging 0 and 1.
  static Renaming swap(Context ctx) {
    Renaming r = identity(ctx + 2);
    std::swap(r.map[0], r.map[1]);
    return r;
  }

  /// Least slice: every entry erased.
  static Renaming erased(Context source, Context target) {
    return Renaming{target, std::vector<Payload>(source, Payload::hole())};
  }

  bool isSliced() const {
    for (const auto& z : map) {
      if (z.isHole()) return true;
    }
    return false;
  }
};

inline Payload shiftUp(Payload z) {
  return z.isHole() ? z : Payload::ref(z.name().index + 1);
}

/// (ρ+1) 0 = 0, (ρ+1)(x+1) = push(ρ x).
inline Renaming lift(const Renaming& rho) {
  Renaming r{rho.target + 1, {Payload::ref(0)}};
  for (const auto& z : rho.map) r.map.push_back(shiftUp(z));
  return r;
}

inline Renaming compose(const Renaming& outer, const Renaming& inner) {
  if (inner.target != outer.source()) throw Error("compose: context mismatch");
  Renaming r{outer.target, {}};
  for (const auto& z : inner.map) r.map.push_back(z.isHole() ? z : outer[z.name().index]);
  return r;
}

inline bool leq(const Renaming& a, const Renaming& b) {
  if (a.source() != b.source() || a.target != b.target) throw Error("leq: renaming context mismatch");
  for (std::size_t i = 0; i < a.map.size(); ++i) {
    if (!leq(a.map[i], b.map[i])) return false;
  }
  return true;
}

inline Renaming meet(const Renaming& a, const Renaming& b) {
  if (a.source() != b.source()) throw Error("meet: renaming context mismatch");
  Renaming r{a.target, {}};
  for (std::size_t i = 0; i < a.map.size(); ++i) r.map.push_back(meet(a.map[i], b.map[i]));
  return r;
}

inline Renaming join(const Renaming& a, const Renaming& b) {
  if (a.source() != b.source()) throw Error("join: renaming context mismatch");
  Renaming r{a.target, {}};
  for (std::size_t i = 0; i < a.map.size(); ++i) r.map.push_back(join(a.map[i], b.map[i]));
  return r;
}

/// Every pointwise slice of ρ.
inline std::vector<Renaming> enumerateSlices(const Renaming& rho) {
  std::vector<Renaming> out{Renaming{rho.target, {}}};
  for (const auto& z : rho.map) {
    std::vector<Renaming> next;
    for (const auto& r : out) {
      for (const auto& s : enumerateSlices(z)) {
        auto copy = r;
        copy.map.push_back(s);
        next.push_back(std::move(copy));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline Payload apply(const Renaming& rho, Name x) {
  if (x.index >= rho.source()) throw Error("apply: index out of the renaming's domain");
  return rho[x.index];
}

inline Payload apply(const Renaming& rho, Payload z) {
  return z.isHole() ? z : apply(rho, z.name());
}

namespace detail {

inline Name subject(const Renaming& rho, Name x) {
  const auto z = apply(rho, x);
  if (z.isHole()) throw Error("rename: subject position mapped to the hole");
  return z.name();
}

}  // namespace detail

inline Action apply(const Renaming& rho, const Action& a) {
  switch (a.kind) {
    case ActionKind::Hole:
    case ActionKind::Tau:
      return a;
    case ActionKind::Input:
      return Action::input(detail::subject(rho, a.channel));
    case ActionKind::BoundOutput:
      return Action::boundOutput(detail::subject(rho, a.channel));
    case ActionKind::Output:
      return Action::output(detail::subject(rho, a.channel), apply(rho, a.payload));
  }
  return a;
}

inline Process apply(const Renaming& rho, const Process& p) {
  switch (p.kind()) {
    case ProcKind::Hole:
    case ProcKind::Nil:
      return p;
    case ProcKind::Input:
      return Process::input(detail::subject(rho, p.channel()), apply(lift(rho), p.body()));
    case ProcKind::Output:
      return Process::output(detail::subject(rho, p.channel()), apply(rho, p.payload()),
                             apply(rho, p.body()));
    case ProcKind::Choice:
      return Process::choice(apply(rho, p.left()), apply(rho, p.right()));
    case ProcKind::Par:
      return Process::par(apply(rho, p.left()), apply(rho, p.right()));
    case ProcKind::Nu:
      return Process::nu(apply(lift(rho), p.body()));
    case ProcKind::Bang:
      return Process::bang(apply(rho, p.body()));
  }
  return p;
}

// Name application ρ x.

inline Payload nameGCFwd(const Renaming& /*rho*/, Name x, const Renaming& sigma, Payload z) {
  return z.isHole() ? z : apply(sigma, x);
}

/// Least slice of ρ sending x to z.
inline Renaming mapsTo(const Renaming& rho, Name x, Payload z) {
  auto r = Renaming::erased(rho.source(), rho.target);
  r.map.at(x.index) = z;
  return r;
}

inline std::pair<Renaming, Payload> nameGCBwd(const Renaming& rho, Name x, Payload z) {
  return {mapsTo(rho, x, z), z.isHole() ? Payload::hole() : Payload{x}};
}

// Process renaming ρ P. Subject positions follow the reference ρ; payloads
// follow the slice σ.

inline Process renF(const Renaming& rho, const Process& p, const Renaming& sigma, const Process& r) {
  if (r.isHole()) return r;
  if (r.kind() != p.kind()) throw Error("renF: slice does not match reference");
  switch (p.kind()) {
    case ProcKind::Hole:
    case ProcKind::Nil:
      return r;
    case ProcKind::Input:
      return Process::input(detail::subject(rho, p.channel()),
                            renF(lift(rho), p.body(), lift(sigma), r.body()));
    case ProcKind::Output: {
      const auto z = r.payload().isHole() ? Payload::hole() : apply(sigma, p.payload());
      return Process::output(detail::subject(rho, p.channel()), z,
                             renF(rho, p.body(), sigma, r.body()));
    }
    case ProcKind::Choice:
      return Process::choice(renF(rho, p.left(), sigma, r.left()),
                             renF(rho, p.right(), sigma, r.right()));
    case ProcKind::Par:
      return Process::par(renF(rho, p.left(), sigma, r.left()),
                          renF(rho, p.right(), sigma, r.right()));
    case ProcKind::Nu:
      return Process::nu(renF(lift(rho), p.body(), lift(sigma), r.body()));
    case ProcKind::Bang:
      return Process::bang(renF(rho, p.body(), sigma, r.body()));
  }
  return r;
}

namespace detail {

/// Inverse of lift on slices: drop entry 0, un-push the rest.
inline Renaming unlift(const Renaming& s) {
  if (s.source() == 0 || s.target == 0) throw Error("unlift: empty renaming");
  Renaming r{s.target - 1, {}};
  for (std::size_t i = 1; i < s.map.size(); ++i) {
    const auto z = s.map[i];
    if (z.isHole()) {
      r.map.push_back(z);
    } else if (z.name().index == 0) {
      throw Error("unlift: successor entry maps to 0");
    } else {
      r.map.push_back(Payload::ref(z.name().index - 1));
    }
  }
  return r;
}

}  // namespace detail

/// Lower adjoint of renF: the least (σ, R) with renF(σ, R) ≥ R'.
inline std::pair<Renaming, Process> unren(const Renaming& rho, const Process& p, const Process& rp) {
  auto none = Renaming::erased(rho.source(), rho.target);
  if (rp.isHole()) return {none, rp};
  if (rp.kind() != p.kind()) throw Error("unren: slice does not match reference");
  switch (p.kind()) {
    case ProcKind::Hole:
    case ProcKind::Nil:
      return {none, rp};
    case ProcKind::Input: {
      auto [s, b] = unren(lift(rho), p.body(), rp.body());
      return {detail::unlift(s), Process::input(p.channel(), b)};
    }
    case ProcKind::Output: {
      auto [s, b] = unren(rho, p.body(), rp.body());
      const auto [s2, z] = nameGCBwd(rho, p.payload().name(), rp.payload());
      return {join(s, s2), Process::output(p.channel(), z, b)};
    }
    case ProcKind::Choice:
    case ProcKind::Par: {
      auto [s1, l] = unren(rho, p.left(), rp.left());
      auto [s2, r] = unren(rho, p.right(), rp.right());
      auto q = p.kind() == ProcKind::Choice ? Process::choice(l, r) : Process::par(l, r);
      return {join(s1, s2), q};
    }
    case ProcKind::Nu: {
      auto [s, b] = unren(lift(rho), p.body(), rp.body());
      return {detail::unlift(s), Process::nu(b)};
    }
    case ProcKind::Bang: {
      auto [s, b] = unren(rho, p.body(), rp.body());
      return {s, Process::bang(b)};
    }
  }
  return {none, rp};
}

}  // namespace pislice
