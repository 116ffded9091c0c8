#pragma once

// Core terms of the calculus over de Bruijn indices. Processes double as
// slices: the erased form (hole) is an ordinary constructor.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

namespace pislice {

/// Number of free indices in scope.
using Context = std::size_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Name {
  std::uint32_t index = 0;

  constexpr Name() = default;
  constexpr explicit Name(std::uint32_t i) : index(i) {}

  friend constexpr auto operator<=>(const Name&, const Name&) = default;
};

/// Argument position of an output: either erased or a retained name.
class Payload {
 public:
  constexpr Payload() = default;
  constexpr explicit Payload(Name n) : raw_(static_cast<std::int64_t>(n.index)) {}

  static constexpr Payload hole() { return Payload{}; }
  static constexpr Payload ref(std::uint32_t i) { return Payload{Name{i}}; }

  constexpr bool isHole() const { return raw_ < 0; }
  constexpr Name name() const {
    if (isHole()) throw Error("payload: hole has no name");
    return Name{static_cast<std::uint32_t>(raw_)};
  }

  friend constexpr bool operator==(const Payload&, const Payload&) = default;

 private:
  std::int64_t raw_ = -1;
};

enum class ActionKind : std::uint8_t { Hole, Input, Output, BoundOutput, Tau };

struct Action {
  ActionKind kind = ActionKind::Hole;
  Name channel{};
  Payload payload{};

  static constexpr Action hole() { return {}; }
  static constexpr Action input(Name x) { return {ActionKind::Input, x, {}}; }
  static constexpr Action output(Name x, Payload z) { return {ActionKind::Output, x, z}; }
  static constexpr Action boundOutput(Name x) { return {ActionKind::BoundOutput, x, {}}; }
  static constexpr Action tau() { return {ActionKind::Tau, {}, {}}; }

  constexpr bool isHole() const { return kind == ActionKind::Hole; }
  /// Input and bound output open the context by one. Hole has no
  /// classification of its own.
  constexpr bool isBound() const {
    return kind == ActionKind::Input || kind == ActionKind::BoundOutput;
  }
  constexpr bool hasChannel() const {
    return kind == ActionKind::Input || kind == ActionKind::Output ||
           kind == ActionKind::BoundOutput;
  }

  friend constexpr bool operator==(const Action&, const Action&) = default;
};

enum class ProcKind : std::uint8_t { Hole, Nil, Input, Output, Choice, Par, Nu, Bang };

/// Immutable process term with structural equality. Copies share structure.
class Process {
 public:
  /// Default-constructed process is the hole.
  Process();

  static Process hole();
  static Process nil();
  static Process input(Name x, Process body);
  static Process output(Name x, Payload z, Process body);
  static Process choice(Process left, Process right);
  static Process par(Process left, Process right);
  static Process nu(Process body);
  static Process bang(Process body);

  ProcKind kind() const;
  bool isHole() const { return kind() == ProcKind::Hole; }

  Name channel() const;
  Payload payload() const;
  /// Continuation of a prefix, or operand of nu / bang.
  const Process& body() const;
  const Process& left() const;
  const Process& right() const;

  std::size_t nodeCount() const;
  std::size_t hash() const;

  friend bool operator==(const Process& a, const Process& b);

  // Shared representation; not part of the interface.
  struct Node;

 private:
  explicit Process(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Process make(ProcKind k, Name x, Payload z, Process l, Process r);

  std::shared_ptr<const Node> node_;
};

struct Process::Node {
  ProcKind kind = ProcKind::Hole;
  Name x{};
  Payload z{};
  Process left;  // body for unary forms
  Process right;
  std::size_t size = 1;
  std::size_t hash = 0;

  // Leaf constructor used for the shared hole/nil instances; avoids the
  // default Process() recursion.
  struct LeafTag {};
  Node(LeafTag, ProcKind k)
      : kind(k), left(nullptr), right(nullptr), size(1),
        hash(std::hash<int>{}(static_cast<int>(k)) * 0x9e3779b97f4a7c15ULL) {}
  Node(ProcKind k, Name xx, Payload zz, Process l, Process r);
};

namespace detail {

inline std::size_t hashMix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

inline const std::shared_ptr<const Process::Node>& holeNode();
inline const std::shared_ptr<const Process::Node>& nilNode();

constexpr bool isUnary(ProcKind k) {
  return k == ProcKind::Input || k == ProcKind::Output || k == ProcKind::Nu ||
         k == ProcKind::Bang;
}
constexpr bool isBinary(ProcKind k) { return k == ProcKind::Choice || k == ProcKind::Par; }

}  // namespace detail

inline Process::Node::Node(ProcKind k, Name xx, Payload zz, Process l, Process r)
    : kind(k), x(xx), z(zz), left(std::move(l)), right(std::move(r)) {
  std::size_t h = std::hash<int>{}(static_cast<int>(k)) * 0x9e3779b97f4a7c15ULL;
  size = 1;
  if (k == ProcKind::Input || k == ProcKind::Output) {
    h = detail::hashMix(h, x.index);
  }
  if (k == ProcKind::Output) {
    h = detail::hashMix(h, z.isHole() ? 0x51ed27ULL : z.name().index + 1);
  }
  if (detail::isUnary(k) || detail::isBinary(k)) {
    size += left.nodeCount();
    h = detail::hashMix(h, left.hash());
  }
  if (detail::isBinary(k)) {
    size += right.nodeCount();
    h = detail::hashMix(h, right.hash());
  }
  hash = h;
}

namespace detail {

inline const std::shared_ptr<const Process::Node>& holeNode() {
  static const auto n =
      std::make_shared<const Process::Node>(Process::Node::LeafTag{}, ProcKind::Hole);
  return n;
}

inline const std::shared_ptr<const Process::Node>& nilNode() {
  static const auto n =
      std::make_shared<const Process::Node>(Process::Node::LeafTag{}, ProcKind::Nil);
  return n;
}

}  // namespace detail

inline Process::Process() : node_(detail::holeNode()) {}

inline Process Process::hole() { return Process{}; }
inline Process Process::nil() { return Process{detail::nilNode()}; }

inline Process Process::make(ProcKind k, Name x, Payload z, Process l, Process r) {
  return Process{std::make_shared<const Node>(k, x, z, std::move(l), std::move(r))};
}

inline Process Process::input(Name x, Process body) {
  return make(ProcKind::Input, x, {}, std::move(body), Process{nullptr});
}
inline Process Process::output(Name x, Payload z, Process body) {
  return make(ProcKind::Output, x, z, std::move(body), Process{nullptr});
}
inline Process Process::choice(Process left, Process right) {
  return make(ProcKind::Choice, {}, {}, std::move(left), std::move(right));
}
inline Process Process::par(Process left, Process right) {
  return make(ProcKind::Par, {}, {}, std::move(left), std::move(right));
}
inline Process Process::nu(Process body) {
  return make(ProcKind::Nu, {}, {}, std::move(body), Process{nullptr});
}
inline Process Process::bang(Process body) {
  return make(ProcKind::Bang, {}, {}, std::move(body), Process{nullptr});
}

inline ProcKind Process::kind() const { return node_->kind; }

inline Name Process::channel() const {
  if (kind() != ProcKind::Input && kind() != ProcKind::Output) {
    throw Error("process: channel of a non-prefix");
  }
  return node_->x;
}

inline Payload Process::payload() const {
  if (kind() != ProcKind::Output) throw Error("process: payload of a non-output");
  return node_->z;
}

inline const Process& Process::body() const {
  if (!detail::isUnary(kind())) throw Error("process: body of a non-unary form");
  return node_->left;
}

inline const Process& Process::left() const {
  if (!detail::isBinary(kind())) throw Error("process: left of a non-binary form");
  return node_->left;
}

inline const Process& Process::right() const {
  if (!detail::isBinary(kind())) throw Error("process: right of a non-binary form");
  return node_->right;
}

inline std::size_t Process::nodeCount() const { return node_ ? node_->size : 0; }
inline std::size_t Process::hash() const { return node_ ? node_->hash : 0; }

inline bool operator==(const Process& a, const Process& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.hash != y.hash || x.kind != y.kind || x.size != y.size) return false;
  switch (x.kind) {
    case ProcKind::Hole:
    case ProcKind::Nil:
      return true;
    case ProcKind::Input:
      return x.x == y.x && x.left == y.left;
    case ProcKind::Output:
      return x.x == y.x && x.z == y.z && x.left == y.left;
    case ProcKind::Nu:
    case ProcKind::Bang:
      return x.left == y.left;
    case ProcKind::Choice:
    case ProcKind::Par:
      return x.left == y.left && x.right == y.right;
  }
  return false;
}

/// Every free index (and payload) is below `ctx`; input and nu bodies are
/// checked one level deeper.
inline bool wellFormed(const Process& p, Context ctx) {
  switch (p.kind()) {
    case ProcKind::Hole:
    case ProcKind::Nil:
      return true;
    case ProcKind::Input:
      return p.channel().index < ctx && wellFormed(p.body(), ctx + 1);
    case ProcKind::Output: {
      const auto z = p.payload();
      if (!z.isHole() && z.name().index >= ctx) return false;
      return p.channel().index < ctx && wellFormed(p.body(), ctx);
    }
    case ProcKind::Choice:
    case ProcKind::Par:
      return wellFormed(p.left(), ctx) && wellFormed(p.right(), ctx);
    case ProcKind::Nu:
      return wellFormed(p.body(), ctx + 1);
    case ProcKind::Bang:
      return wellFormed(p.body(), ctx);
  }
  return false;
}

inline bool wellFormed(const Action& a, Context ctx) {
  if (a.hasChannel() && a.channel.index >= ctx) return false;
  if (a.kind == ActionKind::Output && !a.payload.isHole() && a.payload.name().index >= ctx) {
    return false;
  }
  return true;
}

inline bool containsHole(const Process& p) {
  switch (p.kind()) {
    case ProcKind::Hole:
      return true;
    case ProcKind::Nil:
      return false;
    case ProcKind::Output:
      return p.payload().isHole() || containsHole(p.body());
    case ProcKind::Input:
    case ProcKind::Nu:
    case ProcKind::Bang:
      return containsHole(p.body());
    case ProcKind::Choice:
    case ProcKind::Par:
      return containsHole(p.left()) || containsHole(p.right());
  }
  return false;
}

inline bool containsHole(const Action& a) {
  return a.isHole() || (a.kind == ActionKind::Output && a.payload.isHole());
}

}  // namespace pislice

template <>
struct std::hash<pislice::Process> {
  std::size_t operator()(const pislice::Process& p) const noexcept { return p.hash(); }
};
