#pragma once

// Term generators and law sweeps used by the `verify` command and the
// acceptance harness.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "causality.hpp"
#include "lattice.hpp"
#include "named.hpp"
#include "semantics.hpp"
#include "slicing.hpp"

namespace pislice {

/// Deterministic draws on top of mt19937_64 (the standard distributions are
/// implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(gen_() % n); }
  bool chance(unsigned percent) { return below(100) < percent; }

 private:
  std::mt19937_64 gen_;
};

/// Every hole-free process with exactly `nodes` AST nodes at context `ctx`.
class ProcessGenerator {
 public:
  const std::vector<Process>& exactly(std::size_t nodes, Context ctx) {
    const auto key = std::make_pair(nodes, ctx);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Process> out;
    if (nodes == 1) {
      out.push_back(Process::nil());
    } else if (nodes > 1) {
      for (std::uint32_t x = 0; x < ctx; ++x) {
        for (const auto& b : exactly(nodes - 1, ctx + 1)) out.push_back(Process::input(Name{x}, b));
      }
      for (std::uint32_t x = 0; x < ctx; ++x) {
        for (std::uint32_t z = 0; z < ctx; ++z) {
          for (const auto& b : exactly(nodes - 1, ctx)) {
            out.push_back(Process::output(Name{x}, Payload::ref(z), b));
          }
        }
      }
      for (int choice = 1; choice >= 0; --choice) {
        for (std::size_t k = 1; k + 1 < nodes; ++k) {
          const auto& ls = exactly(k, ctx);
          const auto& rs = exactly(nodes - 1 - k, ctx);
          for (const auto& l : ls) {
            for (const auto& r : rs) out.push_back(choice ? Process::choice(l, r) : Process::par(l, r));
          }
        }
      }
      for (const auto& b : exactly(nodes - 1, ctx + 1)) out.push_back(Process::nu(b));
      for (const auto& b : exactly(nodes - 1, ctx)) out.push_back(Process::bang(b));
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

  /// All processes with 1..maxNodes nodes, smallest first.
  void forEach(std::size_t maxNodes, Context ctx, const std::function<void(const Process&)>& fn) {
    for (std::size_t n = 1; n <= maxNodes; ++n) {
      for (const auto& p : exactly(n, ctx)) fn(p);
    }
  }

  void clear() { memo_.clear(); }

 private:
  std::map<std::pair<std::size_t, Context>, std::vector<Process>> memo_;
};

/// Random hole-free process of depth at most `depth`, biased towards
/// prefixes and parallel composition so that transitions exist.
inline Process randomProcess(Rng& rng, std::size_t depth, Context ctx) {
  if (depth == 0) return Process::nil();
  const auto pick = rng.below(100);
  auto name = [&] { return Name{static_cast<std::uint32_t>(rng.below(ctx))}; };
  if (ctx > 0 && pick < 22) return Process::input(name(), randomProcess(rng, depth - 1, ctx + 1));
  if (ctx > 0 && pick < 44) {
    const auto x = name();
    return Process::output(x, Payload{name()}, randomProcess(rng, depth - 1, ctx));
  }
  if (pick < 54) return Process::choice(randomProcess(rng, depth - 1, ctx), randomProcess(rng, depth - 1, ctx));
  if (pick < 76) return Process::par(randomProcess(rng, depth - 1, ctx), randomProcess(rng, depth - 1, ctx));
  if (pick < 88) return Process::nu(randomProcess(rng, depth - 1, ctx + 1));
  if (pick < 94) return Process::bang(randomProcess(rng, depth - 1, ctx));
  return Process::nil();
}

/// Random element of ↓p.
inline Process randomSlice(Rng& rng, const Process& p) {
  if (p.isHole() || rng.chance(20)) return Process::hole();
  switch (p.kind()) {
    case ProcKind::Hole:
    case ProcKind::Nil:
      return p;
    case ProcKind::Input:
      return Process::input(p.channel(), randomSlice(rng, p.body()));
    case ProcKind::Output: {
      const auto z = rng.chance(30) ? Payload::hole() : p.payload();
      return Process::output(p.channel(), z, randomSlice(rng, p.body()));
    }
    case ProcKind::Choice:
      return Process::choice(randomSlice(rng, p.left()), randomSlice(rng, p.right()));
    case ProcKind::Par:
      return Process::par(randomSlice(rng, p.left()), randomSlice(rng, p.right()));
    case ProcKind::Nu:
      return Process::nu(randomSlice(rng, p.body()));
    case ProcKind::Bang:
      return Process::bang(randomSlice(rng, p.body()));
  }
  return p;
}

inline Action randomSlice(Rng& rng, const Action& a) {
  const auto all = enumerateSlices(a);
  return all[rng.below(all.size())];
}

struct LawResult {
  LawResult() = default;
  explicit LawResult(std::string n) : name(std::move(n)) {}

  std::string name;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::string firstFailure;

  bool ok() const { return violations == 0; }
  void fail(const std::string& what) {
    if (violations++ == 0) firstFailure = what;
  }
};

/// Slice lattices in sweeps are bounded by the size of the reference, not by
/// the default enumeration cap.
inline constexpr std::size_t kSweepSliceCap = 64;

inline std::string describe(const Transition& t) {
  return std::string(ruleName(t.rule())) + " on " + show(t.source(), extendHints({}, t.context()));
}

// Step Galois laws on one transition, over every source slice and every
// criterion.
inline void checkStepGaloisExhaustive(const Transition& t, LawResult& res) {
  for (const auto& r : enumerateSlices(t.source(), kSweepSliceCap)) {
    auto [a, q] = fwdStep(t, r);
    ++res.checked;
    if (!leq(bwdStep(t, a, q), r)) res.fail("bwd.fwd <= id fails for " + describe(t));
  }
  for (const auto& a : enumerateSlices(t.action())) {
    for (const auto& q : enumerateSlices(t.target(), kSweepSliceCap)) {
      ++res.checked;
      if (!leq(StepSlice{a, q}, fwdStep(t, bwdStep(t, a, q)))) {
        res.fail("fwd.bwd >= id fails for " + describe(t));
      }
    }
  }
}

inline void checkOracleExhaustive(const Transition& t, LawResult& res) {
  for (const auto& a : enumerateSlices(t.action())) {
    for (const auto& q : enumerateSlices(t.target(), kSweepSliceCap)) {
      ++res.checked;
      if (!(bwdStep(t, a, q) == oracleBwdStep(t, a, q, kSweepSliceCap))) {
        res.fail("bwdStep differs from the oracle for " + describe(t));
      }
    }
  }
  for (const auto& r : enumerateSlices(t.source(), kSweepSliceCap)) {
    ++res.checked;
    if (!(fwdStep(t, r) == oracleFwdStep(t, r, kSweepSliceCap))) {
      res.fail("fwdStep differs from the oracle for " + describe(t));
    }
  }
}

inline LawResult sweepStepGalois(std::size_t maxNodes, const std::vector<Context>& contexts) {
  LawResult res("step-galois-exhaustive");
  ProcessGenerator gen;
  for (auto ctx : contexts) {
    gen.forEach(maxNodes, ctx, [&](const Process& p) {
      for (const auto& t : enumerateTransitions(p, ctx)) checkStepGaloisExhaustive(t, res);
    });
  }
  return res;
}

inline LawResult sweepOracle(std::size_t maxNodes, const std::vector<Context>& contexts) {
  LawResult res("adjoint-oracle-exhaustive");
  ProcessGenerator gen;
  for (auto ctx : contexts) {
    gen.forEach(maxNodes, ctx, [&](const Process& p) {
      for (const auto& t : enumerateTransitions(p, ctx)) checkOracleExhaustive(t, res);
    });
  }
  return res;
}

/// Random (process, transition, slice) triples; processes have depth <= 5.
inline LawResult sweepStepGaloisRandom(std::size_t samples, std::uint64_t seed) {
  LawResult res("step-galois-random");
  Rng rng(seed);
  std::size_t drawn = 0;
  while (drawn < samples) {
    const Context ctx = 1 + rng.below(3);
    const auto p = randomProcess(rng, 5, ctx);
    const auto ts = enumerateTransitions(p, ctx);
    if (ts.empty()) continue;
    const auto& t = ts[rng.below(ts.size())];
    ++drawn;
    const auto r = randomSlice(rng, p);
    auto [a, q] = fwdStep(t, r);
    ++res.checked;
    if (!leq(bwdStep(t, a, q), r)) res.fail("bwd.fwd <= id fails for " + describe(t));
    const StepSlice crit{randomSlice(rng, t.action()), randomSlice(rng, t.target())};
    ++res.checked;
    if (!leq(crit, fwdStep(t, bwdStep(t, crit.action, crit.target)))) {
      res.fail("fwd.bwd >= id fails for " + describe(t));
    }
  }
  return res;
}

/// Random traces of length 1..maxLength over small random processes.
inline LawResult sweepTraceGalois(std::size_t traces, std::size_t maxLength, std::uint64_t seed) {
  LawResult res("trace-galois-random");
  Rng rng(seed);
  std::size_t drawn = 0;
  while (drawn < traces) {
    const Context ctx = 1 + rng.below(2);
    const auto p = randomProcess(rng, 4, ctx);
    Trace tr{p, ctx, {}};
    const auto len = 1 + rng.below(maxLength);
    for (std::size_t i = 0; i < len; ++i) {
      const auto ts = enumerateTransitions(tr.end(), tr.endContext());
      if (ts.empty()) break;
      tr.steps.push_back(ts[rng.below(ts.size())]);
    }
    if (tr.steps.empty()) continue;
    ++drawn;
    const bool small = sliceCount(tr.start) <= 256 && sliceCount(tr.end()) <= 256;
    std::vector<Process> starts, ends;
    if (small) {
      starts = enumerateSlices(tr.start, kSweepSliceCap);
      ends = enumerateSlices(tr.end(), kSweepSliceCap);
    } else {
      for (int i = 0; i < 8; ++i) {
        starts.push_back(randomSlice(rng, tr.start));
        ends.push_back(randomSlice(rng, tr.end()));
      }
    }
    for (const auto& r : starts) {
      ++res.checked;
      if (!leq(bwdTrace(tr, fwdTrace(tr, r)), r)) res.fail("bwd.fwd <= id fails on a trace");
    }
    for (const auto& q : ends) {
      ++res.checked;
      if (!leq(q, fwdTrace(tr, bwdTrace(tr, q)))) res.fail("fwd.bwd >= id fails on a trace");
    }
  }
  return res;
}

struct ConcurrencyResults {
  LawResult symmetry{LawResult("concurrency-symmetric-irreflexive")};
  LawResult residuals{LawResult("residual-derivations")};
  LawResult iso{LawResult("braid-cofinal-isomorphism")};
  LawResult pentagon{LawResult("pentagon")};
  std::size_t pairs = 0;
  std::size_t eq = 0;
  std::size_t swapTop = 0;
  std::size_t bound = 0;
};

inline void checkIsoRoundTrip(const Braiding& g, const Process& q, const Process& qp, LawResult& res) {
  for (const auto& r : enumerateSlices(q, kSweepSliceCap)) {
    ++res.checked;
    if (!(cofinalIsoBwd(g, cofinalIsoFwd(g, r)) == r)) res.fail("bwd.fwd != id on a cofinal iso");
    if (const auto* b = std::get_if<BoundBraid>(&g)) {
      if (!(braidIsoBwd(*b, braidIsoFwd(*b, r)) == r)) res.fail("bwd.fwd != id on a braid iso");
    }
  }
  for (const auto& r : enumerateSlices(qp, kSweepSliceCap)) {
    ++res.checked;
    if (!(cofinalIsoFwd(g, cofinalIsoBwd(g, r)) == r)) res.fail("fwd.bwd != id on a cofinal iso");
    if (const auto* b = std::get_if<BoundBraid>(&g)) {
      if (!(braidIsoFwd(*b, braidIsoBwd(*b, r)) == r)) res.fail("fwd.bwd != id on a braid iso");
    }
  }
}

/// Every ordered pair of distinct coinitial transitions of p.
inline void checkConcurrentPairs(const Process& p, Context ctx, ConcurrencyResults& out) {
  const auto ts = enumerateTransitions(p, ctx);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    ++out.symmetry.checked;
    if (concurrent(ts[i], ts[i])) out.symmetry.fail("concurrent(t,t) for " + describe(ts[i]));
    for (std::size_t j = 0; j < ts.size(); ++j) {
      if (i == j) continue;
      const auto& t = ts[i];
      const auto& u = ts[j];
      const bool c = concurrent(t, u);
      ++out.symmetry.checked;
      if (c != concurrent(u, t)) out.symmetry.fail("asymmetric concurrency on " + describe(t));
      if (!c) continue;
      ++out.pairs;
      try {
        const auto tu = residual(u, t);
        const auto ut = residual(t, u);
        out.residuals.checked += 2;
        if (!checkDerivation(tu) || !checkDerivation(ut) || !(tu.source() == t.target()) ||
            !(ut.source() == u.target())) {
          out.residuals.fail("residual derivation fails to re-check on " + describe(t));
          continue;
        }
        const auto g = braidingBetween(tu.target(), ut.target(), tu.targetContext());
        switch (g.index()) {
          case 0: ++out.eq; break;
          case 1: ++out.swapTop; break;
          default: ++out.bound; break;
        }
        if (const auto* b = std::get_if<BoundBraid>(&g)) {
          ++out.iso.checked;
          if (!checkBraid(*b, tu.target(), ut.target())) out.iso.fail("braid witness fails to re-check");
        }
        if (g.index() != 0) checkIsoRoundTrip(g, tu.target(), ut.target(), out.iso);
        const auto rep = checkPentagonReport(t, u, kSweepSliceCap);
        out.pentagon.checked += rep.forwardChecked + rep.backwardChecked;
        if (!rep.holds) out.pentagon.fail("pentagon fails for " + describe(t) + " / " + ruleName(u.rule()));
      } catch (const Error& e) {
        out.residuals.fail(std::string("error on ") + describe(t) + ": " + e.what());
      }
    }
  }
}

inline void sweepConcurrency(std::size_t maxNodes, const std::vector<Context>& contexts, ConcurrencyResults& out) {
  ProcessGenerator gen;
  for (auto ctx : contexts) {
    gen.forEach(maxNodes, ctx, [&](const Process& p) { checkConcurrentPairs(p, ctx, out); });
    gen.clear();
  }
}

/// Small processes exercising extrusion, closing and bound braids; too
/// large for the exhaustive generator.
inline const std::vector<std::string>& builtinCorpus() {
  static const std::vector<std::string> corpus = {
      // Two extrusions of distinct restricted names, with receivers.
      "free x; (new y. new z. (x<y>.0 | x<z>.0)) | (x(u).u<x>.0 | x(v).v<x>.0)",
      "free x; new y. new z. (x<y>.0 | x<z>.0)",
      "free x; (new y. new z. (x<y>.0 | x<z>.0)) | x(u).0",
      "free x; new y. (x<y>.0 | x<y>.0)",
      "free x y; x(u).0 | y(v).0",
      "free x; new y. (x<y>.0 | x(u).u<y>.0) | x<x>.0",
      "free x; !(x(u).0) | x<x>.0 | x<x>.0",
      "free x; new y. x<y>.(new z. x<z>.0 | x(w).0)",
  };
  return corpus;
}

inline void sweepCorpus(ConcurrencyResults& out) {
  for (const auto& src : builtinCorpus()) {
    auto prog = parseProgram(src);
    checkConcurrentPairs(prog.process, prog.context, out);
  }
}

struct VerifyOptions {
  std::size_t maxNodes = 4;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
};

/// Runs every sweep and renders a deterministic report. The boolean is true
/// when no law is violated.
inline std::pair<bool, std::string> runVerify(const VerifyOptions& opt) {
  const std::vector<Context> ctxs{0, 1, 2};
  std::vector<LawResult> laws;
  laws.push_back(sweepStepGalois(opt.maxNodes, ctxs));
  laws.push_back(sweepStepGaloisRandom(opt.samples, opt.seed));
  laws.push_back(sweepOracle(opt.maxNodes, ctxs));
  laws.push_back(sweepTraceGalois(std::max<std::size_t>(opt.samples / 5, 1), 4, opt.seed + 1));
  ConcurrencyResults conc;
  sweepConcurrency(opt.maxNodes, ctxs, conc);
  sweepCorpus(conc);
  laws.push_back(conc.symmetry);
  laws.push_back(conc.residuals);
  laws.push_back(conc.iso);
  laws.push_back(conc.pentagon);

  std::ostringstream os;
  os << "verify max-nodes=" << opt.maxNodes << " samples=" << opt.samples << " seed=" << opt.seed << "\n";
  bool ok = true;
  for (const auto& l : laws) {
    os << (l.ok() ? "ok   " : "FAIL ") << l.name << " checked=" << l.checked << " violations=" << l.violations;
    if (!l.ok()) os << " first: " << l.firstFailure;
    os << "\n";
    ok = ok && l.ok();
  }
  os << "concurrent pairs=" << conc.pairs << " eq=" << conc.eq << " swap-top=" << conc.swapTop
     << " bound=" << conc.bound << "\n";
  os << (ok ? "all laws hold" : "violations found") << "\n";
  return {ok, os.str()};
}

}  // namespace pislice
