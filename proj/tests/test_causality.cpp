#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace pislice;
using namespace testing_helpers;

namespace {

const char* kExtrusion = "free x; (new y. new z. (x<y>.0 | x<z>.0)) | (x(u).u<x>.0 | x(v).v<x>.0)";

std::vector<Transition> at(const char* src, Context ctx) { return enumerateTransitions(term(src), ctx); }

}  // namespace

TEST(Concurrent, IrreflexiveAndSymmetric) {
  ProcessGenerator gen;
  for (Context ctx : {1u, 2u}) {
    gen.forEach(5, ctx, [&](const Process& p) {
      auto ts = enumerateTransitions(p, ctx);
      for (const auto& t : ts) {
        EXPECT_FALSE(concurrent(t, t));
        for (const auto& u : ts) EXPECT_EQ(concurrent(t, u), concurrent(u, t));
      }
    });
  }
}

TEST(Concurrent, ChoiceBranchesConflict) {
  auto ts = enumerateTransitions(Process::choice(Process::input(n(0), Process::nil()),
                                                 Process::input(n(0), Process::nil())),
                                 1);
  ASSERT_EQ(ts.size(), 2u);
  EXPECT_FALSE(concurrent(ts[0], ts[1]));
  auto cs = at("free a b; (a(u).0 + b(u).0) | a<a>.0 | b<b>.0", 2);
  for (const auto& t : cs) {
    for (const auto& u : cs) {
      if (t.action() == Action::tau() && u.action() == Action::tau() && !(t == u)) {
        EXPECT_FALSE(concurrent(t, u));
      }
    }
  }
}

TEST(Concurrent, RequiresCoinitial) {
  auto a = at("free x; x(u).0", 1)[0];
  auto b = at("free x; x<x>.0", 1)[0];
  EXPECT_THROW(concurrent(a, b), Error);
}

TEST(Concurrent, TwoExtrusions) {
  auto ts = at(kExtrusion, 1);
  ASSERT_EQ(ts[0].action(), Action::boundOutput(n(0)));
  ASSERT_EQ(ts[1].action(), Action::boundOutput(n(0)));
  EXPECT_TRUE(concurrent(ts[0], ts[1]));
  // The residual of the z-extrusion after the y-extrusion still extrudes.
  auto r = residual(ts[1], ts[0]);
  EXPECT_EQ(r.source(), ts[0].target());
  EXPECT_TRUE(r.action().isBound());
  EXPECT_TRUE(checkDerivation(r));
}

TEST(Braiding, DisjointParIsEq) {
  auto ts = at("free a b; a(u).0 | b<b>.0", 2);
  ASSERT_EQ(ts.size(), 2u);
  ASSERT_TRUE(concurrent(ts[0], ts[1]));
  EXPECT_TRUE(std::holds_alternative<BraidEq>(computeBraiding(ts[0], ts[1])));
  EXPECT_EQ(compact(computeBraiding(ts[0], ts[1])), "=");
}

TEST(Braiding, TwoInputsSwapTop) {
  auto ts = at("free a; a(u).u<a>.0 | a(v).v<a>.0", 1);
  ASSERT_EQ(ts.size(), 2u);
  auto g = computeBraiding(ts[0], ts[1]);
  ASSERT_TRUE(std::holds_alternative<BraidSwapTop>(g));
  const auto q = residual(ts[1], ts[0]).target();
  const auto qp = residual(ts[0], ts[1]).target();
  EXPECT_EQ(apply(Renaming::swap(1), q), qp);
  for (const auto& r : enumerateSlices(q)) {
    EXPECT_EQ(cofinalIsoFwd(g, r), renF(Renaming::swap(1), q, Renaming::swap(1), r));
    EXPECT_EQ(cofinalIsoBwd(g, cofinalIsoFwd(g, r)), r);
  }
}

TEST(Braiding, ExtrusionSyncsGiveLeafUnderPar) {
  auto ts = at(kExtrusion, 1);
  std::size_t bound = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t j = 0; j < ts.size(); ++j) {
      if (i == j || !concurrent(ts[i], ts[j])) continue;
      auto g = computeBraiding(ts[i], ts[j]);
      if (!std::holds_alternative<BoundBraid>(g)) continue;
      ++bound;
      const auto& phi = std::get<BoundBraid>(g);
      EXPECT_EQ(phi.kind(), BraidKind::Leaf);
      EXPECT_EQ(phi.leafBody().kind(), ProcKind::Par);
      EXPECT_EQ(compact(g), "(νν)(·|·)");
      const auto q = residual(ts[j], ts[i]).target();
      const auto qp = residual(ts[i], ts[j]).target();
      EXPECT_TRUE(checkBraid(phi, q, qp));
      EXPECT_EQ(braidSource(phi), q);
      EXPECT_EQ(braidTarget(phi), qp);
      EXPECT_EQ(braidIsoFwd(phi, Process::hole()), Process::hole());
      for (const auto& r : enumerateSlices(q, kSweepSliceCap)) EXPECT_EQ(braidIsoBwd(phi, braidIsoFwd(phi, r)), r);
      for (const auto& r : enumerateSlices(qp, kSweepSliceCap)) EXPECT_EQ(braidIsoFwd(phi, braidIsoBwd(phi, r)), r);
      EXPECT_TRUE(checkPentagon(ts[i], ts[j], kSweepSliceCap));
    }
  }
  EXPECT_EQ(bound, 4u);
}

TEST(Braiding, LeafNestedUnderParContext) {
  // The same double extrusion inside a larger parallel context.
  const std::string src = std::string(kExtrusion) + " | x<x>.0";
  auto p = parseProgram(src);
  auto ts = enumerateTransitions(p.process, p.context);
  bool found = false;
  for (std::size_t i = 0; i < ts.size() && !found; ++i) {
    for (std::size_t j = 0; j < ts.size() && !found; ++j) {
      if (i == j || !concurrent(ts[i], ts[j])) continue;
      auto g = computeBraiding(ts[i], ts[j]);
      if (!std::holds_alternative<BoundBraid>(g)) continue;
      EXPECT_EQ(compact(g), "((νν)(·|·)|·)");
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Pentagon, ExhaustiveSmall) {
  ConcurrencyResults res;
  sweepConcurrency(5, {0, 1, 2}, res);
  sweepCorpus(res);
  EXPECT_TRUE(res.symmetry.ok()) << res.symmetry.firstFailure;
  EXPECT_TRUE(res.residuals.ok()) << res.residuals.firstFailure;
  EXPECT_TRUE(res.iso.ok()) << res.iso.firstFailure;
  EXPECT_TRUE(res.pentagon.ok()) << res.pentagon.firstFailure;
  EXPECT_GT(res.bound, 0u);
  EXPECT_GT(res.swapTop, 0u);
}

TEST(Permute, FinalSwapWithBoundBraiding) {
  auto p = parseProgram(kExtrusion);
  auto tr = runTrace(p.process, p.context, {4, 2});
  auto perm = permuteAdjacent(tr, 0);
  ASSERT_TRUE(std::holds_alternative<BoundBraid>(perm.braiding));
  EXPECT_TRUE(composable(perm.trace));
  // Slice invariance through the cofinality iso.
  for (const auto& rp : enumerateSlices(perm.trace.end(), kSweepSliceCap)) {
    EXPECT_EQ(bwdTrace(tr, cofinalIsoBwd(perm.braiding, rp)), bwdTrace(perm.trace, rp));
  }
  // Swapping back recovers the original run.
  auto back = permuteAdjacent(perm.trace, 0);
  EXPECT_EQ(back.trace.steps, tr.steps);
  for (const auto& r : enumerateSlices(tr.end(), kSweepSliceCap)) {
    EXPECT_EQ(cofinalIsoFwd(back.braiding, cofinalIsoFwd(perm.braiding, r)), r);
  }
}

TEST(Permute, InteriorEqSwap) {
  auto p = parseProgram("free a b c; a(u).0 | a<a>.0 | b(u).0 | b<b>.0 | c<c>.0");
  auto ts = enumerateTransitions(p.process, p.context);
  // Pick two syncs on different channels, then a third step.
  std::vector<std::size_t> script;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i].action() == Action::tau()) {
      script.push_back(i);
      break;
    }
  }
  ASSERT_EQ(script.size(), 1u);
  auto tr = runTrace(p.process, p.context, script);
  auto next = enumerateTransitions(tr.end(), tr.endContext());
  for (std::size_t i = 0; i < next.size(); ++i) {
    if (next[i].action() == Action::tau()) {
      script.push_back(i);
      break;
    }
  }
  script.push_back(0);
  tr = runTrace(p.process, p.context, script);
  auto perm = permuteAdjacent(tr, 0);
  ASSERT_TRUE(std::holds_alternative<BraidEq>(perm.braiding));
  EXPECT_EQ(perm.trace.steps[2], tr.steps[2]);
  for (const auto& rp : enumerateSlices(perm.trace.end(), kSweepSliceCap)) {
    EXPECT_EQ(bwdTrace(tr, rp), bwdTrace(perm.trace, rp));
  }
}

TEST(Permute, Errors) {
  auto p = parseProgram("free x; x(u).0 | x<x>.0");
  auto tr = runTrace(p.process, p.context, {2});
  EXPECT_THROW(permuteAdjacent(tr, 0), Error);
  auto seq = parseProgram("free x; x<x>.x<x>.0");
  auto tr2 = runTrace(seq.process, seq.context, {0, 0});
  EXPECT_THROW(permuteAdjacent(tr2, 0), Error);
}
