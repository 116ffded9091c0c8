#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace pislice;
using namespace testing_helpers;

TEST(Parse, Nil) {
  auto f = parse("0");
  EXPECT_EQ(f.term.kind, ProcKind::Nil);
  EXPECT_TRUE(f.freeNames.empty());
}

TEST(Parse, ParOfOutputAndInput) {
  auto f = parse("free x; x<x>.0 | x(u).0");
  ASSERT_EQ(f.term.kind, ProcKind::Par);
  const auto& l = f.term.children[0];
  const auto& r = f.term.children[1];
  EXPECT_EQ(l.kind, ProcKind::Output);
  EXPECT_EQ(l.channel, "x");
  EXPECT_EQ(*l.payload, "x");
  EXPECT_EQ(r.kind, ProcKind::Input);
  EXPECT_EQ(r.binder, "u");
  EXPECT_EQ(r.children[0].kind, ProcKind::Nil);
}

TEST(Parse, ChoiceOfOutputs) {
  auto f = parse("free x y z; x<y>.0 + x<z>.0");
  ASSERT_EQ(f.term.kind, ProcKind::Choice);
  EXPECT_EQ(*f.term.children[0].payload, "y");
  EXPECT_EQ(*f.term.children[1].payload, "z");
}

TEST(Parse, Precedence) {
  // Prefix binds tighter than +, which binds tighter than |.
  auto f = parse("free a; a(u).0 + 0 | 0");
  ASSERT_EQ(f.term.kind, ProcKind::Par);
  EXPECT_EQ(f.term.children[0].kind, ProcKind::Choice);
  EXPECT_EQ(f.term.children[0].children[0].kind, ProcKind::Input);
}

TEST(Parse, HolesCommentsAndErasedPayload) {
  auto f = parse("-- header\nfree x; x<_>._ -- trailing\n | _");
  ASSERT_EQ(f.term.kind, ProcKind::Par);
  EXPECT_FALSE(f.term.children[0].payload.has_value());
  EXPECT_EQ(f.term.children[0].children[0].kind, ProcKind::Hole);
  EXPECT_EQ(f.term.children[1].kind, ProcKind::Hole);
}

TEST(Parse, UnboundNameReportsPosition) {
  try {
    parse("free x;\n  x<y>.0");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 5u);
  }
}

TEST(Parse, SyntaxErrors) {
  EXPECT_THROW(parse("free x; x<x>"), ParseError);
  EXPECT_THROW(parse("free x; x(u)"), ParseError);
  EXPECT_THROW(parse("(0"), ParseError);
  EXPECT_THROW(parse("0 0"), ParseError);
  EXPECT_THROW(parse("free x"), ParseError);
}

TEST(Parse, DefaultFreeNames) {
  auto f = parse("a<b>.0", {"a", "b"});
  EXPECT_EQ(f.freeNames, (std::vector<std::string>{"a", "b"}));
  EXPECT_THROW(parse("a<b>.0"), ParseError);
}

TEST(DeBruijn, SingleBinder) {
  auto [p, ctx] = toDeBruijn(parse("free x; x(u).u<u>.0").term, {"x"});
  EXPECT_EQ(ctx, 1u);
  EXPECT_EQ(p, Process::input(n(0), Process::output(n(0), ref(0), Process::nil())));
}

TEST(DeBruijn, NuPushesFreeName) {
  auto [p, ctx] = toDeBruijn(parse("free x; new y. x<y>.0").term, {"x"});
  EXPECT_EQ(ctx, 1u);
  EXPECT_EQ(p, Process::nu(Process::output(n(1), ref(0), Process::nil())));
}

TEST(DeBruijn, LastFreeNameIsIndexZero) {
  auto prog = parseProgram("free a b; a<b>.0");
  EXPECT_EQ(prog.process, Process::output(n(1), ref(0), Process::nil()));
}

TEST(DeBruijn, InverseOfExamples) {
  EXPECT_EQ(show(Process::input(n(0), Process::output(n(0), ref(0), Process::nil())), {"x"}), "x(x0).x0<x0>.0");
  EXPECT_EQ(show(Process::nu(Process::output(n(1), ref(0), Process::nil())), {"x"}), "new x0.x<x0>.0");
}

TEST(DeBruijn, FreshNamesAvoidHints) {
  EXPECT_EQ(show(Process::nu(Process::nil()), {"x0"}), "new x1.0");
}

TEST(DeBruijn, OutOfScopeIndexThrows) {
  EXPECT_THROW(show(Process::output(n(3), ref(0), Process::nil()), {"x"}), Error);
}

TEST(Print, MinimalParentheses) {
  for (const char* s : {"free a; a(u).0 | a<a>.0 | 0", "free a; a(u).(0 | 0)", "free a; 0 + 0 + 0 | 0",
                        "free a; 0 + (0 + 0)", "free a; 0 | (0 | 0)", "free a; (0 | 0) + 0", "free a; !(0 | 0)",
                        "free a; new x.(a<x>.0 | x(y).0)"}) {
    auto f = parse(s);
    EXPECT_EQ(print(f), s);
  }
}

TEST(Print, RoundTripOnRandomTerms) {
  Rng rng(7);
  const std::vector<std::string> names{"a", "b"};
  for (int i = 0; i < 500; ++i) {
    auto p = randomProcess(rng, 4, 2);
    auto text = show(p, names);
    auto back = toDeBruijn(parse(text, names).term, names).first;
    EXPECT_EQ(back, p) << text;
    EXPECT_EQ(show(back, names), text);
  }
}

TEST(Process, StructuralEqualityAndSize) {
  auto a = term("free x; x(u).0 | x<x>.0");
  auto b = term("free x; x(w).0 | x<x>.0");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.nodeCount(), 5u);
  EXPECT_EQ(a.hash(), b.hash());
}

TEST(WellFormed, Contexts) {
  auto p = Process::input(n(0), Process::output(n(1), ref(0), Process::nil()));
  EXPECT_TRUE(wellFormed(p, 1));
  EXPECT_FALSE(wellFormed(p, 0));
  EXPECT_TRUE(wellFormed(Process::hole(), 0));
  EXPECT_FALSE(wellFormed(Process::nu(Process::output(n(1), ref(0), Process::nil())), 0));
  EXPECT_TRUE(wellFormed(Action::output(n(1), Payload::hole()), 2));
  EXPECT_FALSE(wellFormed(Action::input(n(2)), 2));
}
