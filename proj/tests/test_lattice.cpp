#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace pislice;
using namespace testing_helpers;

namespace {
const Process kNil = Process::nil();
const Process kHole = Process::hole();
}  // namespace

TEST(Leq, Basics) {
  EXPECT_TRUE(leq(kHole, kNil));
  EXPECT_FALSE(leq(kNil, kHole));
  EXPECT_TRUE(leq(Process::output(n(0), Payload::hole(), kNil), Process::output(n(0), ref(1), kNil)));
  EXPECT_FALSE(leq(Process::choice(kHole, kNil), Process::choice(kNil, kHole)));
  EXPECT_FALSE(leq(Process::input(n(0), kNil), Process::input(n(1), kNil)));
}

TEST(MeetJoin, Examples) {
  auto r = term("free x y; x<y>.0 | x(u).0");
  EXPECT_EQ(join(kHole, r), r);
  EXPECT_EQ(meet(kHole, r), kHole);
  auto a = Process::output(n(1), Payload::hole(), kNil);
  auto b = Process::output(n(1), ref(0), kHole);
  EXPECT_EQ(meet(a, b), Process::output(n(1), Payload::hole(), kHole));
  EXPECT_EQ(join(a, b), Process::output(n(1), ref(0), kNil));
  EXPECT_EQ(join(Process::par(kNil, kHole), Process::par(kHole, kNil)), Process::par(kNil, kNil));
  EXPECT_THROW(join(Process::input(n(0), kNil), kNil), Error);
}

TEST(Enumerate, Counts) {
  EXPECT_EQ(enumerateSlices(kNil).size(), 2u);
  EXPECT_EQ(enumerateSlices(Process::output(n(0), ref(0), kNil)).size(), 5u);
  EXPECT_EQ(enumerateSlices(Process::par(kNil, kNil)).size(), 5u);
  EXPECT_EQ(enumerateSlices(Process::choice(kNil, kNil)).size(), 5u);
  EXPECT_EQ(enumerateSlices(Process::nu(Process::bang(kNil))).size(), 4u);
}

TEST(Enumerate, OutputListing) {
  auto p = Process::output(n(0), ref(0), kNil);
  auto s = enumerateSlices(p);
  std::vector<Process> expected{kHole, Process::output(n(0), Payload::hole(), kHole),
                                Process::output(n(0), Payload::hole(), kNil), Process::output(n(0), ref(0), kHole),
                                Process::output(n(0), ref(0), kNil)};
  for (const auto& e : expected) EXPECT_NE(std::find(s.begin(), s.end(), e), s.end());
  EXPECT_EQ(s.front(), kHole);
}

TEST(Enumerate, CapEnforced) {
  Process p = kNil;
  for (int i = 0; i < 12; ++i) p = Process::bang(p);
  EXPECT_THROW(enumerateSlices(p), Error);
  EXPECT_NO_THROW(enumerateSlices(p, 13));
}

TEST(Enumerate, ActionsAndPayloads) {
  EXPECT_EQ(enumerateSlices(Action::output(n(0), ref(1))).size(), 3u);
  EXPECT_EQ(enumerateSlices(Action::tau()).size(), 2u);
  EXPECT_EQ(enumerateSlices(ref(3)).size(), 2u);
  EXPECT_TRUE(leq(Action::output(n(0), Payload::hole()), Action::output(n(0), ref(1))));
  EXPECT_FALSE(leq(Action::tau(), Action::input(n(0))));
}

// Order and lattice laws, exhaustively over the slices of a few references.
TEST(LatticeLaws, Exhaustive) {
  for (const char* src : {"free x y; x<y>.0 | x(u).u<x>.0", "free x; (x(u).0 + x<x>.0) | !x<x>.0",
                          "free x; new y.(x<y>.0 + 0)"}) {
    auto p = term(src);
    auto slices = enumerateSlices(p);
    ASSERT_EQ(slices.size(), sliceCount(p));
    for (std::size_t i = 0; i < slices.size(); ++i) {
      const auto& a = slices[i];
      EXPECT_TRUE(leq(a, p));
      EXPECT_TRUE(leq(a, a));
      EXPECT_EQ(meet(a, a), a);
      EXPECT_EQ(join(a, a), a);
      EXPECT_EQ(meet(a, p), a);
      EXPECT_EQ(join(a, kHole), a);
      for (std::size_t j = 0; j < slices.size(); ++j) {
        const auto& b = slices[j];
        if (i != j) {
          EXPECT_NE(a, b);
        }
        EXPECT_EQ(meet(a, b), meet(b, a));
        EXPECT_EQ(join(a, b), join(b, a));
        EXPECT_EQ(meet(a, join(a, b)), a);
        EXPECT_EQ(join(a, meet(a, b)), a);
        EXPECT_EQ(leq(a, b), join(a, b) == b);
        EXPECT_EQ(leq(a, b), meet(a, b) == a);
        if (leq(a, b) && leq(b, a)) {
          EXPECT_EQ(a, b);
        }
      }
    }
  }
}
