#pragma once

#include <pislice/pislice.hpp>

#include <ostream>
#include <string>

namespace testing_helpers {

inline pislice::Process term(const std::string& text) { return pislice::parseProgram(text).process; }

inline pislice::Name n(std::uint32_t i) { return pislice::Name{i}; }
inline pislice::Payload ref(std::uint32_t i) { return pislice::Payload::ref(i); }

}  // namespace testing_helpers

namespace pislice {

// Readable gtest failure messages; free indices print as v9 ... v0.
inline void PrintTo(const Process& p, std::ostream* os) { *os << show(p, extendHints({}, 10)); }

}  // namespace pislice
