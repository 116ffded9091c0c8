// Acceptance checks, one PASS/FAIL line each. Exit status is non-zero when
// any check fails.

#include <pislice/pislice.hpp>

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

using namespace pislice;

namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << " " << id << " " << title << ": " << detail << std::endl;
}

std::string counts(const LawResult& r) {
  std::string s = std::to_string(r.checked) + " checks, " + std::to_string(r.violations) + " violations";
  if (!r.ok()) s += " (" + r.firstFailure + ")";
  return s;
}

std::string fixed(double v) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << v;
  return os.str();
}

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string capture(const std::string& cmd) {
  std::string out;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) return out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), n);
  return out;
}

const std::vector<Context> kContexts{0, 1, 2};

void stepGalois() {
  const auto t0 = Clock::now();
  const auto ex = sweepStepGalois(4, kContexts);
  const auto rnd = sweepStepGaloisRandom(1000, 1);
  const double secs = secondsSince(t0);
  const bool ok = ex.ok() && rnd.ok() && secs <= 60.0;
  report(1, "step Galois laws", ok,
         "exhaustive <=4 nodes: " + counts(ex) + "; 1000 random triples: " + counts(rnd) + "; " + fixed(secs) + " s");
}

void oracle() {
  const auto r = sweepOracle(4, kContexts);
  report(2, "adjoint oracle", r.ok(), "<=4 nodes: " + counts(r));
}

void traceGalois() {
  const auto r = sweepTraceGalois(200, 4, 2);
  report(3, "trace Galois laws", r.ok(), "200 random traces: " + counts(r));
}

void concurrency() {
  const auto t0 = Clock::now();
  ConcurrencyResults res;
  sweepConcurrency(6, kContexts, res);
  sweepCorpus(res);
  const double secs = secondsSince(t0);
  const std::string pairs = std::to_string(res.pairs) + " concurrent pairs (eq " + std::to_string(res.eq) +
                            ", swap " + std::to_string(res.swapTop) + ", bound " + std::to_string(res.bound) + ")";
  report(4, "braid/cofinal isomorphisms", res.iso.ok() && res.symmetry.ok() && res.residuals.ok(),
         pairs + ": " + counts(res.iso) + "; residual derivations: " + counts(res.residuals));
  report(5, "pentagon", res.pentagon.ok() && secs <= 300.0, counts(res.pentagon) + "; " + fixed(secs) + " s");
}

// Two extruded names picked up by two receivers; the two closes commute up
// to a bound braid.
void extrusion() {
  const auto prog =
      parseProgram("free x; (new y. new z. (x<y>.0 | x<z>.0)) | (x(u).u<x>.0 | x(v).v<x>.0)");
  const auto ts = enumerateTransitions(prog.process, prog.context);
  std::size_t bound = 0, leafPar = 0, invariant = 0, checked = 0;
  std::string notation;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t j = 0; j < ts.size(); ++j) {
      if (i == j || ts[i].action() != Action::tau() || ts[j].action() != Action::tau()) continue;
      if (!concurrent(ts[i], ts[j])) continue;
      const auto g = computeBraiding(ts[i], ts[j]);
      if (!std::holds_alternative<BoundBraid>(g)) continue;
      ++bound;
      const auto& phi = std::get<BoundBraid>(g);
      if (phi.kind() == BraidKind::Leaf && phi.leafBody().kind() == ProcKind::Par) ++leafPar;
      notation = compact(g);
      const Trace tr{prog.process, prog.context, {ts[i], residual(ts[j], ts[i])}};
      const Trace trp{prog.process, prog.context, {ts[j], residual(ts[i], ts[j])}};
      bool same = true;
      for (const auto& rp : enumerateSlices(trp.end(), kSweepSliceCap)) {
        ++checked;
        if (!(bwdTrace(tr, cofinalIsoBwd(g, rp)) == bwdTrace(trp, rp))) same = false;
      }
      if (same) ++invariant;
    }
  }
  const bool ok = bound > 0 && leafPar == bound && invariant == bound && notation == "(νν)(·|·)";
  report(6, "extrusion braid", ok,
         std::to_string(bound) + " ordered tau pairs with bound braiding, " + std::to_string(leafPar) +
             " leaf-under-par " + notation + ", slice invariance on " + std::to_string(invariant) + " (" +
             std::to_string(checked) + " criteria)");
}

// The scheduler run. Recursion is a replicated server, so restarting thread 1
// after the c2 handover is its own step, and the expected slice keeps the
// server's first prefix in place of the restarted copy.
void scheduler() {
  const auto prog = parseProgram(readFile(std::string(PISLICE_SAMPLES_DIR) + "/scheduler.pi"));
  const auto tr = runTrace(prog.process, prog.context, {3, 2, 6, 7, 2, 6});
  const auto& names = prog.freeNames;
  const auto crit =
      toDeBruijn(parse(readFile(std::string(PISLICE_SAMPLES_DIR) + "/scheduler.crit"), names).term, names).first;
  const auto expected = toDeBruijn(parse("a1(u).c1(u).(b1(u).c2<_>.r1<_>._ + _)"
                                         " | c1<_>.a2(u).c2(u)._"
                                         " | a1<_>._"
                                         " | a2<_>.b1<_>._"
                                         " | !r1(u).a1(u)._"
                                         " | _",
                                         names)
                                       .term,
                                   names)
                        .first;
  const auto kept = bwdTraceKeepingActions(tr, crit);
  const auto plain = bwdTrace(tr, crit);
  const bool matches = kept == expected;
  const bool sufficient = leq(crit, fwdTrace(tr, kept)) && leq(crit, fwdTrace(tr, plain));
  report(7, "scheduler slice", matches && sufficient,
         std::string("slice ") + (matches ? "matches" : "differs from") + " the expected split: " +
             show(kept, names) + "; replay covers criterion: " + (sufficient ? "yes" : "no") +
             "; with erased step actions the slice is " + show(plain, names));
}

void determinism() {
  const std::string cmd = std::string(PISLICE_CLI) + " verify --seed 42 --samples 300 2>&1";
  const auto a = capture(cmd);
  const auto b = capture(cmd);
  const bool ok = !a.empty() && a == b && a.find("all laws hold") != std::string::npos;
  report(8, "verify determinism", ok,
         std::to_string(a.size()) + " report bytes, " + (a == b ? "identical" : "different") + " across two runs");
}

}  // namespace

int main() {
  try {
    stepGalois();
    oracle();
    traceGalois();
    concurrency();
    extrusion();
    scheduler();
    determinism();
  } catch (const std::exception& e) {
    std::cout << "FAIL error: " << e.what() << std::endl;
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
