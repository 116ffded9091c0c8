#include <pislice/pislice.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace pislice;
using json = nlohmann::ordered_json;

namespace {

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::size_t> parseScript(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw Error("bad script entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

bool useColor() {
  const char* env = std::getenv("PISLICE_COLOR");
  if (env && std::string(env) == "0") return false;
  if (env && std::string(env) == "1") return true;
  return isatty(fileno(stdout)) != 0;
}

const Overlay kGrey{"\x1b[90m", "\x1b[0m"};

std::vector<std::string> hintsFor(const std::vector<std::string>& freeNames, Context ctx) {
  return ctx > freeNames.size() ? extendHints(freeNames, ctx - freeNames.size()) : freeNames;
}

struct Session {
  Program prog;
  Trace trace;
  std::vector<std::size_t> script;

  std::vector<std::string> startHints() const { return prog.freeNames; }
  std::vector<std::string> endHints() const { return hintsFor(prog.freeNames, trace.endContext()); }
};

Session load(const std::string& file, const std::string& script) {
  Session s;
  s.prog = parseProgram(readFile(file));
  s.script = parseScript(script);
  s.trace = runTrace(s.prog.process, s.prog.context, s.script);
  return s;
}

// Two-column structural diff of a rejected slice against its reference.
struct DiffRow {
  std::string path;
  std::string reference;
  std::string slice;
};

void diff(const Process& ref, const Process& sl, const NamedProcess& refN, const NamedProcess& slN,
          const std::string& path, std::vector<DiffRow>& rows) {
  if (sl.isHole()) return;
  bool local = ref.kind() != sl.kind();
  if (!local && (ref.kind() == ProcKind::Input || ref.kind() == ProcKind::Output)) {
    local = ref.channel() != sl.channel();
  }
  if (!local && ref.kind() == ProcKind::Output) local = !leq(sl.payload(), ref.payload());
  if (local) {
    rows.push_back({path.empty() ? "." : path, print(refN), print(slN)});
    return;
  }
  switch (ref.kind()) {
    case ProcKind::Choice:
    case ProcKind::Par:
      diff(ref.left(), sl.left(), refN.children[0], slN.children[0], path + "/L", rows);
      diff(ref.right(), sl.right(), refN.children[1], slN.children[1], path + "/R", rows);
      return;
    case ProcKind::Input:
    case ProcKind::Output:
    case ProcKind::Nu:
    case ProcKind::Bang:
      diff(ref.body(), sl.body(), refN.children[0], slN.children[0], path + "/.", rows);
      return;
    default:
      return;
  }
}

std::string renderDiff(const Process& ref, const Process& sl, const std::vector<std::string>& hints) {
  std::vector<DiffRow> rows;
  diff(ref, sl, fromDeBruijn(ref, hints), fromDeBruijn(sl, hints), "", rows);
  std::size_t w0 = 4, w1 = 9;
  for (const auto& r : rows) {
    w0 = std::max(w0, r.path.size());
    w1 = std::max(w1, r.reference.size());
  }
  auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size(), ' '); };
  std::string out = pad("path", w0) + "  " + pad("reference", w1) + "  slice\n";
  for (const auto& r : rows) out += pad(r.path, w0) + "  " + pad(r.reference, w1) + "  " + r.slice + "\n";
  return out;
}

// Read a slice file against a reference process. Without a preamble the
// reference's own free names are in scope.
Process loadSlice(const std::string& path, const Process& ref, Context ctx,
                  const std::vector<std::string>& hints) {
  auto f = parse(readFile(path), hints);
  if (f.freeNames.size() != ctx) {
    throw Error(path + ": preamble declares " + std::to_string(f.freeNames.size()) + " free names, expected " +
                std::to_string(ctx));
  }
  auto [sl, c] = toDeBruijn(f.term, f.freeNames);
  (void)c;
  bool ok = false;
  try {
    ok = leq(sl, ref);
  } catch (const Error&) {
    ok = false;
  }
  if (!ok) throw Error(path + ": not a slice of the reference state\n" + renderDiff(ref, sl, hints));
  return sl;
}

void printSlice(const Process& full, const Process& sl, const std::vector<std::string>& hints) {
  if (useColor()) {
    std::cout << showOverlay(full, sl, hints, kGrey) << "\n";
  } else {
    std::cout << show(sl, hints) << "\n";
  }
}

json derivationJson(const Transition& t, const std::vector<std::string>& base) {
  const auto h = hintsFor(base, t.context());
  json j;
  j["rule"] = ruleName(t.rule());
  j["action"] = show(t.action(), h);
  j["source"] = show(t.source(), h);
  j["premises"] = json::array();
  for (const auto& p : t.premises()) j["premises"].push_back(derivationJson(p, base));
  return j;
}

std::string joinScript(const std::vector<std::size_t>& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out;
}

int cmdStep(const std::string& file) {
  auto prog = parseProgram(readFile(file));
  const auto ts = enumerateTransitions(prog.process, prog.context);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto& t = ts[i];
    std::cout << i << "  " << ruleName(t.rule()) << "  " << show(t.action(), prog.freeNames) << "  -> "
              << show(t.target(), hintsFor(prog.freeNames, t.targetContext())) << "\n";
  }
  return 0;
}

int cmdRun(const std::string& file, const std::string& script, bool asJson) {
  auto s = load(file, script);
  if (asJson) {
    json j;
    j["free"] = s.prog.freeNames;
    j["start"] = show(s.trace.start, s.prog.freeNames);
    j["steps"] = json::array();
    for (std::size_t i = 0; i < s.trace.steps.size(); ++i) {
      const auto& t = s.trace.steps[i];
      json st;
      st["index"] = s.script[i];
      st["rule"] = ruleName(t.rule());
      st["action"] = show(t.action(), hintsFor(s.prog.freeNames, t.context()));
      st["free"] = hintsFor(s.prog.freeNames, t.targetContext());
      st["target"] = show(t.target(), st["free"].get<std::vector<std::string>>());
      st["derivation"] = derivationJson(t, s.prog.freeNames);
      j["steps"].push_back(st);
    }
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "   " << show(s.trace.start, s.prog.freeNames) << "\n";
  for (std::size_t i = 0; i < s.trace.steps.size(); ++i) {
    const auto& t = s.trace.steps[i];
    std::cout << "-" << show(t.action(), hintsFor(s.prog.freeNames, t.context())) << "-> [" << s.script[i] << " "
              << ruleName(t.rule()) << "]\n   " << show(t.target(), hintsFor(s.prog.freeNames, t.targetContext()))
              << "\n";
  }
  return 0;
}

int cmdSliceBwd(const std::string& file, const std::string& script, const std::string& crit, bool keepActions) {
  auto s = load(file, script);
  const auto end = s.trace.end();
  const auto r = loadSlice(crit, end, s.trace.endContext(), s.endHints());
  const auto out = keepActions ? bwdTraceKeepingActions(s.trace, r) : bwdTrace(s.trace, r);
  printSlice(s.trace.start, out, s.startHints());
  return 0;
}

int cmdSliceFwd(const std::string& file, const std::string& script, const std::string& slicePath) {
  auto s = load(file, script);
  const auto r = loadSlice(slicePath, s.trace.start, s.trace.context, s.startHints());
  printSlice(s.trace.end(), fwdTrace(s.trace, r), s.endHints());
  return 0;
}

int cmdConcur(const std::string& file, const std::string& script) {
  auto s = load(file, script);
  const auto ts = enumerateTransitions(s.trace.end(), s.trace.endContext());
  const auto h = s.endHints();
  std::size_t n = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t j = i + 1; j < ts.size(); ++j) {
      if (!concurrent(ts[i], ts[j])) continue;
      const auto g = computeBraiding(ts[i], ts[j]);
      std::cout << i << " " << j << "  " << show(ts[i].action(), h) << " / " << show(ts[j].action(), h) << "  "
                << braidingKind(g) << " " << compact(g) << "\n";
      ++n;
    }
  }
  std::cout << n << " concurrent pair" << (n == 1 ? "" : "s") << "\n";
  return 0;
}

int cmdPermute(const std::string& file, const std::string& script, std::size_t at) {
  auto s = load(file, script);
  const auto p = permuteAdjacent(s.trace, at);
  auto next = s.script;
  next[at] = p.firstIndex;
  next[at + 1] = p.secondIndex;
  std::cout << "script: " << joinScript(next) << "\n";
  std::cout << "braiding: " << braidingKind(p.braiding) << " " << compact(p.braiding) << "\n";
  std::cout << "end: " << show(p.trace.end(), hintsFor(s.prog.freeNames, p.trace.endContext())) << "\n";
  return 0;
}

int cmdVerify(const VerifyOptions& opt) {
  const auto [ok, report] = runVerify(opt);
  std::cout << report;
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pi-calculus interpreter with dynamic slicing"};
  app.require_subcommand(1);

  std::string file, script, crit, slicePath;
  bool asJson = false, keepActions = false;
  std::size_t at = 0;
  VerifyOptions vopt;

  auto* step = app.add_subcommand("step", "List the transitions of a process");
  step->add_option("FILE", file)->required();

  auto* run = app.add_subcommand("run", "Run a script of transition indices");
  run->add_option("FILE", file)->required();
  run->add_option("--script", script, "Comma-separated transition indices");
  run->add_flag("--json", asJson);

  auto* bwd = app.add_subcommand("slice-bwd", "Backward-slice a run");
  bwd->add_option("FILE", file)->required();
  bwd->add_option("--script", script);
  bwd->add_option("--criterion", crit, "Slice of the end state")->required();
  bwd->add_flag("--keep-actions", keepActions, "Slice with each step's full action instead of the erased one");

  auto* fwd = app.add_subcommand("slice-fwd", "Forward-slice a run");
  fwd->add_option("FILE", file)->required();
  fwd->add_option("--script", script);
  fwd->add_option("--slice", slicePath, "Slice of the start state")->required();

  auto* concur = app.add_subcommand("concur", "List concurrent transition pairs at the end of a run");
  concur->add_option("FILE", file)->required();
  concur->add_option("--script", script);

  auto* permute = app.add_subcommand("permute", "Swap two adjacent concurrent steps of a run");
  permute->add_option("FILE", file)->required();
  permute->add_option("--script", script);
  permute->add_option("--at", at, "Position of the first step")->required();

  auto* verify = app.add_subcommand("verify", "Check the slicing and concurrency laws");
  verify->add_option("--max-nodes", vopt.maxNodes);
  verify->add_option("--samples", vopt.samples);
  verify->add_option("--seed", vopt.seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*step) return cmdStep(file);
    if (*run) return cmdRun(file, script, asJson);
    if (*bwd) return cmdSliceBwd(file, script, crit, keepActions);
    if (*fwd) return cmdSliceFwd(file, script, slicePath);
    if (*concur) return cmdConcur(file, script);
    if (*permute) return cmdPermute(file, script, at);
    if (*verify) return cmdVerify(vopt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
