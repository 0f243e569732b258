// fsmmint: minimum-FSM identification from scenarios and LTL properties.
//
// Subcommands: identify, generate, bench, verify, qbf. Exit codes of
// `identify`: 0 found, 1 unsatisfiable, 2 usage error, 3 resource limit.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "fsmmint/bmc.hpp"
#include "fsmmint/errors.hpp"
#include "fsmmint/generator.hpp"
#include "fsmmint/io.hpp"
#include "fsmmint/synth.hpp"

namespace fs = std::filesystem;
using namespace fsmmint;

namespace {

Method parseMethod(const std::string& name) {
  if (name == "iterative") return Method::Iterative;
  if (name == "exponential") return Method::Exponential;
  if (name == "qsat") return Method::Qsat;
  if (name == "backtracking") return Method::Backtracking;
  throw CLI::ValidationError("--method", "unknown method: " + name);
}

const char* methodName(Method m) {
  switch (m) {
    case Method::Iterative: return "iterative";
    case Method::Exponential: return "exponential";
    case Method::Qsat: return "qsat";
    case Method::Backtracking: return "backtracking";
  }
  return "?";
}

const char* outcomeName(Outcome o) {
  switch (o) {
    case Outcome::Found: return "FOUND";
    case Outcome::Unsatisfiable: return "UNSATISFIABLE";
    case Outcome::Timeout: return "TIMEOUT";
    case Outcome::BudgetExceeded: return "BUDGET-EXCEEDED";
  }
  return "?";
}

struct IdentifyArgs {
  std::string scenariosPath;
  std::string ltlPath;
  int states = 0;
  bool minStates = false;
  bool complete = false;
  std::string method = "iterative";
  std::string qbfSolver;
  std::string satSolver;
  double timeoutSeconds = 0;
  long long expansionBudget = 20'000'000;
  std::uint64_t seed = 0;
  std::string outDir;
  bool dot = false;
  bool json = false;
  bool dumpCnf = false;
  bool dumpQbf = false;
  int stateCap = 32;
};

void writeFsmOutputs(const Fsm& fsm, const Alphabet& alphabet, const IdentifyArgs& args) {
  if (args.outDir.empty()) return;
  fs::create_directories(args.outDir);
  bool both = !args.dot && !args.json;  // plain --out writes both forms
  if (args.dot || both)
    io::writeFile(args.outDir + "/fsm.dot", io::fsmToDot(fsm, alphabet));
  if (args.json || both)
    io::writeFile(args.outDir + "/fsm.json", io::fsmToJson(fsm, alphabet));
}

int runIdentify(const IdentifyArgs& args) {
  auto rawScenarios = io::parseScenarioText(io::readFile(args.scenariosPath));
  std::vector<std::string> ltlLines;
  if (!args.ltlPath.empty()) ltlLines = io::parseLtlLines(io::readFile(args.ltlPath));

  Alphabet alphabet = io::inferAlphabet(rawScenarios, ltlLines);

  SynthesisRequest req{alphabet, io::bindScenarios(rawScenarios, alphabet), {},
                       std::max(1, args.states)};
  for (const auto& line : ltlLines) req.formulas.push_back(parseLtl(line, alphabet));
  req.mode = args.complete ? CompletenessMode::Complete : CompletenessMode::AtLeastOne;
  req.method = parseMethod(args.method);
  if (args.timeoutSeconds > 0) req.limits.wallSeconds = args.timeoutSeconds;
  req.limits.expansionBudget = args.expansionBudget;
  req.limits.stateCap = args.stateCap;
  req.qbfSolverCommand = args.qbfSolver;
  if (req.qbfSolverCommand.empty())
    if (const char* env = std::getenv("FSMMINT_QBF_SOLVER")) req.qbfSolverCommand = env;
  req.satSolverCommand = args.satSolver;
  req.seed = args.seed;

  if (args.dumpCnf && !args.outDir.empty()) {
    fs::create_directories(args.outDir);
    ScenarioTree tree = buildScenarioTree(req.scenarios);
    VarPool pool;
    EncodingContext ctx(req.alphabet, req.stateCount, tree, pool, req.mode);
    std::vector<Clause> clauses = encodeScenario(ctx);
    auto append = [&](std::vector<Clause> more) {
      clauses.insert(clauses.end(), more.begin(), more.end());
    };
    append(encodeActions(ctx));
    append(encodeCompleteness(ctx));
    append(encodeSymmetryBfs(ctx));
    io::writeFile(args.outDir + "/formula.cnf", toDimacs(clauses, pool.count()));
    io::writeFile(args.outDir + "/formula.sym.txt",
                  symbolicDump(clauses, pool, &alphabet));
  }
  if (args.dumpQbf && !args.outDir.empty()) {
    fs::create_directories(args.outDir);
    ScenarioTree tree = buildScenarioTree(req.scenarios);
    VarPool pool;
    CircuitStore store;
    EncodingContext ctx(req.alphabet, req.stateCount, tree, pool, req.mode);
    std::vector<Clause> base = encodeScenario(ctx);
    auto append = [&](std::vector<Clause> more) {
      base.insert(base.end(), more.begin(), more.end());
    };
    append(encodeActions(ctx));
    append(encodeCompleteness(ctx));
    append(encodeSymmetryBfs(ctx));
    LtlPtr target = toNnf(ltl::negation(ltl::conjoin(req.formulas)));
    QbfInstance qbf = assembleQbf(ctx, store, base, target, 1);
    std::ostringstream dump;
    dump << "prefix:";
    for (const auto& block : qbf.prefix) {
      dump << "\n  " << block.quantifier << ":";
      for (int v : block.vars) dump << " " << pool.display(v, &alphabet);
    }
    dump << "\nmatrix:\n" << symbolicDump(qbf.clauses, pool, &alphabet);
    io::writeFile(args.outDir + "/formula.qdimacs",
                  toQdimacs(qbf.clauses, qbf.varCount, qbf.prefix));
    io::writeFile(args.outDir + "/formula.qbf.txt", dump.str());
  }

  try {
    if (args.minStates) {
      FindMinimumResult found = findMinimum(req);
      for (const auto& record : found.perSize)
        std::cout << "|S|=" << record.stateCount << ": " << outcomeName(record.outcome)
                  << " (" << record.wallSeconds << " s)\n";
      if (found.result.outcome == Outcome::Found) {
        std::cout << "minimum |S| = " << found.minStates
                  << " (clique lower bound " << found.cliqueLowerBound << ")\n";
        writeFsmOutputs(*found.result.fsm, alphabet, args);
        return 0;
      }
      if (found.cappedOut) {
        std::cout << "no FSM up to the state cap (" << req.limits.stateCap << ")\n";
        return 1;
      }
      std::cout << outcomeName(found.result.outcome) << "\n";
      return found.result.outcome == Outcome::Unsatisfiable ? 1 : 3;
    }

    SynthesisResult result = identify(req);
    std::cout << outcomeName(result.outcome) << " |S|=" << req.stateCount;
    if (result.stats.iterations > 0)
      std::cout << " iterations=" << result.stats.iterations;
    if (result.stats.finalK >= 0) std::cout << " k=" << result.stats.finalK;
    std::cout << " time=" << result.stats.wallSeconds << "s\n";
    if (result.outcome == Outcome::Found) {
      writeFsmOutputs(*result.fsm, alphabet, args);
      return 0;
    }
    return result.outcome == Outcome::Unsatisfiable ? 1 : 3;
  } catch (const NoQbfSolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

struct GenerateArgs {
  int states = 5;
  int events = 4;
  int actions = 4;
  int scenarioCount = 10;
  int totalLength = 0;
  int formulaCount = 4;
  bool complete = false;
  bool noHardFilter = false;
  std::uint64_t seed = 1;
  std::string outDir;
  bool paperPreset = false;
};

int runGenerate(const GenerateArgs& args) {
  InstanceSpec spec;
  if (args.paperPreset) {
    spec = InstanceSpec::paperPreset(args.states, args.complete, args.seed);
  } else {
    spec.maxStates = args.states;
    spec.eventCount = args.events;
    spec.actionCount = args.actions;
    spec.complete = args.complete;
    spec.scenarioCount = args.scenarioCount;
    spec.totalScenarioLength = args.totalLength;
    spec.formulaCount = args.formulaCount;
    spec.seed = args.seed;
  }

  Instance instance = generateInstance(spec, !args.noHardFilter);
  Alphabet alphabet = spec.makeAlphabet();

  fs::create_directories(args.outDir);
  std::string scenarios;
  for (const auto& sc : instance.scenarios)
    scenarios += io::scenarioToText(sc, alphabet) + "\n";
  io::writeFile(args.outDir + "/scenarios.txt", scenarios);

  std::string formulas;
  for (const auto& f : instance.formulas) formulas += printLtl(f, alphabet) + "\n";
  io::writeFile(args.outDir + "/formulas.ltl", formulas);

  io::writeFile(args.outDir + "/reference_fsm.json",
                io::fsmToJson(instance.referenceFsm, alphabet));
  io::writeFile(args.outDir + "/reference_fsm.dot",
                io::fsmToDot(instance.referenceFsm, alphabet));

  std::ostringstream meta;
  meta << "{\n"
       << "  \"seed\": " << spec.seed << ",\n"
       << "  \"maxStates\": " << spec.maxStates << ",\n"
       << "  \"events\": " << spec.eventCount << ",\n"
       << "  \"actions\": " << spec.actionCount << ",\n"
       << "  \"complete\": " << (spec.complete ? "true" : "false") << ",\n"
       << "  \"scenarioCount\": " << spec.scenarioCount << ",\n"
       << "  \"totalLength\": " << spec.resolvedTotalLength() << ",\n"
       << "  \"formulaCount\": " << spec.formulaCount << ",\n"
       << "  \"hard\": " << (instance.hard ? "true" : "false") << "\n"
       << "}\n";
  io::writeFile(args.outDir + "/instance.json", meta.str());

  std::cout << "instance written to " << args.outDir << (instance.hard ? " (hard)" : "")
            << "\n";
  return 0;
}

struct BenchArgs {
  std::string sizes = "3..5";
  int runs = 10;
  std::string methods = "iterative,backtracking";
  bool complete = false;
  std::uint64_t seed = 1;
  double perSizeTimeout = 300;
  int jobs = 1;
  std::string outCsv;
};

struct BenchRecord {
  int size = 0;
  Method method{};
  bool solved = false;
  double seconds = 0;
  int iterations = 0;
  int finalK = 0;
};

int runBench(const BenchArgs& args) {
  int sizeLo = 0, sizeHi = 0;
  if (std::sscanf(args.sizes.c_str(), "%d..%d", &sizeLo, &sizeHi) != 2 || sizeLo > sizeHi)
    throw CLI::ValidationError("--sizes", "expected A..B");

  std::vector<Method> methods;
  {
    std::stringstream parts(args.methods);
    std::string part;
    while (std::getline(parts, part, ',')) methods.push_back(parseMethod(part));
  }

  struct Task {
    int size;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (int size = sizeLo; size <= sizeHi; ++size)
    for (int run = 0; run < args.runs; ++run)
      tasks.push_back({size, args.seed + static_cast<std::uint64_t>(run) +
                                 1000ull * static_cast<std::uint64_t>(size)});

  std::vector<std::vector<BenchRecord>> perTask(tasks.size());
  std::atomic<std::size_t> nextTask{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t index = nextTask.fetch_add(1);
      if (index >= tasks.size()) return;
      const Task& task = tasks[index];
      InstanceSpec spec = InstanceSpec::paperPreset(task.size, args.complete, task.seed);
      Instance instance = makeHardInstance(spec);
      Alphabet alphabet = spec.makeAlphabet();
      for (Method method : methods) {
        SynthesisRequest req{alphabet, instance.scenarios, instance.formulas, task.size};
        req.mode = args.complete ? CompletenessMode::Complete : CompletenessMode::AtLeastOne;
        req.method = method;
        req.limits.wallSeconds = args.perSizeTimeout;
        req.limits.stateCap = task.size;
        if (const char* env = std::getenv("FSMMINT_QBF_SOLVER")) req.qbfSolverCommand = env;
        BenchRecord record{task.size, method, false, 0, 0, 0};
        try {
          FindMinimumResult found = findMinimum(req);
          record.solved = found.result.outcome == Outcome::Found;
          record.seconds = 0;
          for (const auto& r : found.perSize) {
            record.seconds += r.wallSeconds;
            record.iterations += r.stats.iterations;
            record.finalK = std::max(record.finalK, r.stats.finalK);
          }
        } catch (const std::exception&) {
          record.solved = false;
        }
        perTask[index].push_back(record);
      }
    }
  };

  int jobs = std::max(1, args.jobs);
  std::vector<std::thread> pool;
  for (int i = 1; i < jobs; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  // merge in stable task order
  std::ostringstream csv;
  csv << "size,method,solved,medianSeconds,meanIterations,meanFinalK\n";
  for (int size = sizeLo; size <= sizeHi; ++size) {
    for (Method method : methods) {
      std::vector<double> seconds;
      double iterationSum = 0, kSum = 0;
      int solved = 0, n = 0;
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (tasks[i].size != size) continue;
        for (const auto& record : perTask[i]) {
          if (record.method != method) continue;
          ++n;
          solved += record.solved ? 1 : 0;
          seconds.push_back(record.seconds);
          iterationSum += record.iterations;
          kSum += std::max(0, record.finalK);
        }
      }
      std::sort(seconds.begin(), seconds.end());
      double median = seconds.empty() ? 0 : seconds[seconds.size() / 2];
      csv << size << "," << methodName(method) << "," << solved << "," << median << ","
          << (n ? iterationSum / n : 0) << "," << (n ? kSum / n : 0) << "\n";
    }
  }
  if (!args.outCsv.empty())
    io::writeFile(args.outCsv, csv.str());
  else
    std::cout << csv.str();
  return 0;
}

struct VerifyArgs {
  std::string fsmPath;
  std::string scenariosPath;
  std::string ltlPath;
};

int runVerify(const VerifyArgs& args) {
  std::string fsmJson = io::readFile(args.fsmPath);

  std::vector<io::RawScenario> rawScenarios;
  if (!args.scenariosPath.empty())
    rawScenarios = io::parseScenarioText(io::readFile(args.scenariosPath));
  std::vector<std::string> ltlLines;
  if (!args.ltlPath.empty()) ltlLines = io::parseLtlLines(io::readFile(args.ltlPath));

  std::vector<std::string> extraEvents, extraActions;
  for (const auto& sc : rawScenarios)
    for (const auto& el : sc) {
      extraEvents.push_back(el.event);
      for (const auto& a : el.actions) extraActions.push_back(a);
    }
  for (const auto& line : ltlLines) io::collectLtlSymbols(line, extraEvents, extraActions);

  Alphabet alphabet = io::alphabetFromFsmJson(fsmJson, extraEvents, extraActions);
  Fsm fsm = io::fsmFromJson(fsmJson, alphabet);

  bool allPass = true;
  auto scenarios = io::bindScenarios(rawScenarios, alphabet);
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    RunResult r = runScenario(fsm, scenarios[i]);
    std::cout << "scenario " << (i + 1) << ": "
              << (r.accepted ? "ACCEPT" : "REJECT at " + std::to_string(r.rejectPosition))
              << "\n";
    allPass = allPass && r.accepted;
  }

  std::vector<LtlPtr> formulas;
  for (const auto& line : ltlLines) formulas.push_back(parseLtl(line, alphabet));
  if (!formulas.empty()) {
    auto verdicts = modelCheck(fsm, formulas);
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
      if (verdicts[i].holds) {
        std::cout << "formula " << (i + 1) << ": HOLDS\n";
      } else {
        std::cout << "formula " << (i + 1) << ": VIOLATED by "
                  << io::counterexampleToText(*verdicts[i].counterexample, alphabet)
                  << "\n";
        allPass = false;
      }
    }
  }
  return allPass ? 0 : 1;
}

int runQbf() {
  std::ostringstream input;
  input << std::cin.rdbuf();
  try {
    QdimacsSolveResult result = solveQdimacsByExpansion(input.str());
    if (result.sat) {
      std::cout << "s SATISFIABLE\n";
      if (!result.outerModel.empty()) {
        std::cout << "v";
        for (int lit : result.outerModel) std::cout << " " << lit;
        std::cout << " 0\n";
      }
      return 10;
    }
    std::cout << "s UNSATISFIABLE\n";
    return 20;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-FSM identification from scenarios and LTL properties"};
  app.require_subcommand(1);

  IdentifyArgs identifyArgs;
  auto* identifyCmd =
      app.add_subcommand("identify", "Identify an FSM from scenarios and LTL");
  identifyCmd->add_option("--scenarios", identifyArgs.scenariosPath, "scenario file")
      ->required();
  identifyCmd->add_option("--ltl", identifyArgs.ltlPath, "LTL file");
  auto* statesOpt = identifyCmd->add_option("--states", identifyArgs.states,
                                            "number of FSM states");
  identifyCmd->add_flag("--min-states", identifyArgs.minStates,
                        "search for the minimum number of states");
  identifyCmd->add_flag("--complete", identifyArgs.complete,
                        "require a transition for every (state, event)");
  identifyCmd->add_option("--method", identifyArgs.method,
                          "iterative|exponential|qsat|backtracking");
  identifyCmd->add_option("--qbf-solver", identifyArgs.qbfSolver,
                          "QDIMACS solver command (default $FSMMINT_QBF_SOLVER)");
  identifyCmd->add_option("--sat-solver", identifyArgs.satSolver,
                          "external DIMACS solver command (default: embedded)");
  identifyCmd->add_option("--timeout", identifyArgs.timeoutSeconds, "wall seconds");
  identifyCmd->add_option("--expansion-budget", identifyArgs.expansionBudget,
                          "clause cap for the exponential method");
  identifyCmd->add_option("--seed", identifyArgs.seed, "rng seed (interface parity)");
  identifyCmd->add_option("--out", identifyArgs.outDir, "output directory");
  identifyCmd->add_flag("--dot", identifyArgs.dot, "write fsm.dot");
  identifyCmd->add_flag("--json", identifyArgs.json, "write fsm.json");
  identifyCmd->add_flag("--dump-cnf", identifyArgs.dumpCnf,
                        "dump the base CNF (DIMACS + symbolic)");
  identifyCmd->add_flag("--dump-qbf", identifyArgs.dumpQbf,
                        "dump the QBF at k=1 (QDIMACS + symbolic)");
  identifyCmd->add_option("--state-cap", identifyArgs.stateCap,
                          "upper bound for --min-states");

  GenerateArgs generateArgs;
  auto* generateCmd = app.add_subcommand("generate", "Generate a random instance");
  generateCmd->add_flag_function(
      "--preset-paper", [&](std::int64_t) { generateArgs.paperPreset = true; },
      "paper preset: |E|=|Z|=4, 10 scenarios, length 50|S|, 4 formulas");
  generateCmd->add_option("--preset", [&generateArgs](const std::vector<std::string>& v) {
    if (v.size() == 1 && v[0] == "paper") {
      generateArgs.paperPreset = true;
      return true;
    }
    return false;
  }, "named preset (paper)");
  generateCmd->add_option("--states", generateArgs.states, "reference |S|");
  generateCmd->add_option("--events", generateArgs.events, "|E|");
  generateCmd->add_option("--actions", generateArgs.actions, "|Z|");
  generateCmd->add_option("--scenario-count", generateArgs.scenarioCount, "scenarios");
  generateCmd->add_option("--total-length", generateArgs.totalLength,
                          "total scenario length (0 = 50|S|)");
  generateCmd->add_option("--formulas", generateArgs.formulaCount, "formula count");
  generateCmd->add_flag("--complete", generateArgs.complete, "complete reference FSM");
  generateCmd->add_flag("--no-hard-filter", generateArgs.noHardFilter,
                        "skip the hard-instance filter");
  generateCmd->add_option("--seed", generateArgs.seed, "rng seed");
  generateCmd->add_option("--out", generateArgs.outDir, "output directory")->required();

  BenchArgs benchArgs;
  auto* benchCmd = app.add_subcommand("bench", "Benchmark methods on hard instances");
  benchCmd->add_option("--sizes", benchArgs.sizes, "size range A..B");
  benchCmd->add_option("--runs", benchArgs.runs, "instances per size");
  benchCmd->add_option("--methods", benchArgs.methods, "comma-separated methods");
  benchCmd->add_flag("--complete", benchArgs.complete, "complete identification");
  benchCmd->add_option("--seed", benchArgs.seed, "base seed");
  benchCmd->add_option("--timeout", benchArgs.perSizeTimeout, "per-instance seconds");
  benchCmd->add_option("--jobs", benchArgs.jobs, "worker threads");
  benchCmd->add_option("--out", benchArgs.outCsv, "CSV path (default stdout)");

  VerifyArgs verifyArgs;
  auto* verifyCmd = app.add_subcommand("verify", "Check an FSM against a specification");
  verifyCmd->add_option("--fsm", verifyArgs.fsmPath, "FSM JSON")->required();
  verifyCmd->add_option("--scenarios", verifyArgs.scenariosPath, "scenario file");
  verifyCmd->add_option("--ltl", verifyArgs.ltlPath, "LTL file");

  auto* qbfCmd = app.add_subcommand(
      "qbf", "Built-in QDIMACS solver (expansion-based; stdin to stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (identifyCmd->parsed()) {
      if (!identifyArgs.minStates && statesOpt->count() == 0) {
        std::cerr << "error: --states N or --min-states is required\n";
        return 2;
      }
      return runIdentify(identifyArgs);
    }
    if (generateCmd->parsed()) return runGenerate(generateArgs);
    if (benchCmd->parsed()) return runBench(benchArgs);
    if (verifyCmd->parsed()) return runVerify(verifyArgs);
    if (qbfCmd->parsed()) return runQbf();
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnknownSymbolError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
