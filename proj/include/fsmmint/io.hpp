#pragma once

#include <string>
#include <vector>

#include "fsmmint/ltl.hpp"
#include "fsmmint/negative_tree.hpp"

namespace fsmmint {
namespace io {

struct RawElement {
  std::string event;
  std::vector<std::string> actions;
};
using RawScenario = std::vector<RawElement>;

/// Scenario file: one scenario per line, elements separated by `;`, element
/// syntax `event(action,...)` (`event()` for no output), `#` comments.
std::vector<RawScenario> parseScenarioText(const std::string& text);

/// LTL file: one formula per line, `#` comments. Returns the raw lines.
std::vector<std::string> parseLtlLines(const std::string& text);

/// Lexical scan of wasEvent/wasAction arguments, for building the alphabet
/// before the real parse.
void collectLtlSymbols(const std::string& line, std::vector<std::string>& events,
                       std::vector<std::string>& actions);

/// Alphabet from the symbols of raw scenarios and LTL lines, ordered by first
/// appearance (scenarios first).
Alphabet inferAlphabet(const std::vector<RawScenario>& scenarios,
                       const std::vector<std::string>& ltlLines);

std::vector<Scenario> bindScenarios(const std::vector<RawScenario>& raw,
                                    const Alphabet& alphabet);

std::string scenarioToText(const Scenario& scenario, const Alphabet& alphabet);

/// Counterexample in the negative-scenario notation, the cycle in square
/// brackets: `(e1, z1), [(e1, z1), (e1, z2)]`.
std::string counterexampleToText(const Counterexample& cex, const Alphabet& alphabet);

std::string fsmToDot(const Fsm& fsm, const Alphabet& alphabet);
std::string fsmToJson(const Fsm& fsm, const Alphabet& alphabet);
Fsm fsmFromJson(const std::string& text, const Alphabet& alphabet);
/// Alphabet recovery from an FSM JSON file (events/actions by first appearance).
Alphabet alphabetFromFsmJson(const std::string& text,
                             const std::vector<std::string>& extraEvents = {},
                             const std::vector<std::string>& extraActions = {});

std::string readFile(const std::string& path);
void writeFile(const std::string& path, const std::string& contents);

}  // namespace io
}  // namespace fsmmint
