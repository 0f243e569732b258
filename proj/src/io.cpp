#include "fsmmint/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fsmmint/errors.hpp"

namespace fsmmint {
namespace io {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0, end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

bool isIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

RawElement parseElement(const std::string& text, int lineNo) {
  std::size_t open = text.find('(');
  std::size_t close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw IoError("line " + std::to_string(lineNo) +
                  ": expected event(actions...): " + text);
  RawElement element;
  element.event = trim(text.substr(0, open));
  if (element.event.empty())
    throw IoError("line " + std::to_string(lineNo) + ": empty event name");
  std::string inside = text.substr(open + 1, close - open - 1);
  std::stringstream parts(inside);
  std::string part;
  while (std::getline(parts, part, ',')) {
    part = trim(part);
    if (!part.empty()) element.actions.push_back(part);
  }
  return element;
}

}  // namespace

std::vector<RawScenario> parseScenarioText(const std::string& text) {
  std::vector<RawScenario> scenarios;
  std::istringstream lines(text);
  std::string line;
  int lineNo = 0;
  while (std::getline(lines, line)) {
    ++lineNo;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    RawScenario scenario;
    std::stringstream elements(line);
    std::string element;
    while (std::getline(elements, element, ';')) {
      element = trim(element);
      if (element.empty()) continue;
      scenario.push_back(parseElement(element, lineNo));
    }
    if (!scenario.empty()) scenarios.push_back(std::move(scenario));
  }
  return scenarios;
}

std::vector<std::string> parseLtlLines(const std::string& text) {
  std::vector<std::string> formulas;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    formulas.push_back(line);
  }
  return formulas;
}

void collectLtlSymbols(const std::string& line, std::vector<std::string>& events,
                       std::vector<std::string>& actions) {
  auto scan = [&](const std::string& keyword, std::vector<std::string>& out) {
    std::size_t pos = 0;
    while ((pos = line.find(keyword, pos)) != std::string::npos) {
      std::size_t cursor = pos + keyword.size();
      pos = cursor;
      while (cursor < line.size() && std::isspace(static_cast<unsigned char>(line[cursor])))
        ++cursor;
      if (cursor >= line.size() || line[cursor] != '(') continue;
      ++cursor;
      while (cursor < line.size() && std::isspace(static_cast<unsigned char>(line[cursor])))
        ++cursor;
      std::size_t start = cursor;
      while (cursor < line.size() && isIdentChar(line[cursor])) ++cursor;
      if (cursor > start) out.push_back(line.substr(start, cursor - start));
    }
  };
  scan("wasEvent", events);
  scan("wasAction", actions);
}

Alphabet inferAlphabet(const std::vector<RawScenario>& scenarios,
                       const std::vector<std::string>& ltlLines) {
  std::vector<std::string> events, actions;
  auto addUnique = [](std::vector<std::string>& list, const std::string& s) {
    if (std::find(list.begin(), list.end(), s) == list.end()) list.push_back(s);
  };
  for (const auto& sc : scenarios) {
    for (const auto& el : sc) {
      addUnique(events, el.event);
      for (const auto& a : el.actions) addUnique(actions, a);
    }
  }
  std::vector<std::string> ltlEvents, ltlActions;
  for (const auto& line : ltlLines) collectLtlSymbols(line, ltlEvents, ltlActions);
  for (const auto& e : ltlEvents) addUnique(events, e);
  for (const auto& a : ltlActions) addUnique(actions, a);
  if (events.empty())
    throw IoError("no events found in the scenario and LTL inputs");
  return Alphabet(std::move(events), std::move(actions));
}

std::vector<Scenario> bindScenarios(const std::vector<RawScenario>& raw,
                                    const Alphabet& alphabet) {
  std::vector<Scenario> scenarios;
  for (const auto& rawScenario : raw) {
    Scenario scenario;
    for (const auto& element : rawScenario) {
      auto event = alphabet.eventId(element.event);
      if (!event) throw UnknownSymbolError("unknown event: " + element.event);
      ActionSet outputs;
      for (const auto& a : element.actions) {
        auto action = alphabet.actionId(a);
        if (!action) throw UnknownSymbolError("unknown action: " + a);
        outputs.push_back(*action);
      }
      scenario.push_back({*event, canonicalActionSet(std::move(outputs))});
    }
    scenarios.push_back(std::move(scenario));
  }
  return scenarios;
}

namespace {

std::string elementToText(const ScenarioElement& element, const Alphabet& alphabet) {
  std::string out = alphabet.eventName(element.event) + "(";
  for (std::size_t i = 0; i < element.outputs.size(); ++i) {
    if (i > 0) out += ",";
    out += alphabet.actionName(element.outputs[i]);
  }
  return out + ")";
}

}  // namespace

std::string scenarioToText(const Scenario& scenario, const Alphabet& alphabet) {
  std::string out;
  for (std::size_t i = 0; i < scenario.size(); ++i) {
    if (i > 0) out += "; ";
    out += elementToText(scenario[i], alphabet);
  }
  return out;
}

std::string counterexampleToText(const Counterexample& cex, const Alphabet& alphabet) {
  auto pair = [&](const ScenarioElement& el) {
    std::string s = "(" + alphabet.eventName(el.event);
    for (int a : el.outputs) s += ", " + alphabet.actionName(a);
    return s + ")";
  };
  std::string out;
  for (std::size_t i = 0; i < cex.prefix.size(); ++i) {
    if (i > 0) out += ", ";
    out += pair(cex.prefix[i]);
  }
  if (cex.kind == Counterexample::Kind::Looping) {
    if (!cex.prefix.empty()) out += ", ";
    out += "[";
    for (std::size_t i = 0; i < cex.cycle.size(); ++i) {
      if (i > 0) out += ", ";
      out += pair(cex.cycle[i]);
    }
    out += "]";
  }
  return out;
}

std::string fsmToDot(const Fsm& fsm, const Alphabet& alphabet) {
  std::ostringstream out;
  out << "digraph fsm {\n  rankdir=LR;\n  node [shape=circle];\n";
  out << "  __init [shape=point];\n  __init -> s1;\n";
  for (int s = 1; s <= fsm.stateCount(); ++s) {
    for (int e = 0; e < fsm.eventCount(); ++e) {
      const auto& t = fsm.transition(s, e);
      if (!t) continue;
      out << "  s" << s << " -> s" << t->dst << " [label=\"" << alphabet.eventName(e)
          << " / ";
      for (std::size_t i = 0; i < t->outputs.size(); ++i) {
        if (i > 0) out << ",";
        out << alphabet.actionName(t->outputs[i]);
      }
      out << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string fsmToJson(const Fsm& fsm, const Alphabet& alphabet) {
  nlohmann::json j;
  j["stateCount"] = fsm.stateCount();
  j["initial"] = Fsm::kInitialState;
  j["transitions"] = nlohmann::json::array();
  for (int s = 1; s <= fsm.stateCount(); ++s) {
    for (int e = 0; e < fsm.eventCount(); ++e) {
      const auto& t = fsm.transition(s, e);
      if (!t) continue;
      nlohmann::json entry;
      entry["src"] = s;
      entry["event"] = alphabet.eventName(e);
      entry["dst"] = t->dst;
      entry["outputs"] = nlohmann::json::array();
      for (int a : t->outputs) entry["outputs"].push_back(alphabet.actionName(a));
      j["transitions"].push_back(std::move(entry));
    }
  }
  return j.dump(2) + "\n";
}

Fsm fsmFromJson(const std::string& text, const Alphabet& alphabet) {
  nlohmann::json j = nlohmann::json::parse(text);
  Fsm fsm(j.at("stateCount").get<int>(), alphabet.eventCount());
  if (j.value("initial", 1) != Fsm::kInitialState)
    throw IoError("the initial state must be 1");
  for (const auto& entry : j.at("transitions")) {
    auto event = alphabet.eventId(entry.at("event").get<std::string>());
    if (!event) throw UnknownSymbolError("unknown event in FSM JSON");
    ActionSet outputs;
    for (const auto& a : entry.at("outputs")) {
      auto action = alphabet.actionId(a.get<std::string>());
      if (!action) throw UnknownSymbolError("unknown action in FSM JSON");
      outputs.push_back(*action);
    }
    fsm.setTransition(entry.at("src").get<int>(), *event, entry.at("dst").get<int>(),
                      std::move(outputs));
  }
  return fsm;
}

Alphabet alphabetFromFsmJson(const std::string& text,
                             const std::vector<std::string>& extraEvents,
                             const std::vector<std::string>& extraActions) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<std::string> events, actions;
  auto addUnique = [](std::vector<std::string>& list, const std::string& s) {
    if (std::find(list.begin(), list.end(), s) == list.end()) list.push_back(s);
  };
  for (const auto& entry : j.at("transitions")) {
    addUnique(events, entry.at("event").get<std::string>());
    for (const auto& a : entry.at("outputs")) addUnique(actions, a.get<std::string>());
  }
  for (const auto& e : extraEvents) addUnique(events, e);
  for (const auto& a : extraActions) addUnique(actions, a);
  return Alphabet(std::move(events), std::move(actions));
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void writeFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << contents;
}

}  // namespace io
}  // namespace fsmmint
