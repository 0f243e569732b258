#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fsmmint {

/// Ordered event and action vocabularies. The construction order is fixed and
/// used for every tie-break in the toolkit (encodings, BFS symmetry breaking,
/// backtracking destination order), so two runs built from the same symbol
/// lists behave identically.
class Alphabet {
 public:
  Alphabet(std::vector<std::string> events, std::vector<std::string> actions);

  int eventCount() const { return static_cast<int>(events_.size()); }
  int actionCount() const { return static_cast<int>(actions_.size()); }

  const std::string& eventName(int id) const { return events_.at(id); }
  const std::string& actionName(int id) const { return actions_.at(id); }

  std::optional<int> eventId(std::string_view name) const;
  std::optional<int> actionId(std::string_view name) const;

  const std::vector<std::string>& events() const { return events_; }
  const std::vector<std::string>& actions() const { return actions_; }

 private:
  std::vector<std::string> events_;
  std::vector<std::string> actions_;
  std::unordered_map<std::string, int> eventIds_;
  std::unordered_map<std::string, int> actionIds_;
};

}  // namespace fsmmint
