// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dmx/outcome.hpp"

namespace dmx {

struct ScenarioAccount {
  AccountId id;
  Money balance = 0;
  std::optional<Role> role;

  bool operator==(const ScenarioAccount&) const = default;
};

struct ScenarioData {
  enum class Kind { Random, Medical };
  Kind kind = Kind::Random;
  std::uint64_t chunks = 8;    // random: chunk count
  std::uint64_t rows = 64;     // medical: row count
  std::uint64_t min_rows = 0;  // medical: predicate bound; 0 means `rows`

  bool operator==(const ScenarioData&) const = default;
};

// A fully deterministic run description: genesis accounts, trade terms,
// data shape, one strategy per role and the RNG seed.
struct Scenario {
  std::string id = "scenario";
  std::string mode = "mediated";  // "mediated" | "two_party"
  std::uint64_t seed = 0;
  std::vector<ScenarioAccount> accounts;
  Money p_s = 0;  // seller ask (and the two-party price)
  Money p_b = 0;  // buyer budget
  Bps c_s = 0;
  Bps c_b = 0;
  Tick window = 1;
  Bps deposit_bps = 1000;
  ScenarioData data;
  std::map<Role, Behavior> strategies;
  std::string rho_text;

  AccountId account_for(Role role) const;          // MalformedScenario if unassigned
  Behavior strategy_for(Role role) const;          // Honest if unassigned
  void validate() const;                           // MalformedScenario

  std::string to_json() const;
  static Scenario parse(std::string_view json_text);  // MalformedScenario

  bool operator==(const Scenario&) const = default;
};

}  // namespace dmx
