// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "dmx/scenario.hpp"

#include <nlohmann/json.hpp>

namespace dmx {

using nlohmann::json;

AccountId Scenario::account_for(Role role) const {
  for (const ScenarioAccount& a : accounts) {
    if (a.role == role) return a.id;
  }
  fail(Errc::MalformedScenario,
       "no account assigned to role " + std::string(role_name(role)));
}

Behavior Scenario::strategy_for(Role role) const {
  auto it = strategies.find(role);
  return it == strategies.end() ? Behavior::Honest : it->second;
}

void Scenario::validate() const {
  if (mode != "mediated" && mode != "two_party") {
    fail(Errc::MalformedScenario, "mode must be mediated or two_party");
  }
  if (accounts.empty()) fail(Errc::MalformedScenario, "no accounts");
  account_for(Role::Seller);
  account_for(Role::Buyer);
  if (mode == "mediated") account_for(Role::Mediator);
  if (p_s == 0) fail(Errc::MalformedScenario, "p_s must be positive");
  if (mode == "mediated" && p_b == 0) {
    fail(Errc::MalformedScenario, "p_b must be positive");
  }
  if (c_s > kBpsDenominator || c_b > kBpsDenominator || deposit_bps > kBpsDenominator) {
    fail(Errc::MalformedScenario, "bps values must be at most 10000");
  }
  if (data.kind == ScenarioData::Kind::Random && data.chunks == 0) {
    fail(Errc::MalformedScenario, "random data needs at least one chunk");
  }

  auto allowed = [&](Role role, Behavior b) {
    switch (b) {
      case Behavior::Honest:
      case Behavior::OffSystemTrade:
        return role != Role::Mediator || b == Behavior::Honest;
      case Behavior::SellerJunkData:
      case Behavior::SellerWrongRho:
        return role == Role::Seller;
      case Behavior::MediatorSkipPhiCheck:
      case Behavior::MediatorTamperPackage:
        return role == Role::Mediator;
      case Behavior::BuyerUnderpay:
      case Behavior::BuyerFalseComplaint:
        return role == Role::Buyer;
    }
    return false;
  };
  for (const auto& [role, behavior] : strategies) {
    if (!allowed(role, behavior)) {
      fail(Errc::MalformedScenario,
           std::string(behavior_name(behavior)) + " cannot be assigned to " +
               std::string(role_name(role)));
    }
  }
}

std::string Scenario::to_json() const {
  json j;
  j["id"] = id;
  j["mode"] = mode;
  j["seed"] = seed;
  json accounts_json = json::array();
  for (const ScenarioAccount& a : accounts) {
    json aj;
    aj["balance"] = a.balance;
    aj["id"] = a.id;
    aj["role"] = a.role.has_value() ? json(std::string(role_name(*a.role))) : json(nullptr);
    accounts_json.push_back(std::move(aj));
  }
  j["accounts"] = std::move(accounts_json);
  json terms;
  terms["c_b_bps"] = c_b;
  terms["c_s_bps"] = c_s;
  terms["deposit_bps"] = deposit_bps;
  terms["p_b"] = p_b;
  terms["p_s"] = p_s;
  terms["window_t"] = window;
  j["terms"] = std::move(terms);
  json data_json;
  data_json["kind"] = data.kind == ScenarioData::Kind::Random ? "random" : "medical";
  if (data.kind == ScenarioData::Kind::Random) {
    data_json["chunks"] = data.chunks;
  } else {
    data_json["rows"] = data.rows;
    data_json["min_rows"] = data.min_rows;
  }
  j["data"] = std::move(data_json);
  json strategies_json = json::object();
  for (const auto& [role, behavior] : strategies) {
    strategies_json[std::string(role_name(role))] = std::string(behavior_name(behavior));
  }
  j["strategies"] = std::move(strategies_json);
  j["rho_text"] = rho_text;
  return j.dump(2) + "\n";
}

Scenario Scenario::parse(std::string_view json_text) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    fail(Errc::MalformedScenario, "unparseable scenario file");
  }
  try {
    Scenario s;
    s.id = j.value("id", std::string("scenario"));
    s.mode = j.value("mode", std::string("mediated"));
    s.seed = j.value("seed", std::uint64_t{0});
    for (const json& aj : j.at("accounts")) {
      ScenarioAccount a;
      a.id = aj.at("id").get<std::string>();
      a.balance = aj.at("balance").get<Money>();
      if (aj.contains("role") && !aj.at("role").is_null()) {
        auto role = role_from_name(aj.at("role").get<std::string>());
        if (!role.has_value()) {
          fail(Errc::MalformedScenario,
               "unknown role " + aj.at("role").get<std::string>());
        }
        a.role = role;
      }
      s.accounts.push_back(std::move(a));
    }
    const json& terms = j.at("terms");
    s.p_s = terms.at("p_s").get<Money>();
    s.p_b = terms.value("p_b", s.p_s);
    s.c_s = terms.value("c_s_bps", Bps{0});
    s.c_b = terms.value("c_b_bps", Bps{0});
    s.window = terms.value("window_t", Tick{1});
    s.deposit_bps = terms.value("deposit_bps", Bps{1000});
    if (j.contains("data")) {
      const json& d = j.at("data");
      std::string kind = d.value("kind", std::string("random"));
      if (kind == "random") {
        s.data.kind = ScenarioData::Kind::Random;
        s.data.chunks = d.value("chunks", std::uint64_t{8});
      } else if (kind == "medical") {
        s.data.kind = ScenarioData::Kind::Medical;
        s.data.rows = d.value("rows", std::uint64_t{64});
        s.data.min_rows = d.value("min_rows", std::uint64_t{0});
      } else {
        fail(Errc::MalformedScenario, "unknown data kind " + kind);
      }
    }
    if (j.contains("strategies")) {
      for (const auto& [key, value] : j.at("strategies").items()) {
        auto role = role_from_name(key);
        auto behavior = behavior_from_name(value.get<std::string>());
        if (!role.has_value() || !behavior.has_value()) {
          fail(Errc::MalformedScenario,
               "bad strategy entry " + key + "=" + value.get<std::string>());
        }
        s.strategies[*role] = *behavior;
      }
    }
    s.rho_text = j.value("rho_text", std::string());
    s.validate();
    return s;
  } catch (const json::exception& e) {
    fail(Errc::MalformedScenario, e.what());
  }
}

}  // namespace dmx
