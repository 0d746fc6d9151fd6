// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "dmx/adversim.hpp"

#include <nlohmann/json.hpp>

#include "dmx/mediated.hpp"

namespace dmx {

using nlohmann::json;

namespace {

struct BuiltData {
  DataBlob blob;
  PredicateSpec phi_spec;
  EncryptionMask mask = EncryptionMask::full();
};

BuiltData build_data(const Scenario& s, SplitMix64 rng) {
  BuiltData out;
  if (s.data.kind == ScenarioData::Kind::Random) {
    out.blob = make_random_blob(s.data.chunks, rng);
    out.phi_spec = hash_equals_spec(out.blob);
    out.mask = EncryptionMask::full();
    return out;
  }
  Table table = make_medical_table(s.data.rows, rng);
  out.blob = table.to_blob();
  std::uint64_t bound = s.data.min_rows == 0 ? s.data.rows : s.data.min_rows;
  out.phi_spec = medical_phi_spec(table.schema,
                                  static_cast<std::uint32_t>(out.blob.chunks.size()),
                                  bound);
  out.mask = medical_mask();
  return out;
}

}  // namespace

TranscriptReport run_scenario(const Scenario& scenario) {
  scenario.validate();

  TranscriptReport report;
  report.scenario_id = scenario.id;
  report.seed = scenario.seed;
  report.mode = scenario.mode;
  report.role_accounts[Role::Seller] = scenario.account_for(Role::Seller);
  report.role_accounts[Role::Buyer] = scenario.account_for(Role::Buyer);
  if (scenario.mode == "mediated") {
    report.role_accounts[Role::Mediator] = scenario.account_for(Role::Mediator);
  }
  report.strategies = scenario.strategies;

  SplitMix64 rng(scenario.seed);
  BuiltData data = build_data(scenario, rng.fork(1));

  Ledger ledger;
  for (const ScenarioAccount& a : scenario.accounts) {
    ledger.open_account(a.id, a.balance);
  }
  const std::map<AccountId, Money> genesis = ledger.balances();

  report.terms.price = scenario.p_s;
  report.terms.c_s = scenario.mode == "mediated" ? scenario.c_s : 0;
  report.terms.c_b = scenario.mode == "mediated" ? scenario.c_b : 0;
  report.terms.window = scenario.window;
  report.terms.deposit = bps_of(scenario.p_s, scenario.deposit_bps);
  report.terms.mask = data.mask;

  PartyScript seller{scenario.strategy_for(Role::Seller)};
  PartyScript buyer{scenario.strategy_for(Role::Buyer)};

  if (seller.behavior == Behavior::OffSystemTrade ||
      buyer.behavior == Behavior::OffSystemTrade) {
    // The pair trades outside the system: nothing touches the ledger, the
    // mediator sees nothing, and there is no log to reconstruct from.
    report.terminal_phase = "off_system";
    report.deltas = balance_deltas(genesis, ledger);
    report.events = ledger.read_log(0);
    return report;
  }

  TradeOutcome outcome;
  SplitMix64 run_rng = rng.fork(2);
  if (scenario.mode == "two_party") {
    TwoPartyTerms terms;
    terms.price = scenario.p_s;
    terms.window = scenario.window;
    terms.deposit = bps_of(scenario.p_s, scenario.deposit_bps);
    terms.rho_text = scenario.rho_text;
    outcome = run_two_party(ledger, report.role_accounts[Role::Seller], seller,
                            report.role_accounts[Role::Buyer], buyer, terms,
                            data.blob, data.phi_spec, run_rng);
  } else {
    PartyScript mediator{scenario.strategy_for(Role::Mediator)};
    MediatedRunTerms terms;
    terms.ask = scenario.p_s;
    terms.budget = scenario.p_b;
    terms.c_seller = scenario.c_s;
    terms.c_buyer = scenario.c_b;
    terms.window = scenario.window;
    terms.deposit_bps = scenario.deposit_bps;
    terms.rho_text = scenario.rho_text;
    terms.mask = data.mask;
    outcome = run_mediated(ledger, report.role_accounts[Role::Seller], seller,
                           report.role_accounts[Role::Mediator], mediator,
                           report.role_accounts[Role::Buyer], buyer, terms,
                           data.blob, data.phi_spec, run_rng);
  }

  report.trade_id = outcome.trade_id;
  report.terminal_phase = outcome.terminal_phase;
  report.deltas = outcome.deltas;
  report.buyer_holds_data = outcome.buyer_holds_data;
  report.buyer_phi_result = outcome.buyer_phi_result;
  report.verdicts = outcome.verdicts;
  report.payout = outcome.payout;
  report.info_flow = outcome.info_flow;
  report.attempted_violations = outcome.attempted_violations;
  report.events = ledger.read_log(0);
  if (report.verdicts.empty() && report.terminal_phase == "settled") {
    report.verdicts.push_back({outcome.trade_id, std::nullopt, VerdictBasis::NoComplaint});
  }
  return report;
}

std::string TranscriptReport::to_json() const {
  json j;
  j["scenario_id"] = scenario_id;
  j["seed"] = seed;
  j["mode"] = mode;
  json roles = json::object();
  for (const auto& [role, account] : role_accounts) {
    roles[std::string(role_name(role))] = account;
  }
  j["role_accounts"] = std::move(roles);
  json strategies_json = json::object();
  for (const auto& [role, behavior] : strategies) {
    strategies_json[std::string(role_name(role))] = std::string(behavior_name(behavior));
  }
  j["strategies"] = std::move(strategies_json);
  json terms_json;
  terms_json["price"] = terms.price;
  terms_json["c_s_bps"] = terms.c_s;
  terms_json["c_b_bps"] = terms.c_b;
  terms_json["window_t"] = terms.window;
  terms_json["deposit"] = terms.deposit;
  terms_json["header_mask"] = to_hex(terms.mask.header);
  terms_json["row_mask"] = to_hex(terms.mask.rows);
  j["terms"] = std::move(terms_json);
  j["trade_id"] = trade_id;
  j["terminal_phase"] = terminal_phase;
  json deltas_json = json::object();
  for (const auto& [account, delta] : deltas) deltas_json[account] = delta;
  j["deltas"] = std::move(deltas_json);
  j["buyer_holds_data"] = buyer_holds_data;
  j["buyer_phi_result"] =
      buyer_phi_result.has_value() ? json(*buyer_phi_result) : json(nullptr);
  json verdicts_json = json::array();
  for (const Verdict& v : verdicts) {
    json vj;
    vj["trade"] = v.trade;
    vj["basis"] = std::string(verdict_basis_name(v.basis));
    vj["guilty"] = v.guilty.has_value() ? json(*v.guilty) : json(nullptr);
    verdicts_json.push_back(std::move(vj));
  }
  j["verdicts"] = std::move(verdicts_json);
  if (payout.has_value()) {
    json pj;
    pj["to_mediator"] = payout->to_mediator;
    pj["to_seller"] = payout->to_seller;
    pj["refund_to_buyer"] = payout->refund_to_buyer;
    pj["deposit_disposition"] = payout->deposit_disposition;
    j["payout"] = std::move(pj);
  } else {
    j["payout"] = nullptr;
  }
  json flow = json::array();
  for (const Observation& o : info_flow.entries) {
    json oj;
    oj["party"] = o.party;
    oj["kind"] = std::string(obs_kind_name(o.kind));
    oj["contract"] = o.contract;
    if (o.kind == ObsKind::PlainBytes) {
      oj["header_plain"] = to_hex(o.header_plain);
      oj["row_plain"] = to_hex(o.row_plain);
    }
    if (o.kind == ObsKind::DisputedLeafPlaintext) oj["leaf"] = o.leaf;
    flow.push_back(std::move(oj));
  }
  j["info_flow"] = std::move(flow);
  json attempts = json::array();
  for (const AttemptRecord& a : attempted_violations) {
    json aj;
    aj["op"] = a.op;
    aj["error"] = std::string(errc_name(a.error));
    attempts.push_back(std::move(aj));
  }
  j["attempted_violations"] = std::move(attempts);
  std::string jsonl = events_to_jsonl(events);
  j["events_count"] = events.size();
  j["events_digest"] = to_hex(
      sha256(ByteSpan(reinterpret_cast<const std::uint8_t*>(jsonl.data()), jsonl.size())));
  return j.dump(2) + "\n";
}

bool mediator_blind(const TranscriptReport& report) {
  auto it = report.role_accounts.find(Role::Mediator);
  if (it == report.role_accounts.end()) return true;
  const AccountId& mediator = it->second;
  for (const Observation& o : report.info_flow.entries) {
    if (o.party != mediator) continue;
    if (o.kind == ObsKind::Key || o.kind == ObsKind::DecodedData) return false;
    if (o.kind == ObsKind::PlainBytes) {
      for (std::size_t i = 0; i < kWordSize; ++i) {
        // A byte both visible to the mediator and marked encrypted is a leak.
        if ((o.header_plain[i] & report.terms.mask.header[i]) != 0) return false;
        if ((o.row_plain[i] & report.terms.mask.rows[i]) != 0) return false;
      }
    }
  }
  return true;
}

std::int64_t accounting_imbalance(const TranscriptReport& report) {
  std::int64_t total = 0;
  for (const auto& [account, delta] : report.deltas) total += delta;
  // Escrows still live at the end of the run count as unreturned funds.
  Ledger replayed = Ledger::replay(report.events);
  total += static_cast<std::int64_t>(replayed.circulating_total()) -
           static_cast<std::int64_t>(replayed.genesis_total());
  return total;
}

FairnessVerdict assert_fairness(const TranscriptReport& report,
                                const std::set<Role>& honest_roles) {
  FairnessVerdict verdict;
  auto record = [&](Role role, bool ok, const std::string& why) {
    verdict.role_ok[role] = ok;
    if (!ok) {
      verdict.ok = false;
      verdict.failures.push_back(std::string(role_name(role)) + ": " + why);
    }
  };

  bool key_revealed = false;
  for (const LedgerEvent& e : report.events) {
    if (e.kind == EventKind::KeyRevealed) key_revealed = true;
  }
  bool settled = report.terminal_phase == "settled";
  Payouts expected = compute_payouts(report.terms.price, report.terms.c_s,
                                     report.terms.c_b);

  for (Role role : honest_roles) {
    auto acct_it = report.role_accounts.find(role);
    if (acct_it == report.role_accounts.end()) continue;
    const AccountId& acct = acct_it->second;
    std::int64_t delta = report.deltas.contains(acct) ? report.deltas.at(acct) : 0;

    switch (role) {
      case Role::Buyer: {
        bool got_goods = report.buyer_holds_data &&
                         report.buyer_phi_result.value_or(false);
        bool non_negative = delta >= 0;
        record(role, got_goods != non_negative,
               "holds-satisfying-data xor non-negative delta violated (delta " +
                   std::to_string(delta) + ")");
        break;
      }
      case Role::Seller: {
        bool paid_exact =
            settled && delta == static_cast<std::int64_t>(expected.to_seller);
        bool key_secret = !key_revealed;
        record(role, paid_exact != key_secret,
               "paid xor key-still-secret violated (delta " + std::to_string(delta) +
                   ")");
        break;
      }
      case Role::Mediator: {
        bool commission_ok =
            settled ? delta == static_cast<std::int64_t>(expected.to_mediator)
                    : delta == 0;
        bool blind = mediator_blind(report);
        record(role, commission_ok && blind,
               commission_ok ? "mediator saw plaintext or key"
                             : "commission not paid in full (delta " +
                                   std::to_string(delta) + ")");
        break;
      }
    }
  }
  return verdict;
}

std::vector<Scenario> enumerate_collusion_suite(const Scenario& base) {
  base.validate();
  if (base.mode != "mediated") {
    fail(Errc::MalformedScenario, "collusion suite needs a mediated base scenario");
  }
  for (const auto& [role, behavior] : base.strategies) {
    if (behavior != Behavior::Honest) {
      fail(Errc::MalformedScenario, "collusion suite base must be fully honest");
    }
  }

  struct Case {
    std::string id;
    std::map<Role, Behavior> strategies;
  };
  const std::vector<Case> cases = {
      {"honest_baseline", {}},
      {"malicious_seller", {{Role::Seller, Behavior::SellerJunkData}}},
      {"malicious_mediator", {{Role::Mediator, Behavior::MediatorTamperPackage}}},
      {"malicious_buyer", {{Role::Buyer, Behavior::BuyerFalseComplaint}}},
      {"collusion_seller_mediator",
       {{Role::Seller, Behavior::SellerJunkData},
        {Role::Mediator, Behavior::MediatorSkipPhiCheck}}},
      {"collusion_seller_buyer",
       {{Role::Seller, Behavior::OffSystemTrade},
        {Role::Buyer, Behavior::OffSystemTrade}}},
      {"collusion_mediator_buyer",
       {{Role::Mediator, Behavior::MediatorSkipPhiCheck},
        {Role::Buyer, Behavior::BuyerUnderpay}}},
  };

  std::vector<Scenario> suite;
  suite.reserve(cases.size());
  for (const Case& c : cases) {
    Scenario s = base;
    s.id = c.id;
    s.strategies = c.strategies;
    suite.push_back(std::move(s));
  }
  return suite;
}

}  // namespace dmx
