// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <set>

#include "dmx/scenario.hpp"

namespace dmx {

struct ReportTerms {
  Money price = 0;  // executed price
  Bps c_s = 0;
  Bps c_b = 0;
  Tick window = 0;
  Money deposit = 0;
  EncryptionMask mask = EncryptionMask::full();

  bool operator==(const ReportTerms&) const = default;
};

// Everything a scenario run produced. Deterministic: the same scenario
// (including seed) serializes to byte-identical JSON and event log.
struct TranscriptReport {
  std::string scenario_id;
  std::uint64_t seed = 0;
  std::string mode;
  std::map<Role, AccountId> role_accounts;
  std::map<Role, Behavior> strategies;
  ReportTerms terms;
  TradeId trade_id;
  std::string terminal_phase;
  std::map<AccountId, std::int64_t> deltas;
  bool buyer_holds_data = false;
  std::optional<bool> buyer_phi_result;
  std::vector<Verdict> verdicts;
  std::optional<Payouts> payout;
  InfoFlow info_flow;
  std::vector<AttemptRecord> attempted_violations;
  std::vector<LedgerEvent> events;

  // Canonical report (events appear as count + digest; the full log is
  // written separately as JSON-lines).
  std::string to_json() const;
};

TranscriptReport run_scenario(const Scenario& scenario);  // MalformedScenario

struct FairnessVerdict {
  bool ok = true;
  std::map<Role, bool> role_ok;
  std::vector<std::string> failures;
};

// Role-specific fairness: an honest buyer ends holding data that satisfies
// the predicate XOR with a non-negative balance delta; an honest seller is
// paid exactly XOR the key was never revealed; an honest mediator collects
// the full commission whenever the trade settles, and stays blind always.
FairnessVerdict assert_fairness(const TranscriptReport& report,
                                const std::set<Role>& honest_roles);

// The mediator saw no key, no decoded data, and no plaintext byte that the
// agreed mask marks as encrypted.
bool mediator_blind(const TranscriptReport& report);

// Sum of all deltas plus funds still escrowed at the end.
std::int64_t accounting_imbalance(const TranscriptReport& report);

// The honest baseline plus the six adversary cases, ids fixed, differing
// from the base only in strategies (and id).
std::vector<Scenario> enumerate_collusion_suite(const Scenario& base);

}  // namespace dmx
