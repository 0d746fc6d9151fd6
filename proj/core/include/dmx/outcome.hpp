// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dmx/error.hpp"
#include "dmx/ledger.hpp"

namespace dmx {

enum class Role { Seller, Mediator, Buyer };
std::string_view role_name(Role r);
std::optional<Role> role_from_name(std::string_view name);

// Scripted deviations. Each is a fixed strategy; collusion is a pair of
// deviations assigned to two roles in the same scenario.
enum class Behavior {
  Honest,
  SellerJunkData,          // encode data that fails the agreed predicate
  SellerWrongRho,          // attach a regulation text other than the agreed one
  MediatorSkipPhiCheck,    // forward without any step-3 checks
  MediatorTamperPackage,   // flip a ciphertext byte before forwarding
  BuyerUnderpay,           // escrow less than p + c_b share
  BuyerFalseComplaint,     // file a forged proof against a clean trade
  OffSystemTrade,          // never engage the protocol at all
};
std::string_view behavior_name(Behavior b);
std::optional<Behavior> behavior_from_name(std::string_view name);

// What a party or the arbiter has observed during a run. Plaintext
// visibility is recorded as byte masks (0xff = byte seen in clear), so the
// leak surface of a scenario is measurable after the fact.
enum class ObsKind {
  PackageCiphertext,   // saw the encoded package
  PlainBytes,          // saw plaintext bytes of data chunks (per the masks)
  Key,                 // learned the decryption key
  DecodedData,         // holds the full plaintext
  DisputedLeafPlaintext,  // arbiter decrypted this leaf during a complaint
};
std::string_view obs_kind_name(ObsKind k);

struct Observation {
  AccountId party;
  ObsKind kind = ObsKind::PackageCiphertext;
  std::string contract;
  Word header_plain{};  // PlainBytes: visible bytes of chunk 0
  Word row_plain{};     // PlainBytes: visible bytes of later chunks
  std::uint64_t leaf = 0;  // DisputedLeafPlaintext

  bool operator==(const Observation&) const = default;
};

struct InfoFlow {
  std::vector<Observation> entries;

  void record(Observation obs) { entries.push_back(std::move(obs)); }
  bool party_saw(const AccountId& party, ObsKind kind) const;
};

struct AttemptRecord {
  std::string op;
  Errc error = Errc::NotPaid;

  bool operator==(const AttemptRecord&) const = default;
};

struct TradeOutcome {
  TradeId trade_id;             // empty if the trade never formed
  std::string terminal_phase;   // snake_case phase name
  std::map<AccountId, std::int64_t> deltas;
  bool buyer_holds_data = false;
  std::optional<bool> buyer_phi_result;
  std::vector<Verdict> verdicts;
  std::optional<Payouts> payout;
  InfoFlow info_flow;
  std::vector<AttemptRecord> attempted_violations;
};

// Balance deltas against a snapshot taken before the run.
std::map<AccountId, std::int64_t> balance_deltas(
    const std::map<AccountId, Money>& before, const Ledger& ledger);

}  // namespace dmx
