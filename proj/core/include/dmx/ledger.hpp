// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dmx/bytes.hpp"
#include "dmx/circuit.hpp"
#include "dmx/crypto.hpp"
#include "dmx/pom.hpp"

namespace dmx {

// Money is in integer micro-units; commissions in integer basis points.
// All payout arithmetic floors each term, so settlement is an exact
// integer identity and conservation can be asserted after every step.
using Money = std::uint64_t;
using Bps = std::uint32_t;
using Tick = std::uint64_t;
using AccountId = std::string;
using TradeId = std::string;
using EscrowId = std::uint64_t;

inline constexpr Bps kBpsDenominator = 10'000;

Money bps_of(Money amount, Bps bps);            // floor(amount * bps / 10^4)
Money buyer_total(Money price, Bps c_buyer);    // price + floor(c_b * price / 10^4)

struct Payouts {
  Money to_mediator = 0;
  Money to_seller = 0;
  Money refund_to_buyer = 0;
  std::string deposit_disposition;  // "returned_to_seller" | "forfeited_to_buyer" | "none"

  bool operator==(const Payouts&) const = default;
};

// Step-7 split of the buyer's escrow:
//   mediator gets floor(c_s*p) + floor(c_b*p), seller gets p - floor(c_s*p),
// which drains p + floor(c_b*p) exactly.
Payouts compute_payouts(Money price, Bps c_seller, Bps c_buyer);

// A trade agreement as registered on the ledger. `terms_hash` binds every
// caller-supplied field; id and created_at are assigned at registration.
struct Agreement {
  AccountId seller;
  std::optional<AccountId> mediator;  // absent for plain two-party trades
  AccountId buyer;
  Money price = 0;
  Bps commission_seller = 0;
  Bps commission_buyer = 0;
  Tick window = 0;            // complaint window t, in ticks after reveal
  Money deposit_required = 0; // seller deposit posted at reveal
  Digest phi_commitment{};    // description digest of the agreed circuit
  Digest rho_digest{};
  std::string rho_text;
  Digest data_id{};           // merkle root of the plaintext chunks
  EncryptionMask mask = EncryptionMask::full();
  Digest terms_hash{};
  Tick created_at = 0;

  std::string canonical_terms_json() const;
  Digest compute_terms_hash() const;

  bool operator==(const Agreement&) const = default;
};

struct Escrow {
  EscrowId id = 0;
  AccountId owner;
  Money amount = 0;
  TradeId contract;
  bool released = false;

  bool operator==(const Escrow&) const = default;
};

enum class VerdictBasis { ValidPom, InvalidComplaint, NoComplaint };
std::string_view verdict_basis_name(VerdictBasis b);

struct Verdict {
  TradeId trade;
  std::optional<AccountId> guilty;
  VerdictBasis basis = VerdictBasis::NoComplaint;

  bool operator==(const Verdict&) const = default;
};

// --- event log ---

enum class EventKind {
  AccountOpened,
  Transferred,
  Frozen,
  Unfrozen,
  AgreementRegistered,
  CommitmentPosted,
  KeyRevealed,
  ComplaintFiled,
  VerdictIssued,
  Settled,
};

std::string_view event_kind_name(EventKind k);

struct AccountOpenedPayload {
  AccountId id;
  Money initial = 0;
  bool operator==(const AccountOpenedPayload&) const = default;
};
struct TransferredPayload {
  AccountId from, to;
  Money amount = 0;
  bool operator==(const TransferredPayload&) const = default;
};
struct FrozenPayload {
  EscrowId escrow = 0;
  AccountId owner;
  Money amount = 0;
  TradeId contract;
  bool operator==(const FrozenPayload&) const = default;
};
struct UnfrozenPayload {
  EscrowId escrow = 0;
  AccountId to;
  Money amount = 0;
  bool operator==(const UnfrozenPayload&) const = default;
};
struct AgreementRegisteredPayload {
  TradeId trade;
  Agreement agreement;
  bool operator==(const AgreementRegisteredPayload&) const = default;
};
// Also used for registering offers (root + data id + rho) and requests
// (phi digest) with the contract id of the offer/request.
struct CommitmentPostedPayload {
  std::string contract;
  std::optional<Digest> root;
  std::optional<Digest> data_id;
  std::optional<Digest> phi_digest;
  std::optional<Digest> rho_digest;
  bool operator==(const CommitmentPostedPayload&) const = default;
};
struct KeyRevealedPayload {
  TradeId trade;
  Word key{};
  std::optional<EscrowId> deposit_escrow;  // absent when no deposit is required
  Money deposit = 0;
  bool operator==(const KeyRevealedPayload&) const = default;
};
struct ComplaintFiledPayload {
  TradeId trade;
  AccountId complainant;
  Digest proof_digest{};
  std::string proof_kind;
  bool operator==(const ComplaintFiledPayload&) const = default;
};
struct VerdictIssuedPayload {
  Verdict verdict;
  bool operator==(const VerdictIssuedPayload&) const = default;
};
struct SettledPayload {
  TradeId trade;
  Money to_mediator = 0;
  Money to_seller = 0;
  Money deposit_returned = 0;
  std::vector<EscrowId> drained_escrows;
  std::optional<EscrowId> deposit_escrow;
  bool operator==(const SettledPayload&) const = default;
};

using EventPayload =
    std::variant<AccountOpenedPayload, TransferredPayload, FrozenPayload,
                 UnfrozenPayload, AgreementRegisteredPayload,
                 CommitmentPostedPayload, KeyRevealedPayload,
                 ComplaintFiledPayload, VerdictIssuedPayload, SettledPayload>;

struct LedgerEvent {
  std::uint64_t seq = 0;
  Tick tick = 0;
  EventKind kind = EventKind::AccountOpened;
  EventPayload payload;

  bool operator==(const LedgerEvent&) const = default;
};

// JSON-lines codec: one event per line, keys seq/tick/kind/payload in
// lowercase snake_case, byte arrays as lowercase hex.
std::string event_to_json(const LedgerEvent& e);
LedgerEvent event_from_json(std::string_view line);  // CorruptLog
std::string events_to_jsonl(std::span<const LedgerEvent> events);
std::vector<LedgerEvent> events_from_jsonl(std::string_view text);  // CorruptLog

// CorruptLog unless seq runs 0,1,2,... from the start.
void validate_log(std::span<const LedgerEvent> events);

// Checks the per-trade ordering that the protocol promises: agreement
// before commitment before funding before reveal before complaints before
// settlement. Returns a description of the first violation, if any.
std::optional<std::string> check_protocol_order(std::span<const LedgerEvent> events);

// Per-trade state derived from the log.
struct TradeState {
  Agreement agreement;
  std::optional<Digest> root;
  std::optional<Digest> data_id;
  std::vector<EscrowId> buyer_escrows;
  std::optional<EscrowId> deposit_escrow;
  std::optional<Word> key;
  std::optional<Tick> reveal_tick;
  std::vector<Verdict> verdicts;
  bool settled = false;
  bool refunded_by_complaint = false;

  bool operator==(const TradeState&) const = default;
};

// The simulated global ledger functionality: accounts, escrow, agreements,
// complaint arbitration, settlement and an append-only event log. State is
// a pure fold over the log; every mutating operation validates, then
// applies and appends the events it emits. Single writer; see replay().
class Ledger {
 public:
  Ledger() = default;

  AccountId open_account(const AccountId& id, Money initial);
  void transfer(const AccountId& from, const AccountId& to, Money amount);
  EscrowId freeze(const AccountId& owner, Money amount, const TradeId& contract);
  void unfreeze(EscrowId escrow, const AccountId& to);
  TradeId register_agreement(const Agreement& agreement);

  // Posts commitments for a trade, an offer, or a request under `contract`.
  void post_commitment(const std::string& contract,
                       std::optional<Digest> root,
                       std::optional<Digest> data_id = std::nullopt,
                       std::optional<Digest> phi_digest = std::nullopt,
                       std::optional<Digest> rho_digest = std::nullopt);

  // Seller posts the decryption key and deposit; opens the complaint window.
  void reveal_key(const TradeId& trade, const EncodingKey& key, Money deposit);

  // Arbitration: checks the proof against the on-ledger commitment using
  // the revealed key. The circuit is part of the complainant's evidence and
  // must match the agreement's phi commitment. A valid proof refunds the
  // buyer's escrow and forfeits the seller deposit to the buyer.
  Verdict submit_complaint(const TradeId& trade, const AccountId& complainant,
                           const MisbehaviorProof& proof,
                           const PredicateCircuit& phi);

  Payouts settle(const TradeId& trade);

  Tick advance_time(Tick dt);
  Tick now() const { return tick_; }

  std::vector<LedgerEvent> read_log(std::uint64_t from_seq) const;
  const std::vector<LedgerEvent>& events() const { return events_; }

  bool has_account(const AccountId& id) const;
  Money balance(const AccountId& id) const;  // spendable; excludes escrowed funds
  const Escrow* escrow(EscrowId id) const;
  const TradeState* trade(const TradeId& id) const;
  const std::map<AccountId, Money>& balances() const { return balances_; }

  Money genesis_total() const { return genesis_total_; }
  // Sum of balances plus live escrows; equals genesis funding in every
  // reachable state.
  Money circulating_total() const;

  // Canonical JSON of the fold state (balances, escrows, trades, last event
  // tick). Two ledgers with equal logs produce identical snapshots.
  std::string snapshot_json() const;

  static Ledger replay(std::span<const LedgerEvent> events);  // CorruptLog

 private:
  Money& balance_ref(const AccountId& id);
  const TradeState& trade_ref(const TradeId& id) const;
  Money live_buyer_escrow_total(const TradeState& t) const;
  LedgerEvent make_event(EventKind kind, EventPayload payload);
  void apply_and_append(LedgerEvent e);
  void apply(const LedgerEvent& e);

  Tick tick_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t next_escrow_ = 0;
  std::uint64_t next_trade_ = 0;
  Money genesis_total_ = 0;
  std::map<AccountId, Money> balances_;
  std::map<EscrowId, Escrow> escrows_;
  std::map<TradeId, TradeState> trades_;
  std::vector<LedgerEvent> events_;
};

}  // namespace dmx
