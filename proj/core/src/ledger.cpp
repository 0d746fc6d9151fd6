// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "dmx/ledger.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "dmx/error.hpp"

namespace dmx {

Money bps_of(Money amount, Bps bps) {
  return static_cast<Money>(
      (static_cast<unsigned __int128>(amount) * bps) / kBpsDenominator);
}

Money buyer_total(Money price, Bps c_buyer) {
  return price + bps_of(price, c_buyer);
}

Payouts compute_payouts(Money price, Bps c_seller, Bps c_buyer) {
  Payouts p;
  p.to_mediator = bps_of(price, c_seller) + bps_of(price, c_buyer);
  p.to_seller = price - bps_of(price, c_seller);
  p.refund_to_buyer = 0;
  p.deposit_disposition = "returned_to_seller";
  return p;
}

std::string_view verdict_basis_name(VerdictBasis b) {
  switch (b) {
    case VerdictBasis::ValidPom: return "valid_pom";
    case VerdictBasis::InvalidComplaint: return "invalid_complaint";
    case VerdictBasis::NoComplaint: return "no_complaint";
  }
  return "?";
}

std::string_view event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::AccountOpened: return "account_opened";
    case EventKind::Transferred: return "transferred";
    case EventKind::Frozen: return "frozen";
    case EventKind::Unfrozen: return "unfrozen";
    case EventKind::AgreementRegistered: return "agreement_registered";
    case EventKind::CommitmentPosted: return "commitment_posted";
    case EventKind::KeyRevealed: return "key_revealed";
    case EventKind::ComplaintFiled: return "complaint_filed";
    case EventKind::VerdictIssued: return "verdict_issued";
    case EventKind::Settled: return "settled";
  }
  return "?";
}

// --- ledger ops ---

AccountId Ledger::open_account(const AccountId& id, Money initial) {
  if (id.empty() || id.size() > 64) {
    throw std::invalid_argument("account id must be 1..64 bytes");
  }
  if (balances_.contains(id)) {
    fail(Errc::DuplicateAccount, "account " + id + " already open");
  }
  apply_and_append(make_event(EventKind::AccountOpened,
                              AccountOpenedPayload{id, initial}));
  return id;
}

void Ledger::transfer(const AccountId& from, const AccountId& to, Money amount) {
  if (!balances_.contains(from)) fail(Errc::UnknownAccount, from);
  if (!balances_.contains(to)) fail(Errc::UnknownAccount, to);
  if (balances_.at(from) < amount) {
    fail(Errc::InsufficientFunds,
         from + " has " + std::to_string(balances_.at(from)) + ", needs " +
             std::to_string(amount));
  }
  apply_and_append(
      make_event(EventKind::Transferred, TransferredPayload{from, to, amount}));
}

EscrowId Ledger::freeze(const AccountId& owner, Money amount, const TradeId& contract) {
  if (!balances_.contains(owner)) fail(Errc::UnknownAccount, owner);
  if (amount == 0) fail(Errc::InvalidAmount, "cannot freeze zero");
  if (balances_.at(owner) < amount) {
    fail(Errc::InsufficientFunds,
         owner + " has " + std::to_string(balances_.at(owner)) + ", needs " +
             std::to_string(amount));
  }
  EscrowId id = next_escrow_;
  apply_and_append(
      make_event(EventKind::Frozen, FrozenPayload{id, owner, amount, contract}));
  return id;
}

void Ledger::unfreeze(EscrowId escrow, const AccountId& to) {
  auto it = escrows_.find(escrow);
  if (it == escrows_.end()) {
    fail(Errc::UnknownEscrow, "escrow " + std::to_string(escrow));
  }
  if (it->second.released) {
    fail(Errc::AlreadyReleased, "escrow " + std::to_string(escrow));
  }
  if (!balances_.contains(to)) fail(Errc::UnknownAccount, to);
  apply_and_append(make_event(
      EventKind::Unfrozen, UnfrozenPayload{escrow, to, it->second.amount}));
}

TradeId Ledger::register_agreement(const Agreement& agreement) {
  if (!balances_.contains(agreement.seller)) fail(Errc::UnknownAccount, agreement.seller);
  if (!balances_.contains(agreement.buyer)) fail(Errc::UnknownAccount, agreement.buyer);
  if (agreement.mediator.has_value() && !balances_.contains(*agreement.mediator)) {
    fail(Errc::UnknownAccount, *agreement.mediator);
  }
  if (agreement.commission_seller > kBpsDenominator ||
      agreement.commission_buyer > kBpsDenominator) {
    fail(Errc::InvalidPrice, "commission above 100%");
  }
  if (!agreement.mediator.has_value() &&
      (agreement.commission_seller != 0 || agreement.commission_buyer != 0)) {
    fail(Errc::InvalidPrice, "commissions without a mediator");
  }
  if (agreement.compute_terms_hash() != agreement.terms_hash) {
    fail(Errc::HashMismatch, "terms hash does not bind the agreement fields");
  }
  Agreement stored = agreement;
  stored.created_at = tick_;
  TradeId id = "t" + std::to_string(next_trade_);
  apply_and_append(make_event(EventKind::AgreementRegistered,
                              AgreementRegisteredPayload{id, std::move(stored)}));
  return id;
}

void Ledger::post_commitment(const std::string& contract, std::optional<Digest> root,
                             std::optional<Digest> data_id,
                             std::optional<Digest> phi_digest,
                             std::optional<Digest> rho_digest) {
  auto it = trades_.find(contract);
  if (it != trades_.end() && it->second.root.has_value() && root.has_value()) {
    fail(Errc::AlreadyPosted, "commitment for " + contract);
  }
  apply_and_append(make_event(
      EventKind::CommitmentPosted,
      CommitmentPostedPayload{contract, root, data_id, phi_digest, rho_digest}));
}

void Ledger::reveal_key(const TradeId& trade, const EncodingKey& key, Money deposit) {
  const TradeState& t = trade_ref(trade);
  if (t.key.has_value()) fail(Errc::AlreadyRevealed, trade);
  if (!t.root.has_value()) {
    fail(Errc::CommitmentMissing, "no commitment posted for " + trade);
  }
  Money funded = live_buyer_escrow_total(t);
  Money due = buyer_total(t.agreement.price, t.agreement.commission_buyer);
  if (funded != due) {
    fail(Errc::NotPaid, trade + " funded " + std::to_string(funded) + " of " +
                            std::to_string(due));
  }
  if (deposit < t.agreement.deposit_required) {
    fail(Errc::DepositBelowMinimum,
         std::to_string(deposit) + " below required " +
             std::to_string(t.agreement.deposit_required));
  }
  if (balances_.at(t.agreement.seller) < deposit) {
    fail(Errc::InsufficientFunds, "seller cannot cover the deposit");
  }
  std::optional<EscrowId> deposit_escrow;
  if (deposit > 0) {
    deposit_escrow = next_escrow_;
    apply_and_append(make_event(
        EventKind::Frozen,
        FrozenPayload{*deposit_escrow, t.agreement.seller, deposit, trade}));
  }
  apply_and_append(make_event(
      EventKind::KeyRevealed,
      KeyRevealedPayload{trade, key.key, deposit_escrow, deposit}));
}

Verdict Ledger::submit_complaint(const TradeId& trade, const AccountId& complainant,
                                 const MisbehaviorProof& proof,
                                 const PredicateCircuit& phi) {
  const TradeState& t = trade_ref(trade);
  if (t.refunded_by_complaint) fail(Errc::ComplaintUpheld, trade + " already resolved");
  if (!t.key.has_value()) fail(Errc::KeyNotRevealed, trade);
  if (tick_ > *t.reveal_tick + t.agreement.window) {
    fail(Errc::DeadlineExpired,
         "complaint at tick " + std::to_string(tick_) + ", window closed at " +
             std::to_string(*t.reveal_tick + t.agreement.window));
  }
  if (phi.description_digest() != t.agreement.phi_commitment) {
    fail(Errc::HashMismatch, "circuit does not match the agreed commitment");
  }

  bool valid = verify_pom(*t.root, phi, EncodingKey{*t.key}, proof,
                          t.agreement.mask);
  Verdict verdict;
  verdict.trade = trade;
  verdict.basis = valid ? VerdictBasis::ValidPom : VerdictBasis::InvalidComplaint;
  if (valid) verdict.guilty = t.agreement.seller;

  apply_and_append(make_event(
      EventKind::ComplaintFiled,
      ComplaintFiledPayload{trade, complainant, proof.digest(),
                            std::string(pom_kind_name(proof.kind))}));
  apply_and_append(
      make_event(EventKind::VerdictIssued, VerdictIssuedPayload{verdict}));

  if (valid) {
    // Refund the buyer in full and forfeit the seller deposit to the buyer.
    std::vector<EscrowId> to_refund;
    for (EscrowId e : t.buyer_escrows) {
      if (!escrows_.at(e).released) to_refund.push_back(e);
    }
    for (EscrowId e : to_refund) {
      apply_and_append(make_event(
          EventKind::Unfrozen,
          UnfrozenPayload{e, t.agreement.buyer, escrows_.at(e).amount}));
    }
    if (t.deposit_escrow.has_value() && !escrows_.at(*t.deposit_escrow).released) {
      apply_and_append(make_event(
          EventKind::Unfrozen,
          UnfrozenPayload{*t.deposit_escrow, t.agreement.buyer,
                          escrows_.at(*t.deposit_escrow).amount}));
    }
  }
  return verdict;
}

Payouts Ledger::settle(const TradeId& trade) {
  const TradeState& t = trade_ref(trade);
  if (t.settled) fail(Errc::AlreadySettled, trade);
  if (t.refunded_by_complaint) fail(Errc::ComplaintUpheld, trade);
  if (!t.key.has_value()) fail(Errc::KeyNotRevealed, trade);
  if (tick_ <= *t.reveal_tick + t.agreement.window) {
    fail(Errc::WindowStillOpen,
         "window open until tick " +
             std::to_string(*t.reveal_tick + t.agreement.window));
  }
  Money due = buyer_total(t.agreement.price, t.agreement.commission_buyer);
  if (live_buyer_escrow_total(t) != due) {
    fail(Errc::UnknownEscrow, "buyer escrow no longer intact");
  }

  Payouts payouts = compute_payouts(t.agreement.price, t.agreement.commission_seller,
                                    t.agreement.commission_buyer);
  SettledPayload p;
  p.trade = trade;
  p.to_mediator = payouts.to_mediator;
  p.to_seller = payouts.to_seller;
  for (EscrowId e : t.buyer_escrows) {
    if (!escrows_.at(e).released) p.drained_escrows.push_back(e);
  }
  if (t.deposit_escrow.has_value() && !escrows_.at(*t.deposit_escrow).released) {
    p.deposit_escrow = t.deposit_escrow;
    p.deposit_returned = escrows_.at(*t.deposit_escrow).amount;
  }
  payouts.deposit_disposition = p.deposit_escrow ? "returned_to_seller" : "none";
  apply_and_append(make_event(EventKind::Settled, std::move(p)));
  return payouts;
}

Tick Ledger::advance_time(Tick dt) {
  tick_ += dt;
  return tick_;
}

std::vector<LedgerEvent> Ledger::read_log(std::uint64_t from_seq) const {
  std::vector<LedgerEvent> out;
  for (const LedgerEvent& e : events_) {
    if (e.seq >= from_seq) out.push_back(e);
  }
  return out;
}

bool Ledger::has_account(const AccountId& id) const { return balances_.contains(id); }

Money Ledger::balance(const AccountId& id) const {
  auto it = balances_.find(id);
  if (it == balances_.end()) fail(Errc::UnknownAccount, id);
  return it->second;
}

const Escrow* Ledger::escrow(EscrowId id) const {
  auto it = escrows_.find(id);
  return it == escrows_.end() ? nullptr : &it->second;
}

const TradeState* Ledger::trade(const TradeId& id) const {
  auto it = trades_.find(id);
  return it == trades_.end() ? nullptr : &it->second;
}

Money Ledger::circulating_total() const {
  Money total = 0;
  for (const auto& [id, bal] : balances_) total += bal;
  for (const auto& [id, e] : escrows_) {
    if (!e.released) total += e.amount;
  }
  return total;
}

Ledger Ledger::replay(std::span<const LedgerEvent> events) {
  validate_log(events);
  Ledger l;
  for (const LedgerEvent& e : events) {
    l.apply(e);
    l.events_.push_back(e);
  }
  return l;
}

// --- internals ---

Money& Ledger::balance_ref(const AccountId& id) { return balances_.at(id); }

const TradeState& Ledger::trade_ref(const TradeId& id) const {
  auto it = trades_.find(id);
  if (it == trades_.end()) fail(Errc::NoSuchTrade, id);
  return it->second;
}

Money Ledger::live_buyer_escrow_total(const TradeState& t) const {
  Money total = 0;
  for (EscrowId e : t.buyer_escrows) {
    const Escrow& es = escrows_.at(e);
    if (!es.released) total += es.amount;
  }
  return total;
}

LedgerEvent Ledger::make_event(EventKind kind, EventPayload payload) {
  LedgerEvent e;
  e.seq = next_seq_;
  e.tick = tick_;
  e.kind = kind;
  e.payload = std::move(payload);
  return e;
}

void Ledger::apply_and_append(LedgerEvent e) {
  apply(e);
  events_.push_back(std::move(e));
}

void Ledger::apply(const LedgerEvent& e) {
  next_seq_ = e.seq + 1;
  if (e.tick > tick_) tick_ = e.tick;
  switch (e.kind) {
    case EventKind::AccountOpened: {
      const auto& p = std::get<AccountOpenedPayload>(e.payload);
      balances_[p.id] = p.initial;
      genesis_total_ += p.initial;
      break;
    }
    case EventKind::Transferred: {
      const auto& p = std::get<TransferredPayload>(e.payload);
      balance_ref(p.from) -= p.amount;
      balance_ref(p.to) += p.amount;
      break;
    }
    case EventKind::Frozen: {
      const auto& p = std::get<FrozenPayload>(e.payload);
      balance_ref(p.owner) -= p.amount;
      escrows_[p.escrow] = Escrow{p.escrow, p.owner, p.amount, p.contract, false};
      if (p.escrow >= next_escrow_) next_escrow_ = p.escrow + 1;
      auto t = trades_.find(p.contract);
      if (t != trades_.end() && t->second.agreement.buyer == p.owner) {
        t->second.buyer_escrows.push_back(p.escrow);
      }
      break;
    }
    case EventKind::Unfrozen: {
      const auto& p = std::get<UnfrozenPayload>(e.payload);
      escrows_.at(p.escrow).released = true;
      balance_ref(p.to) += p.amount;
      break;
    }
    case EventKind::AgreementRegistered: {
      const auto& p = std::get<AgreementRegisteredPayload>(e.payload);
      TradeState t;
      t.agreement = p.agreement;
      trades_[p.trade] = std::move(t);
      if (p.trade.size() > 1 && p.trade[0] == 't') {
        std::uint64_t n = 0;
        auto [ptr, ec] = std::from_chars(p.trade.data() + 1,
                                         p.trade.data() + p.trade.size(), n);
        if (ec == std::errc() && ptr == p.trade.data() + p.trade.size() &&
            n >= next_trade_) {
          next_trade_ = n + 1;
        }
      }
      break;
    }
    case EventKind::CommitmentPosted: {
      const auto& p = std::get<CommitmentPostedPayload>(e.payload);
      auto t = trades_.find(p.contract);
      if (t != trades_.end()) {
        if (p.root.has_value()) t->second.root = p.root;
        if (p.data_id.has_value()) t->second.data_id = p.data_id;
      }
      break;
    }
    case EventKind::KeyRevealed: {
      const auto& p = std::get<KeyRevealedPayload>(e.payload);
      TradeState& t = trades_.at(p.trade);
      t.key = p.key;
      t.reveal_tick = e.tick;
      t.deposit_escrow = p.deposit_escrow;
      break;
    }
    case EventKind::ComplaintFiled:
      break;
    case EventKind::VerdictIssued: {
      const auto& p = std::get<VerdictIssuedPayload>(e.payload);
      TradeState& t = trades_.at(p.verdict.trade);
      t.verdicts.push_back(p.verdict);
      if (p.verdict.basis == VerdictBasis::ValidPom) {
        t.refunded_by_complaint = true;
      }
      break;
    }
    case EventKind::Settled: {
      const auto& p = std::get<SettledPayload>(e.payload);
      TradeState& t = trades_.at(p.trade);
      for (EscrowId id : p.drained_escrows) escrows_.at(id).released = true;
      if (p.deposit_escrow.has_value()) {
        escrows_.at(*p.deposit_escrow).released = true;
      }
      if (t.agreement.mediator.has_value() && p.to_mediator > 0) {
        balance_ref(*t.agreement.mediator) += p.to_mediator;
      }
      balance_ref(t.agreement.seller) += p.to_seller + p.deposit_returned;
      t.settled = true;
      break;
    }
  }
}

}  // namespace dmx
