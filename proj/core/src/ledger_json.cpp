// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
//
// Event-log JSON-lines codec, agreement hashing, snapshots and the
// protocol-order trace check.

#include <nlohmann/json.hpp>

#include <map>

#include "dmx/error.hpp"
#include "dmx/ledger.hpp"

namespace dmx {

using nlohmann::json;

namespace {

json digest_or_null(const std::optional<Digest>& d) {
  return d.has_value() ? json(to_hex(*d)) : json(nullptr);
}

std::optional<Digest> digest_opt(const json& j, const char* field) {
  if (!j.contains(field) || j.at(field).is_null()) return std::nullopt;
  return digest_from_hex(j.at(field).get<std::string>());
}

json agreement_terms_json(const Agreement& a) {
  json j;
  j["buyer"] = a.buyer;
  j["commission_buyer_bps"] = a.commission_buyer;
  j["commission_seller_bps"] = a.commission_seller;
  j["data_id"] = to_hex(a.data_id);
  j["deposit_required"] = a.deposit_required;
  j["header_mask"] = to_hex(a.mask.header);
  j["mediator"] = a.mediator.has_value() ? json(*a.mediator) : json(nullptr);
  j["phi_commitment"] = to_hex(a.phi_commitment);
  j["price"] = a.price;
  j["rho_digest"] = to_hex(a.rho_digest);
  j["rho_text"] = a.rho_text;
  j["row_mask"] = to_hex(a.mask.rows);
  j["seller"] = a.seller;
  j["window"] = a.window;
  return j;
}

json agreement_json(const Agreement& a) {
  json j = agreement_terms_json(a);
  j["created_at"] = a.created_at;
  j["terms_hash"] = to_hex(a.terms_hash);
  return j;
}

Agreement agreement_from_json(const json& j) {
  Agreement a;
  a.buyer = j.at("buyer").get<std::string>();
  a.commission_buyer = j.at("commission_buyer_bps").get<Bps>();
  a.commission_seller = j.at("commission_seller_bps").get<Bps>();
  a.data_id = digest_from_hex(j.at("data_id").get<std::string>());
  a.deposit_required = j.at("deposit_required").get<Money>();
  a.mask.header = word_from_hex(j.at("header_mask").get<std::string>());
  a.mask.rows = word_from_hex(j.at("row_mask").get<std::string>());
  if (!j.at("mediator").is_null()) a.mediator = j.at("mediator").get<std::string>();
  a.phi_commitment = digest_from_hex(j.at("phi_commitment").get<std::string>());
  a.price = j.at("price").get<Money>();
  a.rho_digest = digest_from_hex(j.at("rho_digest").get<std::string>());
  a.rho_text = j.at("rho_text").get<std::string>();
  a.seller = j.at("seller").get<std::string>();
  a.window = j.at("window").get<Tick>();
  a.created_at = j.at("created_at").get<Tick>();
  a.terms_hash = digest_from_hex(j.at("terms_hash").get<std::string>());
  return a;
}

json payload_json(const LedgerEvent& e) {
  json j;
  switch (e.kind) {
    case EventKind::AccountOpened: {
      const auto& p = std::get<AccountOpenedPayload>(e.payload);
      j["id"] = p.id;
      j["initial"] = p.initial;
      break;
    }
    case EventKind::Transferred: {
      const auto& p = std::get<TransferredPayload>(e.payload);
      j["amount"] = p.amount;
      j["from"] = p.from;
      j["to"] = p.to;
      break;
    }
    case EventKind::Frozen: {
      const auto& p = std::get<FrozenPayload>(e.payload);
      j["amount"] = p.amount;
      j["contract"] = p.contract;
      j["escrow"] = p.escrow;
      j["owner"] = p.owner;
      break;
    }
    case EventKind::Unfrozen: {
      const auto& p = std::get<UnfrozenPayload>(e.payload);
      j["amount"] = p.amount;
      j["escrow"] = p.escrow;
      j["to"] = p.to;
      break;
    }
    case EventKind::AgreementRegistered: {
      const auto& p = std::get<AgreementRegisteredPayload>(e.payload);
      j["agreement"] = agreement_json(p.agreement);
      j["trade"] = p.trade;
      break;
    }
    case EventKind::CommitmentPosted: {
      const auto& p = std::get<CommitmentPostedPayload>(e.payload);
      j["contract"] = p.contract;
      j["data_id"] = digest_or_null(p.data_id);
      j["phi_digest"] = digest_or_null(p.phi_digest);
      j["rho_digest"] = digest_or_null(p.rho_digest);
      j["root"] = digest_or_null(p.root);
      break;
    }
    case EventKind::KeyRevealed: {
      const auto& p = std::get<KeyRevealedPayload>(e.payload);
      j["deposit"] = p.deposit;
      j["deposit_escrow"] =
          p.deposit_escrow.has_value() ? json(*p.deposit_escrow) : json(nullptr);
      j["key"] = to_hex(p.key);
      j["trade"] = p.trade;
      break;
    }
    case EventKind::ComplaintFiled: {
      const auto& p = std::get<ComplaintFiledPayload>(e.payload);
      j["complainant"] = p.complainant;
      j["proof_digest"] = to_hex(p.proof_digest);
      j["proof_kind"] = p.proof_kind;
      j["trade"] = p.trade;
      break;
    }
    case EventKind::VerdictIssued: {
      const auto& p = std::get<VerdictIssuedPayload>(e.payload);
      j["basis"] = std::string(verdict_basis_name(p.verdict.basis));
      j["guilty"] =
          p.verdict.guilty.has_value() ? json(*p.verdict.guilty) : json(nullptr);
      j["trade"] = p.verdict.trade;
      break;
    }
    case EventKind::Settled: {
      const auto& p = std::get<SettledPayload>(e.payload);
      j["deposit_escrow"] =
          p.deposit_escrow.has_value() ? json(*p.deposit_escrow) : json(nullptr);
      j["deposit_returned"] = p.deposit_returned;
      j["drained_escrows"] = p.drained_escrows;
      j["to_mediator"] = p.to_mediator;
      j["to_seller"] = p.to_seller;
      j["trade"] = p.trade;
      break;
    }
  }
  return j;
}

EventPayload payload_from_json(EventKind kind, const json& j) {
  switch (kind) {
    case EventKind::AccountOpened:
      return AccountOpenedPayload{j.at("id").get<std::string>(),
                                  j.at("initial").get<Money>()};
    case EventKind::Transferred:
      return TransferredPayload{j.at("from").get<std::string>(),
                                j.at("to").get<std::string>(),
                                j.at("amount").get<Money>()};
    case EventKind::Frozen:
      return FrozenPayload{j.at("escrow").get<EscrowId>(),
                           j.at("owner").get<std::string>(),
                           j.at("amount").get<Money>(),
                           j.at("contract").get<std::string>()};
    case EventKind::Unfrozen:
      return UnfrozenPayload{j.at("escrow").get<EscrowId>(),
                             j.at("to").get<std::string>(),
                             j.at("amount").get<Money>()};
    case EventKind::AgreementRegistered:
      return AgreementRegisteredPayload{j.at("trade").get<std::string>(),
                                        agreement_from_json(j.at("agreement"))};
    case EventKind::CommitmentPosted:
      return CommitmentPostedPayload{j.at("contract").get<std::string>(),
                                     digest_opt(j, "root"),
                                     digest_opt(j, "data_id"),
                                     digest_opt(j, "phi_digest"),
                                     digest_opt(j, "rho_digest")};
    case EventKind::KeyRevealed: {
      KeyRevealedPayload p;
      p.trade = j.at("trade").get<std::string>();
      p.key = word_from_hex(j.at("key").get<std::string>());
      if (!j.at("deposit_escrow").is_null()) {
        p.deposit_escrow = j.at("deposit_escrow").get<EscrowId>();
      }
      p.deposit = j.at("deposit").get<Money>();
      return p;
    }
    case EventKind::ComplaintFiled:
      return ComplaintFiledPayload{
          j.at("trade").get<std::string>(), j.at("complainant").get<std::string>(),
          digest_from_hex(j.at("proof_digest").get<std::string>()),
          j.at("proof_kind").get<std::string>()};
    case EventKind::VerdictIssued: {
      Verdict v;
      v.trade = j.at("trade").get<std::string>();
      std::string basis = j.at("basis").get<std::string>();
      if (basis == "valid_pom") {
        v.basis = VerdictBasis::ValidPom;
      } else if (basis == "invalid_complaint") {
        v.basis = VerdictBasis::InvalidComplaint;
      } else if (basis == "no_complaint") {
        v.basis = VerdictBasis::NoComplaint;
      } else {
        fail(Errc::CorruptLog, "unknown verdict basis " + basis);
      }
      if (!j.at("guilty").is_null()) v.guilty = j.at("guilty").get<std::string>();
      return VerdictIssuedPayload{std::move(v)};
    }
    case EventKind::Settled: {
      SettledPayload p;
      p.trade = j.at("trade").get<std::string>();
      p.to_mediator = j.at("to_mediator").get<Money>();
      p.to_seller = j.at("to_seller").get<Money>();
      p.deposit_returned = j.at("deposit_returned").get<Money>();
      p.drained_escrows = j.at("drained_escrows").get<std::vector<EscrowId>>();
      if (!j.at("deposit_escrow").is_null()) {
        p.deposit_escrow = j.at("deposit_escrow").get<EscrowId>();
      }
      return p;
    }
  }
  fail(Errc::CorruptLog, "unknown event kind");
}

std::optional<EventKind> event_kind_from_name(std::string_view name) {
  for (EventKind k :
       {EventKind::AccountOpened, EventKind::Transferred, EventKind::Frozen,
        EventKind::Unfrozen, EventKind::AgreementRegistered,
        EventKind::CommitmentPosted, EventKind::KeyRevealed,
        EventKind::ComplaintFiled, EventKind::VerdictIssued, EventKind::Settled}) {
    if (event_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

}  // namespace

std::string Agreement::canonical_terms_json() const {
  return agreement_terms_json(*this).dump();
}

Digest Agreement::compute_terms_hash() const {
  std::string text = canonical_terms_json();
  return sha256(ByteSpan(reinterpret_cast<const std::uint8_t*>(text.data()),
                         text.size()));
}

std::string event_to_json(const LedgerEvent& e) {
  json j;
  j["kind"] = std::string(event_kind_name(e.kind));
  j["payload"] = payload_json(e);
  j["seq"] = e.seq;
  j["tick"] = e.tick;
  return j.dump();
}

LedgerEvent event_from_json(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    fail(Errc::CorruptLog, "unparseable event line");
  }
  try {
    LedgerEvent e;
    e.seq = j.at("seq").get<std::uint64_t>();
    e.tick = j.at("tick").get<Tick>();
    auto kind = event_kind_from_name(j.at("kind").get<std::string>());
    if (!kind.has_value()) {
      fail(Errc::CorruptLog, "unknown event kind " + j.at("kind").get<std::string>());
    }
    e.kind = *kind;
    e.payload = payload_from_json(*kind, j.at("payload"));
    return e;
  } catch (const json::exception& err) {
    fail(Errc::CorruptLog, err.what());
  } catch (const std::invalid_argument& err) {
    fail(Errc::CorruptLog, err.what());
  }
}

std::string events_to_jsonl(std::span<const LedgerEvent> events) {
  std::string out;
  for (const LedgerEvent& e : events) {
    out += event_to_json(e);
    out += '\n';
  }
  return out;
}

std::vector<LedgerEvent> events_from_jsonl(std::string_view text) {
  std::vector<LedgerEvent> events;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    if (!line.empty()) events.push_back(event_from_json(line));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return events;
}

void validate_log(std::span<const LedgerEvent> events) {
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].seq != i) {
      fail(Errc::CorruptLog, "expected seq " + std::to_string(i) + ", found " +
                                 std::to_string(events[i].seq));
    }
    if (i > 0 && events[i].tick < events[i - 1].tick) {
      fail(Errc::CorruptLog, "ticks go backwards at seq " + std::to_string(i));
    }
  }
}

std::string Ledger::snapshot_json() const {
  json balances = json::object();
  for (const auto& [id, bal] : balances_) balances[id] = bal;
  json escrows = json::object();
  for (const auto& [id, e] : escrows_) {
    json ej;
    ej["amount"] = e.amount;
    ej["contract"] = e.contract;
    ej["owner"] = e.owner;
    ej["released"] = e.released;
    escrows[std::to_string(id)] = std::move(ej);
  }
  json trades = json::object();
  for (const auto& [id, t] : trades_) {
    json tj;
    tj["agreement"] = agreement_json(t.agreement);
    tj["buyer_escrows"] = t.buyer_escrows;
    tj["data_id"] = digest_or_null(t.data_id);
    tj["deposit_escrow"] =
        t.deposit_escrow.has_value() ? json(*t.deposit_escrow) : json(nullptr);
    tj["key"] = t.key.has_value() ? json(to_hex(*t.key)) : json(nullptr);
    tj["refunded_by_complaint"] = t.refunded_by_complaint;
    tj["reveal_tick"] =
        t.reveal_tick.has_value() ? json(*t.reveal_tick) : json(nullptr);
    tj["root"] = digest_or_null(t.root);
    tj["settled"] = t.settled;
    json verdicts = json::array();
    for (const Verdict& v : t.verdicts) {
      json vj;
      vj["basis"] = std::string(verdict_basis_name(v.basis));
      vj["guilty"] = v.guilty.has_value() ? json(*v.guilty) : json(nullptr);
      vj["trade"] = v.trade;
      verdicts.push_back(std::move(vj));
    }
    tj["verdicts"] = std::move(verdicts);
    trades[id] = std::move(tj);
  }
  json j;
  j["balances"] = std::move(balances);
  j["escrows"] = std::move(escrows);
  j["genesis_total"] = genesis_total_;
  j["last_tick"] = events_.empty() ? json(nullptr) : json(events_.back().tick);
  j["log_length"] = events_.size();
  j["trades"] = std::move(trades);
  return j.dump();
}

std::optional<std::string> check_protocol_order(std::span<const LedgerEvent> events) {
  struct TraceTrade {
    Agreement agreement;
    bool root_posted = false;
    std::optional<Tick> reveal_tick;
    bool settled = false;
    bool refunded = false;
  };
  std::map<TradeId, TraceTrade> trades;
  std::map<EscrowId, std::pair<TradeId, Money>> live_escrows;
  std::map<TradeId, Money> buyer_funded;

  auto violation = [](const LedgerEvent& e, const std::string& why) {
    return "seq " + std::to_string(e.seq) + " (" +
           std::string(event_kind_name(e.kind)) + "): " + why;
  };

  for (const LedgerEvent& e : events) {
    switch (e.kind) {
      case EventKind::AgreementRegistered: {
        const auto& p = std::get<AgreementRegisteredPayload>(e.payload);
        if (trades.contains(p.trade)) {
          return violation(e, "trade registered twice");
        }
        trades[p.trade] = TraceTrade{p.agreement};
        break;
      }
      case EventKind::CommitmentPosted: {
        const auto& p = std::get<CommitmentPostedPayload>(e.payload);
        auto it = trades.find(p.contract);
        if (it != trades.end() && p.root.has_value()) {
          if (it->second.reveal_tick.has_value()) {
            return violation(e, "commitment posted after reveal");
          }
          it->second.root_posted = true;
        }
        break;
      }
      case EventKind::Frozen: {
        const auto& p = std::get<FrozenPayload>(e.payload);
        auto it = trades.find(p.contract);
        if (it != trades.end() && it->second.agreement.buyer == p.owner) {
          if (it->second.reveal_tick.has_value()) {
            return violation(e, "buyer funding after reveal");
          }
          buyer_funded[p.contract] += p.amount;
          live_escrows[p.escrow] = {p.contract, p.amount};
        }
        break;
      }
      case EventKind::Unfrozen: {
        const auto& p = std::get<UnfrozenPayload>(e.payload);
        auto it = live_escrows.find(p.escrow);
        if (it != live_escrows.end()) {
          buyer_funded[it->second.first] -= it->second.second;
          live_escrows.erase(it);
        }
        break;
      }
      case EventKind::KeyRevealed: {
        const auto& p = std::get<KeyRevealedPayload>(e.payload);
        auto it = trades.find(p.trade);
        if (it == trades.end()) return violation(e, "reveal before agreement");
        TraceTrade& t = it->second;
        if (t.reveal_tick.has_value()) return violation(e, "double reveal");
        if (!t.root_posted) return violation(e, "reveal before commitment");
        Money due = buyer_total(t.agreement.price, t.agreement.commission_buyer);
        if (buyer_funded[p.trade] != due) {
          return violation(e, "reveal before full payment");
        }
        t.reveal_tick = e.tick;
        break;
      }
      case EventKind::ComplaintFiled: {
        const auto& p = std::get<ComplaintFiledPayload>(e.payload);
        auto it = trades.find(p.trade);
        if (it == trades.end() || !it->second.reveal_tick.has_value()) {
          return violation(e, "complaint before reveal");
        }
        const TraceTrade& t = it->second;
        if (t.settled) return violation(e, "complaint after settlement");
        if (e.tick > *t.reveal_tick + t.agreement.window) {
          return violation(e, "complaint after the window closed");
        }
        break;
      }
      case EventKind::VerdictIssued: {
        const auto& p = std::get<VerdictIssuedPayload>(e.payload);
        auto it = trades.find(p.verdict.trade);
        if (it == trades.end() || !it->second.reveal_tick.has_value()) {
          return violation(e, "verdict before reveal");
        }
        if (p.verdict.basis == VerdictBasis::ValidPom) it->second.refunded = true;
        break;
      }
      case EventKind::Settled: {
        const auto& p = std::get<SettledPayload>(e.payload);
        auto it = trades.find(p.trade);
        if (it == trades.end()) return violation(e, "settlement of unknown trade");
        TraceTrade& t = it->second;
        if (!t.reveal_tick.has_value()) return violation(e, "settlement before reveal");
        if (t.settled) return violation(e, "double settlement");
        if (t.refunded) return violation(e, "settlement after upheld complaint");
        if (e.tick <= *t.reveal_tick + t.agreement.window) {
          return violation(e, "settlement inside the complaint window");
        }
        t.settled = true;
        break;
      }
      default:
        break;
    }
  }
  return std::nullopt;
}

}  // namespace dmx
