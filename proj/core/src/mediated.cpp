// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "dmx/mediated.hpp"

#include <stdexcept>

namespace dmx {

std::string_view mediated_phase_name(MediatedPhase p) {
  switch (p) {
    case MediatedPhase::Offered: return "offered";
    case MediatedPhase::Requested: return "requested";
    case MediatedPhase::Matched: return "matched";
    case MediatedPhase::Paid: return "paid";
    case MediatedPhase::Revealed: return "revealed";
    case MediatedPhase::Complained: return "complained";
    case MediatedPhase::Settled: return "settled";
    case MediatedPhase::Aborted: return "aborted";
  }
  return "?";
}

namespace {

Digest text_digest(const std::string& text) {
  return sha256(ByteSpan(reinterpret_cast<const std::uint8_t*>(text.data()),
                         text.size()));
}

}  // namespace

MediatedEngine::MediatedEngine(Ledger& ledger, AccountId mediator)
    : ledger_(ledger), mediator_(std::move(mediator)) {
  if (!ledger_.has_account(mediator_)) fail(Errc::UnknownAccount, mediator_);
}

std::string MediatedEngine::register_offer(const SellerOffer& offer) {
  if (!ledger_.has_account(offer.seller)) fail(Errc::UnknownAccount, offer.seller);
  if (offer.ask == 0) fail(Errc::InvalidPrice, "ask must be positive");
  if (offer.commission > kBpsDenominator) fail(Errc::InvalidPrice, "commission above 100%");
  if (offer.package.enc_chunks.empty() || offer.package.enc_wires.empty() ||
      package_root(offer.package) != offer.package.root) {
    fail(Errc::MalformedPackage, "offer package is not self-consistent");
  }
  std::string id = "o" + std::to_string(ledger_.events().size());
  ledger_.post_commitment(id, offer.package.root, offer.data_id, std::nullopt,
                          text_digest(offer.rho_text));
  offers_.emplace(id, offer);
  return id;
}

std::string MediatedEngine::register_request(const BuyerRequest& request) {
  if (!ledger_.has_account(request.buyer)) fail(Errc::UnknownAccount, request.buyer);
  if (request.budget == 0) fail(Errc::InvalidPrice, "budget must be positive");
  if (request.commission > kBpsDenominator) fail(Errc::InvalidPrice, "commission above 100%");
  std::string id = "r" + std::to_string(ledger_.events().size());
  ledger_.post_commitment(id, std::nullopt, std::nullopt,
                          request.phi.description_digest(), std::nullopt);
  requests_.emplace(id, request);
  return id;
}

MediatedTrade& MediatedEngine::match_and_forward(const std::string& offer_id,
                                                 const std::string& request_id,
                                                 const MediatedTradeTerms& terms,
                                                 Behavior mediator_behavior,
                                                 SplitMix64* rng) {
  auto oit = offers_.find(offer_id);
  if (oit == offers_.end()) fail(Errc::NoSuchTrade, "offer " + offer_id);
  auto rit = requests_.find(request_id);
  if (rit == requests_.end()) fail(Errc::NoSuchTrade, "request " + request_id);
  const SellerOffer& offer = oit->second;
  const BuyerRequest& request = rit->second;

  if (request.budget < offer.ask) {
    fail(Errc::BudgetBelowAsk, "budget " + std::to_string(request.budget) +
                                   " below ask " + std::to_string(offer.ask));
  }
  Money price = offer.ask;  // min(p_S, p_B) given p_B >= p_S

  if (mediator_behavior != Behavior::MediatorSkipPhiCheck) {
    // Step-3 checks: what the mediator can decide without plaintext.
    if (offer.package.circuit_digest != request.phi.description_digest() ||
        offer.package.enc_chunks.size() != request.phi.num_inputs ||
        offer.package.enc_wires.size() != request.phi.size() ||
        package_root(offer.package) != offer.package.root ||
        !partial_phi_check(request.phi_spec, offer.package.enc_chunks,
                           offer.package.mask)) {
      fail(Errc::PhiCheckFailed, "offer does not satisfy the requested predicate");
    }
  }

  Agreement agreement;
  agreement.seller = offer.seller;
  agreement.mediator = mediator_;
  agreement.buyer = request.buyer;
  agreement.price = price;
  agreement.commission_seller = offer.commission;
  agreement.commission_buyer = request.commission;
  agreement.window = terms.window;
  agreement.deposit_required = terms.deposit_required;
  agreement.phi_commitment = request.phi.description_digest();
  agreement.rho_digest = text_digest(offer.rho_text);
  agreement.rho_text = offer.rho_text;
  agreement.data_id = offer.data_id;
  agreement.mask = offer.package.mask;
  agreement.terms_hash = agreement.compute_terms_hash();
  TradeId trade_id = ledger_.register_agreement(agreement);
  ledger_.post_commitment(trade_id, offer.package.root, offer.data_id);

  MediatedTrade trade;
  trade.id = trade_id;
  trade.offer_id = offer_id;
  trade.request_id = request_id;
  trade.seller = offer.seller;
  trade.mediator = mediator_;
  trade.buyer = request.buyer;
  trade.price = price;
  trade.phase = MediatedPhase::Matched;
  trade.delivered = offer.package;
  if (mediator_behavior == Behavior::MediatorTamperPackage && rng != nullptr) {
    std::uint64_t leaf = rng->below(trade.delivered.leaf_count());
    std::uint8_t bit = static_cast<std::uint8_t>(1u << rng->below(8));
    if (leaf < trade.delivered.enc_chunks.size()) {
      trade.delivered.enc_chunks[leaf][rng->below(kWordSize)] ^= bit;
    } else {
      trade.delivered.enc_wires[leaf - trade.delivered.enc_chunks.size()]
                               [rng->below(kWordSize)] ^= bit;
    }
  }
  auto [it, inserted] = trades_.emplace(trade_id, std::move(trade));
  return it->second;
}

std::optional<EscrowId> MediatedEngine::accept_and_pay(MediatedTrade& trade,
                                                       bool accept_rho,
                                                       std::optional<Money> pay_override) {
  if (trade.phase != MediatedPhase::Matched) {
    throw std::invalid_argument("accept_and_pay outside the matched phase");
  }
  const TradeState* state = ledger_.trade(trade.id);
  const Agreement& agreement = state->agreement;
  if (!verify_package(trade.delivered, state->root.value(), agreement.phi_commitment)) {
    trade.phase = MediatedPhase::Aborted;
    fail(Errc::MalformedPackage, "package does not match the on-ledger commitment");
  }
  if (!accept_rho) {
    trade.phase = MediatedPhase::Aborted;
    fail(Errc::RhoRejected, "buyer does not countersign the regulation");
  }
  Money due = buyer_total(trade.price, agreement.commission_buyer);
  Money paying = pay_override.value_or(due);
  if (paying == 0) return std::nullopt;
  EscrowId escrow = ledger_.freeze(trade.buyer, paying, trade.id);
  if (paying == due) trade.phase = MediatedPhase::Paid;
  return escrow;
}

void MediatedEngine::reveal_key(MediatedTrade& trade, const EncodingKey& key,
                                Money deposit) {
  ledger_.reveal_key(trade.id, key, deposit);
  trade.phase = MediatedPhase::Revealed;
}

Verdict MediatedEngine::complain(MediatedTrade& trade, const AccountId& complainant,
                                 const MisbehaviorProof& proof,
                                 const PredicateCircuit& phi) {
  Verdict v = ledger_.submit_complaint(trade.id, complainant, proof, phi);
  if (v.basis == VerdictBasis::ValidPom) trade.phase = MediatedPhase::Complained;
  return v;
}

Payouts MediatedEngine::settle(MediatedTrade& trade) {
  Payouts p = ledger_.settle(trade.id);
  trade.phase = MediatedPhase::Settled;
  return p;
}

void MediatedEngine::abort_trade(MediatedTrade& trade) {
  const TradeState* state = ledger_.trade(trade.id);
  std::vector<EscrowId> live;
  for (EscrowId e : state->buyer_escrows) {
    if (!ledger_.escrow(e)->released) live.push_back(e);
  }
  for (EscrowId e : live) ledger_.unfreeze(e, trade.buyer);
  trade.phase = MediatedPhase::Aborted;
}

const SellerOffer* MediatedEngine::offer(const std::string& id) const {
  auto it = offers_.find(id);
  return it == offers_.end() ? nullptr : &it->second;
}

const BuyerRequest* MediatedEngine::request(const std::string& id) const {
  auto it = requests_.find(id);
  return it == requests_.end() ? nullptr : &it->second;
}

namespace {

Word complement(const Word& w) {
  Word out;
  for (std::size_t i = 0; i < kWordSize; ++i) out[i] = static_cast<std::uint8_t>(~w[i]);
  return out;
}

void record_package_view(InfoFlow& flow, const AccountId& party,
                         const std::string& contract, const EncryptionMask& mask) {
  flow.record({party, ObsKind::PackageCiphertext, contract});
  flow.record({party, ObsKind::PlainBytes, contract, complement(mask.header),
               complement(mask.rows)});
}

}  // namespace

TradeOutcome run_mediated(Ledger& ledger, const AccountId& seller,
                          const PartyScript& seller_script,
                          const AccountId& mediator,
                          const PartyScript& mediator_script,
                          const AccountId& buyer, const PartyScript& buyer_script,
                          const MediatedRunTerms& terms, const DataBlob& blob,
                          const PredicateSpec& phi_spec, SplitMix64& rng) {
  TradeOutcome outcome;
  const std::map<AccountId, Money> before = ledger.balances();
  auto finish = [&](MediatedPhase phase) {
    outcome.terminal_phase = std::string(mediated_phase_name(phase));
    outcome.deltas = balance_deltas(before, ledger);
    return outcome;
  };

  PredicateCircuit phi = compile_spec(phi_spec);
  DataBlob goods = blob;
  if (seller_script.behavior == Behavior::SellerJunkData) {
    SplitMix64 junk_rng = rng.fork(21);
    goods = make_random_blob(blob.chunks.size(), junk_rng);
    goods.schema = blob.schema;
  }
  EncodingKey key{rng.fork(22).word()};
  EncodedPackage pkg = encode_package(goods, phi, key, terms.mask);

  std::string rho_text = seller_script.behavior == Behavior::SellerWrongRho
                             ? terms.rho_text + " (amended unilaterally)"
                             : terms.rho_text;

  MediatedEngine engine(ledger, mediator);

  // Steps 1 and 2.
  SellerOffer offer{seller, pkg, data_merkle_id(goods), rho_text, terms.ask,
                    terms.c_seller};
  std::string offer_id = engine.register_offer(offer);
  record_package_view(outcome.info_flow, mediator, offer_id, pkg.mask);

  BuyerRequest request{buyer, phi_spec, phi, terms.budget, terms.c_buyer};
  std::string request_id = engine.register_request(request);
  ledger.advance_time(1);

  // Step 3.
  MediatedTrade* trade = nullptr;
  SplitMix64 tamper_rng = rng.fork(23);
  try {
    trade = &engine.match_and_forward(offer_id, request_id,
                                      {terms.window, bps_of(terms.ask, terms.deposit_bps)},
                                      mediator_script.behavior, &tamper_rng);
  } catch (const Error& e) {
    outcome.attempted_violations.push_back({"match_and_forward", e.code()});
    return finish(MediatedPhase::Aborted);
  }
  outcome.trade_id = trade->id;
  record_package_view(outcome.info_flow, buyer, trade->id, trade->delivered.mask);
  ledger.advance_time(1);

  // Step 4. The buyer countersigns rho only if it matches the agreed text.
  bool accept_rho = ledger.trade(trade->id)->agreement.rho_text == terms.rho_text;
  Money due = buyer_total(trade->price, terms.c_buyer);
  std::optional<Money> pay_override;
  if (buyer_script.behavior == Behavior::BuyerUnderpay) {
    pay_override = due > 0 ? due - 1 : 0;
  }
  try {
    engine.accept_and_pay(*trade, accept_rho, pay_override);
  } catch (const Error& e) {
    outcome.attempted_violations.push_back({"accept_and_pay", e.code()});
    return finish(MediatedPhase::Aborted);
  }
  ledger.advance_time(1);

  // Step 5. The seller acts only after checking step 4; the ledger enforces
  // the same rule, so an underfunded trade records a NotPaid attempt.
  Money deposit = bps_of(trade->price, terms.deposit_bps);
  try {
    engine.reveal_key(*trade, key, deposit);
  } catch (const Error& e) {
    outcome.attempted_violations.push_back({"reveal_key", e.code()});
    ledger.advance_time(terms.window + 1);
    engine.abort_trade(*trade);
    return finish(MediatedPhase::Aborted);
  }
  outcome.info_flow.record({buyer, ObsKind::Key, trade->id});

  // Step 6.
  auto [decoded, phi_ok] = decode(trade->delivered, key, phi);
  outcome.buyer_holds_data = true;
  outcome.buyer_phi_result = phi_ok;
  outcome.info_flow.record({buyer, ObsKind::DecodedData, trade->id});

  if (buyer_script.behavior == Behavior::BuyerFalseComplaint) {
    SplitMix64 forge_rng = rng.fork(24);
    MisbehaviorProof forged = forge_complaint(trade->delivered, phi, forge_rng);
    outcome.verdicts.push_back(engine.complain(*trade, buyer, forged, phi));
  } else {
    std::optional<MisbehaviorProof> pom = generate_pom(trade->delivered, key, phi);
    if (pom.has_value()) {
      for (const ProofLeaf& leaf : pom->leaves) {
        outcome.info_flow.record(
            {"ledger", ObsKind::DisputedLeafPlaintext, trade->id, {}, {}, leaf.index});
      }
      Verdict v = engine.complain(*trade, buyer, *pom, phi);
      outcome.verdicts.push_back(v);
      if (v.basis == VerdictBasis::ValidPom) {
        return finish(MediatedPhase::Complained);
      }
    }
  }

  // Step 7.
  ledger.advance_time(terms.window + 1);
  outcome.payout = engine.settle(*trade);
  return finish(MediatedPhase::Settled);
}

}  // namespace dmx
