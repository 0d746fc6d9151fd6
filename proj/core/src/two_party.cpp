// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "dmx/two_party.hpp"

#include "dmx/merkle.hpp"

namespace dmx {

std::string_view two_party_phase_name(TwoPartyPhase p) {
  switch (p) {
    case TwoPartyPhase::Agreed: return "agreed";
    case TwoPartyPhase::Funded: return "funded";
    case TwoPartyPhase::Delivered: return "delivered";
    case TwoPartyPhase::Revealed: return "revealed";
    case TwoPartyPhase::Settled: return "settled";
    case TwoPartyPhase::Aborted: return "aborted";
  }
  return "?";
}

MisbehaviorProof forge_complaint(const EncodedPackage& pkg,
                                 const PredicateCircuit& circuit, SplitMix64& rng) {
  std::vector<Word> all = pkg.leaves();
  MerkleTree tree = MerkleTree::from_words(all);
  const std::uint64_t n = circuit.num_inputs;

  MisbehaviorProof proof;
  if (rng.coin()) {
    proof.kind = PomKind::BadOutput;
    std::uint64_t idx = n + circuit.size() - 1;
    proof.leaves.push_back({idx, all[idx], tree.prove(idx)});
    return proof;
  }
  proof.kind = PomKind::BadGate;
  proof.gate = static_cast<std::uint32_t>(rng.below(circuit.size()));
  const Gate& g = circuit.gates[proof.gate];
  std::vector<std::uint64_t> indices = {n + proof.gate};
  if (g.op == GateOp::Input) {
    indices.push_back(g.input_index);
  } else {
    for (std::uint32_t a : g.args) indices.push_back(n + a);
  }
  for (std::uint64_t idx : indices) {
    proof.leaves.push_back({idx, all[idx], tree.prove(idx)});
  }
  return proof;
}

namespace {

Digest text_digest(const std::string& text) {
  return sha256(ByteSpan(reinterpret_cast<const std::uint8_t*>(text.data()),
                         text.size()));
}

void refund_live_buyer_escrows(Ledger& ledger, const TradeId& trade,
                               const AccountId& buyer) {
  const TradeState* t = ledger.trade(trade);
  if (t == nullptr) return;
  std::vector<EscrowId> live;
  for (EscrowId e : t->buyer_escrows) {
    if (!ledger.escrow(e)->released) live.push_back(e);
  }
  for (EscrowId e : live) ledger.unfreeze(e, buyer);
}

}  // namespace

TradeOutcome run_two_party(Ledger& ledger, const AccountId& seller,
                           const PartyScript& seller_script,
                           const AccountId& buyer, const PartyScript& buyer_script,
                           const TwoPartyTerms& terms, const DataBlob& blob,
                           const PredicateSpec& phi_spec, SplitMix64& rng) {
  TradeOutcome outcome;
  const std::map<AccountId, Money> before = ledger.balances();
  auto finish = [&](TwoPartyPhase phase) {
    outcome.terminal_phase = std::string(two_party_phase_name(phase));
    outcome.deltas = balance_deltas(before, ledger);
    return outcome;
  };

  PredicateCircuit phi = compile_spec(phi_spec);
  DataBlob goods = blob;
  if (seller_script.behavior == Behavior::SellerJunkData) {
    SplitMix64 junk_rng = rng.fork(11);
    goods = make_random_blob(blob.chunks.size(), junk_rng);
  }
  EncodingKey key{rng.fork(12).word()};
  EncodedPackage pkg = encode_package(goods, phi, key);
  Digest data_id = data_merkle_id(goods);

  std::string rho_text = seller_script.behavior == Behavior::SellerWrongRho
                             ? terms.rho_text + " (amended unilaterally)"
                             : terms.rho_text;

  // Phase 1: agree.
  Agreement agreement;
  agreement.seller = seller;
  agreement.buyer = buyer;
  agreement.price = terms.price;
  agreement.window = terms.window;
  agreement.deposit_required = terms.deposit;
  agreement.phi_commitment = phi.description_digest();
  agreement.rho_digest = text_digest(rho_text);
  agreement.rho_text = rho_text;
  agreement.data_id = data_id;
  agreement.terms_hash = agreement.compute_terms_hash();
  TradeId trade = ledger.register_agreement(agreement);
  outcome.trade_id = trade;

  if (seller_script.abort_before_funding || buyer_script.abort_before_funding) {
    return finish(TwoPartyPhase::Aborted);
  }
  // The buyer countersigns the regulation text before funding.
  if (rho_text != terms.rho_text) {
    return finish(TwoPartyPhase::Aborted);
  }
  ledger.advance_time(1);

  // Phase 2: fund.
  Money due = terms.price;  // two-party trades carry no commissions
  Money paid = due;
  if (buyer_script.behavior == Behavior::BuyerUnderpay) {
    paid = due > 0 ? due - 1 : 0;
  }
  if (paid > 0) ledger.freeze(buyer, paid, trade);
  ledger.advance_time(1);

  // Phase 3: deliver. The commitment goes on the ledger; the package itself
  // travels off-ledger.
  ledger.post_commitment(trade, pkg.root, data_id);
  outcome.info_flow.record({buyer, ObsKind::PackageCiphertext, trade});
  if (!verify_package(pkg, ledger.trade(trade)->root.value(),
                      agreement.phi_commitment, &phi)) {
    refund_live_buyer_escrows(ledger, trade, buyer);
    return finish(TwoPartyPhase::Aborted);
  }
  ledger.advance_time(1);

  // Phase 4: reveal, complain, settle.
  try {
    ledger.reveal_key(trade, key, terms.deposit);
  } catch (const Error& e) {
    outcome.attempted_violations.push_back({"reveal_key", e.code()});
    // Stalled trade: the buyer reclaims the escrow at the deadline.
    ledger.advance_time(terms.window + 1);
    refund_live_buyer_escrows(ledger, trade, buyer);
    return finish(TwoPartyPhase::Aborted);
  }
  outcome.info_flow.record({buyer, ObsKind::Key, trade});

  auto [decoded, phi_ok] = decode(pkg, key, phi);
  outcome.buyer_holds_data = true;
  outcome.buyer_phi_result = phi_ok;
  outcome.info_flow.record({buyer, ObsKind::DecodedData, trade});

  if (buyer_script.behavior == Behavior::BuyerFalseComplaint) {
    SplitMix64 forge_rng = rng.fork(13);
    MisbehaviorProof forged = forge_complaint(pkg, phi, forge_rng);
    Verdict v = ledger.submit_complaint(trade, buyer, forged, phi);
    outcome.verdicts.push_back(v);
  } else {
    std::optional<MisbehaviorProof> pom = generate_pom(pkg, key, phi);
    if (pom.has_value()) {
      for (const ProofLeaf& leaf : pom->leaves) {
        outcome.info_flow.record(
            {"ledger", ObsKind::DisputedLeafPlaintext, trade, {}, {}, leaf.index});
      }
      Verdict v = ledger.submit_complaint(trade, buyer, *pom, phi);
      outcome.verdicts.push_back(v);
      if (v.basis == VerdictBasis::ValidPom) {
        return finish(TwoPartyPhase::Aborted);
      }
    }
  }

  ledger.advance_time(terms.window + 1);
  outcome.payout = ledger.settle(trade);
  return finish(TwoPartyPhase::Settled);
}

}  // namespace dmx
