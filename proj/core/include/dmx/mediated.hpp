// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <optional>
#include <string>

#include "dmx/outcome.hpp"
#include "dmx/package.hpp"
#include "dmx/predicate.hpp"
#include "dmx/rng.hpp"
#include "dmx/two_party.hpp"

namespace dmx {

// The seven-step mediated trade: offer, request, match at p = min(p_S, p_B),
// buyer payment of p plus the buyer commission, key reveal with deposit,
// complaint window, settlement with commission payouts. The mediator only
// ever handles ciphertext.

struct SellerOffer {
  AccountId seller;
  EncodedPackage package;
  Digest data_id{};
  std::string rho_text;
  Money ask = 0;       // p_S
  Bps commission = 0;  // c_S
};

struct BuyerRequest {
  AccountId buyer;
  PredicateSpec phi_spec;
  PredicateCircuit phi;
  Money budget = 0;    // p_B
  Bps commission = 0;  // c_B
};

struct MediatedTradeTerms {
  Tick window = 1;
  Money deposit_required = 0;
};

enum class MediatedPhase {
  Offered,
  Requested,
  Matched,
  Paid,
  Revealed,
  Complained,
  Settled,
  Aborted,
};
std::string_view mediated_phase_name(MediatedPhase p);

struct MediatedTrade {
  TradeId id;
  std::string offer_id;
  std::string request_id;
  AccountId seller, mediator, buyer;
  Money price = 0;  // min(p_S, p_B)
  MediatedPhase phase = MediatedPhase::Matched;
  EncodedPackage delivered;  // as forwarded to the buyer
};

class MediatedEngine {
 public:
  MediatedEngine(Ledger& ledger, AccountId mediator);

  // Step 1. Posts the package root, data id and regulation digest on the
  // ledger under the offer id. The mediator stores ciphertext only.
  std::string register_offer(const SellerOffer& offer);

  // Step 2. Posts the predicate digest under the request id.
  std::string register_request(const BuyerRequest& request);

  // Step 3. Requires p_B >= p_S; price executes at p_S = min(p_S, p_B).
  // Unless told to skip, the mediator checks package shape against the
  // requested circuit, the on-ledger root, and whatever of the predicate is
  // decidable over plaintext-visible bytes. Registers the agreement and
  // forwards the package (a tampering mediator flips one ciphertext byte).
  MediatedTrade& match_and_forward(const std::string& offer_id,
                                   const std::string& request_id,
                                   const MediatedTradeTerms& terms,
                                   Behavior mediator_behavior = Behavior::Honest,
                                   SplitMix64* rng = nullptr);

  // Step 4. The buyer verifies the forwarded package against the on-ledger
  // commitment, countersigns the regulation, and escrows p plus commission.
  // Throws RhoRejected / MalformedPackage after marking the trade aborted;
  // a pay_override below the due amount leaves the trade unpaid.
  std::optional<EscrowId> accept_and_pay(MediatedTrade& trade, bool accept_rho = true,
                                         std::optional<Money> pay_override = std::nullopt);

  // Step 5. Seller posts key and deposit; refuses until step 4 is complete
  // (NotPaid comes from the ledger).
  void reveal_key(MediatedTrade& trade, const EncodingKey& key, Money deposit);

  // Step 6. Delegates to the ledger's arbitration.
  Verdict complain(MediatedTrade& trade, const AccountId& complainant,
                   const MisbehaviorProof& proof, const PredicateCircuit& phi);

  // Step 7.
  Payouts settle(MediatedTrade& trade);

  // Deadline exit for stalled trades: refunds live buyer escrows.
  void abort_trade(MediatedTrade& trade);

  const SellerOffer* offer(const std::string& id) const;
  const BuyerRequest* request(const std::string& id) const;

 private:
  Ledger& ledger_;
  AccountId mediator_;
  std::map<std::string, SellerOffer> offers_;
  std::map<std::string, BuyerRequest> requests_;
  std::map<std::string, MediatedTrade> trades_;
};

struct MediatedRunTerms {
  Money ask = 0;      // p_S
  Money budget = 0;   // p_B
  Bps c_seller = 0;
  Bps c_buyer = 0;
  Tick window = 1;
  Bps deposit_bps = 1000;  // seller deposit as bps of the executed price
  std::string rho_text;
  EncryptionMask mask = EncryptionMask::full();
};

// Drives steps 1-7 with the given scripts to a terminal phase.
TradeOutcome run_mediated(Ledger& ledger, const AccountId& seller,
                          const PartyScript& seller_script,
                          const AccountId& mediator,
                          const PartyScript& mediator_script,
                          const AccountId& buyer, const PartyScript& buyer_script,
                          const MediatedRunTerms& terms, const DataBlob& blob,
                          const PredicateSpec& phi_spec, SplitMix64& rng);

}  // namespace dmx
