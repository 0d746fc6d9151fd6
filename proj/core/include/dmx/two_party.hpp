// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "dmx/outcome.hpp"
#include "dmx/package.hpp"
#include "dmx/predicate.hpp"
#include "dmx/rng.hpp"

namespace dmx {

// Four-phase two-party exchange: Agree (agreement on the ledger), Fund
// (buyer escrows the price), Deliver (seller posts the commitment and hands
// over the package), Reveal (key + deposit on the ledger, complaint window,
// then settlement). Encoded as a mediated trade with no mediator and zero
// commissions.
enum class TwoPartyPhase { Agreed, Funded, Delivered, Revealed, Settled, Aborted };
std::string_view two_party_phase_name(TwoPartyPhase p);

struct TwoPartyTerms {
  Money price = 0;
  Tick window = 1;
  Money deposit = 0;
  std::string rho_text;
};

struct PartyScript {
  Behavior behavior = Behavior::Honest;
  bool abort_before_funding = false;  // exercise the timeliness exit
};

// Drives one trade of `blob` under `phi` between the two parties to a
// terminal phase. Strategies are deterministic given `rng`.
TradeOutcome run_two_party(Ledger& ledger, const AccountId& seller,
                           const PartyScript& seller_script,
                           const AccountId& buyer, const PartyScript& buyer_script,
                           const TwoPartyTerms& terms, const DataBlob& blob,
                           const PredicateSpec& phi_spec, SplitMix64& rng);

// A deliberately invalid proof: genuine leaves of a consistent package
// re-labelled as a gate violation. Used by the false-complaint strategy and
// the soundness tests.
MisbehaviorProof forge_complaint(const EncodedPackage& pkg,
                                 const PredicateCircuit& circuit, SplitMix64& rng);

}  // namespace dmx
