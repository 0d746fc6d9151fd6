// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "dmx/outcome.hpp"

namespace dmx {

std::string_view role_name(Role r) {
  switch (r) {
    case Role::Seller: return "seller";
    case Role::Mediator: return "mediator";
    case Role::Buyer: return "buyer";
  }
  return "?";
}

std::optional<Role> role_from_name(std::string_view name) {
  for (Role r : {Role::Seller, Role::Mediator, Role::Buyer}) {
    if (role_name(r) == name) return r;
  }
  return std::nullopt;
}

std::string_view behavior_name(Behavior b) {
  switch (b) {
    case Behavior::Honest: return "honest";
    case Behavior::SellerJunkData: return "seller_junk_data";
    case Behavior::SellerWrongRho: return "seller_wrong_rho";
    case Behavior::MediatorSkipPhiCheck: return "mediator_skip_phi_check";
    case Behavior::MediatorTamperPackage: return "mediator_tamper_package";
    case Behavior::BuyerUnderpay: return "buyer_underpay";
    case Behavior::BuyerFalseComplaint: return "buyer_false_complaint";
    case Behavior::OffSystemTrade: return "off_system_trade";
  }
  return "?";
}

std::optional<Behavior> behavior_from_name(std::string_view name) {
  for (Behavior b :
       {Behavior::Honest, Behavior::SellerJunkData, Behavior::SellerWrongRho,
        Behavior::MediatorSkipPhiCheck, Behavior::MediatorTamperPackage,
        Behavior::BuyerUnderpay, Behavior::BuyerFalseComplaint,
        Behavior::OffSystemTrade}) {
    if (behavior_name(b) == name) return b;
  }
  return std::nullopt;
}

std::string_view obs_kind_name(ObsKind k) {
  switch (k) {
    case ObsKind::PackageCiphertext: return "package_ciphertext";
    case ObsKind::PlainBytes: return "plain_bytes";
    case ObsKind::Key: return "key";
    case ObsKind::DecodedData: return "decoded_data";
    case ObsKind::DisputedLeafPlaintext: return "disputed_leaf_plaintext";
  }
  return "?";
}

bool InfoFlow::party_saw(const AccountId& party, ObsKind kind) const {
  for (const Observation& o : entries) {
    if (o.party == party && o.kind == kind) return true;
  }
  return false;
}

std::map<AccountId, std::int64_t> balance_deltas(
    const std::map<AccountId, Money>& before, const Ledger& ledger) {
  std::map<AccountId, std::int64_t> deltas;
  for (const auto& [id, bal] : before) {
    deltas[id] = -static_cast<std::int64_t>(bal);
  }
  for (const auto& [id, bal] : ledger.balances()) {
    deltas[id] += static_cast<std::int64_t>(bal);
  }
  return deltas;
}

}  // namespace dmx
