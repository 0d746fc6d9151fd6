// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "dmx/error.hpp"

namespace dmx {

std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::DuplicateAccount: return "duplicate_account";
    case Errc::UnknownAccount: return "unknown_account";
    case Errc::InsufficientFunds: return "insufficient_funds";
    case Errc::InvalidAmount: return "invalid_amount";
    case Errc::UnknownEscrow: return "unknown_escrow";
    case Errc::AlreadyReleased: return "already_released";
    case Errc::HashMismatch: return "hash_mismatch";
    case Errc::DeadlineExpired: return "deadline_expired";
    case Errc::NoSuchTrade: return "no_such_trade";
    case Errc::KeyNotRevealed: return "key_not_revealed";
    case Errc::WindowStillOpen: return "window_still_open";
    case Errc::AlreadySettled: return "already_settled";
    case Errc::ComplaintUpheld: return "complaint_upheld";
    case Errc::NotPaid: return "not_paid";
    case Errc::AlreadyRevealed: return "already_revealed";
    case Errc::AlreadyPosted: return "already_posted";
    case Errc::CommitmentMissing: return "commitment_missing";
    case Errc::DepositBelowMinimum: return "deposit_below_minimum";
    case Errc::ArityMismatch: return "arity_mismatch";
    case Errc::MalformedCircuit: return "malformed_circuit";
    case Errc::UnsupportedSpec: return "unsupported_spec";
    case Errc::EmptySet: return "empty_set";
    case Errc::EmptyLeaves: return "empty_leaves";
    case Errc::IndexOutOfRange: return "index_out_of_range";
    case Errc::BudgetBelowAsk: return "budget_below_ask";
    case Errc::PhiCheckFailed: return "phi_check_failed";
    case Errc::RhoRejected: return "rho_rejected";
    case Errc::MalformedPackage: return "malformed_package";
    case Errc::InvalidPrice: return "invalid_price";
    case Errc::CorruptLog: return "corrupt_log";
    case Errc::MalformedScenario: return "malformed_scenario";
  }
  return "unknown_error";
}

}  // namespace dmx
