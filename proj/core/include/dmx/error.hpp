// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dmx {

enum class Errc {
  // ledger
  DuplicateAccount,
  UnknownAccount,
  InsufficientFunds,
  InvalidAmount,
  UnknownEscrow,
  AlreadyReleased,
  HashMismatch,
  DeadlineExpired,
  NoSuchTrade,
  KeyNotRevealed,
  WindowStillOpen,
  AlreadySettled,
  ComplaintUpheld,
  NotPaid,
  AlreadyRevealed,
  AlreadyPosted,
  CommitmentMissing,
  DepositBelowMinimum,
  // predicates and commitments
  ArityMismatch,
  MalformedCircuit,
  UnsupportedSpec,
  EmptySet,
  EmptyLeaves,
  IndexOutOfRange,
  // mediated trading
  BudgetBelowAsk,
  PhiCheckFailed,
  RhoRejected,
  MalformedPackage,
  InvalidPrice,
  // logs and scenarios
  CorruptLog,
  MalformedScenario,
};

// Stable snake_case name, used in reports and CLI diagnostics.
std::string_view errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace dmx
