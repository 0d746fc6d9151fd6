// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include <gtest/gtest.h>

#include "dmx/package.hpp"
#include "dmx/pom.hpp"
#include "dmx/predicate.hpp"
#include "dmx/two_party.hpp"
#include "gen.hpp"
#include "test_util.hpp"

namespace dmx {
namespace {

using dmx_test::random_circuit;
using dmx_test::to_bytes;

TEST(EncodePackage, SingleChunkConstCircuit) {
  SplitMix64 rng(3);
  DataBlob blob;
  blob.chunks.push_back(rng.word());
  PredicateCircuit c;
  c.num_inputs = 1;
  c.gates.push_back(Gate::constant(true_word()));
  EncodingKey key{rng.word()};

  EncodedPackage pkg = encode_package(blob, c, key);
  EXPECT_EQ(pkg.enc_chunks.size(), 1u);
  EXPECT_EQ(pkg.enc_wires.size(), 1u);
  auto [decoded, ok] = decode(pkg, key, c);
  EXPECT_EQ(decoded.chunks, blob.chunks);
  EXPECT_TRUE(ok);
}

TEST(EncodePackage, DeterministicRoot) {
  SplitMix64 rng(5);
  DataBlob blob = make_random_blob(6, rng);
  PredicateCircuit phi = compile_spec(hash_equals_spec(blob));
  EncodingKey key{rng.word()};
  EncodedPackage a = encode_package(blob, phi, key);
  EncodedPackage b = encode_package(blob, phi, key);
  EXPECT_EQ(a.root, b.root);
  EXPECT_EQ(a, b);
}

TEST(EncodePackage, ArityMismatchRejected) {
  SplitMix64 rng(7);
  DataBlob blob = make_random_blob(2, rng);
  PredicateCircuit phi = compile_spec(hash_equals_spec(make_random_blob(3, rng)));
  EXPECT_DMX_ERROR(encode_package(blob, phi, EncodingKey{}), Errc::ArityMismatch);
}

TEST(EncodePackage, AliceContainsCircuitRootMatchesBuyerRecomputation) {
  // Alice's chunked file where every chunk contains the bitstring s.
  SplitMix64 rng(9);
  DataBlob blob = make_random_blob(8, rng);
  const std::string s = "sig";
  for (Word& c : blob.chunks) std::copy(s.begin(), s.end(), c.begin() + 4);
  PredicateCircuit phi = compile_spec(all_chunks_contain_spec(8, to_bytes(s)));
  EncodingKey key{rng.word()};
  EncodedPackage pkg = encode_package(blob, phi, key);

  EXPECT_EQ(package_root(pkg), pkg.root);  // buyer-side recomputation
  EXPECT_TRUE(verify_package(pkg, pkg.root, phi.description_digest(), &phi));
  auto [decoded, ok] = decode(pkg, key, phi);
  EXPECT_TRUE(ok);
  EXPECT_EQ(decoded.chunks, blob.chunks);
}

TEST(VerifyPackage, RejectsAnySingleFlippedByte) {
  SplitMix64 rng(11);
  DataBlob blob = make_random_blob(5, rng);
  PredicateCircuit phi = compile_spec(hash_equals_spec(blob));
  EncodingKey key{rng.word()};
  EncodedPackage honest = encode_package(blob, phi, key);
  Digest agreed_root = honest.root;
  Digest agreed_digest = phi.description_digest();
  ASSERT_TRUE(verify_package(honest, agreed_root, agreed_digest, &phi));

  for (int trial = 0; trial < 1000; ++trial) {
    EncodedPackage tampered = honest;
    std::uint64_t leaf = rng.below(tampered.leaf_count());
    std::uint8_t bit = static_cast<std::uint8_t>(1u << rng.below(8));
    if (leaf < tampered.enc_chunks.size()) {
      tampered.enc_chunks[leaf][rng.below(kWordSize)] ^= bit;
    } else {
      tampered.enc_wires[leaf - tampered.enc_chunks.size()][rng.below(kWordSize)] ^= bit;
    }
    ASSERT_FALSE(verify_package(tampered, agreed_root, agreed_digest, &phi));
  }
}

TEST(VerifyPackage, RejectsWrongCircuitDigest) {
  SplitMix64 rng(13);
  DataBlob blob = make_random_blob(2, rng);
  PredicateCircuit phi = compile_spec(hash_equals_spec(blob));
  EncodedPackage pkg = encode_package(blob, phi, EncodingKey{rng.word()});
  Digest wrong = phi.description_digest();
  wrong.bytes[5] ^= 1;
  EXPECT_FALSE(verify_package(pkg, pkg.root, wrong, &phi));
}

TEST(Decode, WrongKeyFailsThePredicate) {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    DataBlob blob = make_random_blob(3, rng);
    PredicateCircuit phi = compile_spec(hash_equals_spec(blob));
    EncodingKey key{rng.word()};
    EncodedPackage pkg = encode_package(blob, phi, key);
    EncodingKey wrong{rng.word()};
    auto [decoded, ok] = decode(pkg, wrong, phi);
    ASSERT_NE(decoded.chunks, blob.chunks);
    ASSERT_FALSE(ok);
  }
}

TEST(Decode, JunkGoodsDecodeToFalse) {
  SplitMix64 rng(19);
  DataBlob real = make_random_blob(4, rng);
  DataBlob junk = make_random_blob(4, rng);
  PredicateCircuit phi = compile_spec(hash_equals_spec(real));
  EncodingKey key{rng.word()};
  EncodedPackage pkg = encode_package(junk, phi, key);
  auto [decoded, ok] = decode(pkg, key, phi);
  EXPECT_EQ(decoded.chunks, junk.chunks);
  EXPECT_FALSE(ok);
}

TEST(Decode, RoundTripIdentityProperty) {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(32));
    DataBlob blob = make_random_blob(n, rng);
    PredicateCircuit circuit = random_circuit(rng, n, 64);
    EncodingKey key{rng.word()};
    EncodedPackage pkg = encode_package(blob, circuit, key);
    auto [decoded, ok] = decode(pkg, key, circuit);
    ASSERT_EQ(decoded.chunks, blob.chunks);
    ASSERT_EQ(ok, eval_circuit(circuit, blob.chunks));
  }
}

TEST(Pom, HonestPackageYieldsNoProof) {
  SplitMix64 rng(29);
  DataBlob blob = make_random_blob(4, rng);
  PredicateCircuit phi = compile_spec(hash_equals_spec(blob));
  EncodingKey key{rng.word()};
  EncodedPackage pkg = encode_package(blob, phi, key);
  EXPECT_EQ(generate_pom(pkg, key, phi), std::nullopt);
}

TEST(Pom, CorruptedOutputWireGivesBadOutput) {
  SplitMix64 rng(31);
  DataBlob blob = make_random_blob(3, rng);
  PredicateCircuit phi = compile_spec(hash_equals_spec(blob));
  EncodingKey key{rng.word()};
  EncodedPackage pkg = encode_package(blob, phi, key);
  pkg.enc_wires.back()[7] ^= 0x20;  // dishonest encode of the output wire
  pkg.root = package_root(pkg);

  auto pom = generate_pom(pkg, key, phi);
  ASSERT_TRUE(pom.has_value());
  EXPECT_EQ(pom->kind, PomKind::BadOutput);
  ASSERT_EQ(pom->leaves.size(), 1u);
  EXPECT_EQ(pom->leaves[0].index, pkg.enc_chunks.size() + pkg.enc_wires.size() - 1);
  EXPECT_TRUE(verify_pom(pkg.root, phi, key, *pom));
}

TEST(Pom, CorruptedChunkGivesBadGateAtItsInputGate) {
  SplitMix64 rng(37);
  DataBlob blob = make_random_blob(5, rng);
  PredicateCircuit phi = compile_spec(hash_equals_spec(blob));
  EncodingKey key{rng.word()};
  EncodedPackage pkg = encode_package(blob, phi, key);
  pkg.enc_chunks[3][0] ^= 0x01;
  pkg.root = package_root(pkg);

  auto pom = generate_pom(pkg, key, phi);
  ASSERT_TRUE(pom.has_value());
  ASSERT_EQ(pom->kind, PomKind::BadGate);
  const Gate& gate = phi.gates[pom->gate];
  EXPECT_EQ(gate.op, GateOp::Input);
  EXPECT_EQ(gate.input_index, 3u);
  // Leaves: the gate's wire, then the chunk it reads.
  ASSERT_EQ(pom->leaves.size(), 2u);
  EXPECT_EQ(pom->leaves[0].index, pkg.enc_chunks.size() + pom->gate);
  EXPECT_EQ(pom->leaves[1].index, 3u);
  EXPECT_TRUE(verify_pom(pkg.root, phi, key, *pom));
}

// Exhaustive single-leaf corruption: for every leaf position of packages
// over random circuits, a proof exists and verifies. This is the per-module
// version of the acceptance run.
TEST(Pom, SingleCorruptionCompleteness) {
  SplitMix64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(8));
    PredicateCircuit circuit = random_circuit(rng, n, 24);
    DataBlob blob = make_random_blob(n, rng);
    EncodingKey key{rng.word()};
    EncodedPackage honest = encode_package(blob, circuit, key);

    for (std::uint64_t leaf = 0; leaf < honest.leaf_count(); ++leaf) {
      EncodedPackage bad = honest;
      std::uint8_t bit = static_cast<std::uint8_t>(1u << rng.below(8));
      if (leaf < bad.enc_chunks.size()) {
        bad.enc_chunks[leaf][rng.below(kWordSize)] ^= bit;
      } else {
        bad.enc_wires[leaf - bad.enc_chunks.size()][rng.below(kWordSize)] ^= bit;
      }
      bad.root = package_root(bad);
      auto pom = generate_pom(bad, key, circuit);
      ASSERT_TRUE(pom.has_value()) << "leaf " << leaf;
      ASSERT_TRUE(verify_pom(bad.root, circuit, key, *pom)) << "leaf " << leaf;
      // The proof must not verify against the honest root.
      ASSERT_FALSE(verify_pom(honest.root, circuit, key, *pom));
    }
  }
}

TEST(Pom, ForgeryFuzzAgainstHonestPackage) {
  SplitMix64 rng(43);
  DataBlob blob = make_random_blob(6, rng);
  PredicateCircuit phi = compile_spec(hash_equals_spec(blob));
  EncodingKey key{rng.word()};
  EncodedPackage pkg = encode_package(blob, phi, key);

  for (int trial = 0; trial < 2000; ++trial) {
    MisbehaviorProof forged;
    switch (rng.below(4)) {
      case 0:
        // Honest structure, honest leaves: semantically consistent, so the
        // claim must be rejected.
        forged = forge_complaint(pkg, phi, rng);
        break;
      case 1: {  // fake ciphertext under a genuine path
        forged = forge_complaint(pkg, phi, rng);
        forged.leaves[rng.below(forged.leaves.size())].ciphertext = rng.word();
        break;
      }
      case 2: {  // random paths
        forged = forge_complaint(pkg, phi, rng);
        ProofLeaf& leaf = forged.leaves[rng.below(forged.leaves.size())];
        for (MerkleStep& s : leaf.path.path) s.sibling.bytes[0] ^= 0xff;
        break;
      }
      default: {  // mislabeled indices
        forged = forge_complaint(pkg, phi, rng);
        forged.leaves[0].index = rng.below(pkg.leaf_count());
        break;
      }
    }
    ASSERT_FALSE(verify_pom(pkg.root, phi, key, forged)) << "trial " << trial;
  }
}

TEST(Pom, JsonRoundTrip) {
  SplitMix64 rng(47);
  DataBlob blob = make_random_blob(4, rng);
  PredicateCircuit phi = compile_spec(hash_equals_spec(blob));
  EncodingKey key{rng.word()};
  EncodedPackage pkg = encode_package(blob, phi, key);
  pkg.enc_chunks[1][2] ^= 0x04;
  pkg.root = package_root(pkg);
  auto pom = generate_pom(pkg, key, phi);
  ASSERT_TRUE(pom.has_value());
  MisbehaviorProof parsed = MisbehaviorProof::parse(pom->to_json());
  EXPECT_EQ(parsed, *pom);
  EXPECT_EQ(parsed.digest(), pom->digest());
  EXPECT_TRUE(verify_pom(pkg.root, phi, key, parsed));
  EXPECT_DMX_ERROR(MisbehaviorProof::parse("nope"), Errc::MalformedPackage);
}

TEST(PackageJson, RoundTripPreservesEverything) {
  SplitMix64 rng(53);
  Table table = make_medical_table(5, rng);
  DataBlob blob = table.to_blob();
  PredicateSpec spec = medical_phi_spec(table.schema, 6, 5);
  PredicateCircuit phi = compile_spec(spec);
  EncodedPackage pkg =
      encode_package(blob, phi, EncodingKey{rng.word()}, medical_mask());
  EncodedPackage parsed = EncodedPackage::parse(pkg.to_json());
  EXPECT_EQ(parsed, pkg);
  EXPECT_DMX_ERROR(EncodedPackage::parse("{}"), Errc::MalformedPackage);
}

TEST(SelectiveMask, DecodeAndPomStillWork) {
  SplitMix64 rng(59);
  Table table = make_medical_table(10, rng);
  DataBlob blob = table.to_blob();
  PredicateSpec spec = medical_phi_spec(table.schema, 11, 10);
  PredicateCircuit phi = compile_spec(spec);
  EncodingKey key{rng.word()};
  EncodedPackage pkg = encode_package(blob, phi, key, medical_mask());

  // Plaintext columns are readable in the ciphertext chunks.
  EXPECT_EQ(pkg.enc_chunks[0], blob.chunks[0]);  // header fully clear
  Bytes clear_class = table.schema.cell_of(pkg.enc_chunks[3], 2);
  EXPECT_EQ(clear_class, table.schema.cell_of(blob.chunks[3], 2));

  auto [decoded, ok] = decode(pkg, key, phi);
  EXPECT_EQ(decoded.chunks, blob.chunks);
  EXPECT_TRUE(ok);
  EXPECT_EQ(generate_pom(pkg, key, phi), std::nullopt);

  // Corruption in a masked (encrypted) byte still yields a valid proof.
  EncodedPackage bad = pkg;
  bad.enc_chunks[4][5] ^= 0x80;  // the age byte is encrypted
  bad.root = package_root(bad);
  auto pom = generate_pom(bad, key, phi);
  ASSERT_TRUE(pom.has_value());
  EXPECT_TRUE(verify_pom(bad.root, phi, key, *pom, medical_mask()));
}

// ---- the two-party driver ----

struct TwoPartyFixture {
  Ledger ledger;
  DataBlob blob;
  PredicateSpec phi_spec;
  TwoPartyTerms terms;

  TwoPartyFixture() {
    ledger.open_account("alice", 1000);
    ledger.open_account("bob", 1000);
    SplitMix64 rng(61);
    blob = make_random_blob(4, rng);
    phi_spec = hash_equals_spec(blob);
    terms.price = 5;
    terms.window = 2;
    terms.deposit = 1;
    terms.rho_text = "resale requires attribution";
  }
};

TEST(TwoParty, HonestTradeSettles) {
  TwoPartyFixture f;
  SplitMix64 rng(67);
  TradeOutcome out = run_two_party(f.ledger, "alice", {}, "bob", {}, f.terms,
                                   f.blob, f.phi_spec, rng);
  EXPECT_EQ(out.terminal_phase, "settled");
  EXPECT_TRUE(out.buyer_holds_data);
  EXPECT_EQ(out.buyer_phi_result, true);
  EXPECT_EQ(out.deltas.at("alice"), 5);
  EXPECT_EQ(out.deltas.at("bob"), -5);
  EXPECT_EQ(f.ledger.circulating_total(), f.ledger.genesis_total());
  EXPECT_EQ(check_protocol_order(f.ledger.read_log(0)), std::nullopt);
}

TEST(TwoParty, AbortBeforeFundingIsFree) {
  TwoPartyFixture f;
  SplitMix64 rng(71);
  PartyScript aborting;
  aborting.abort_before_funding = true;
  TradeOutcome out = run_two_party(f.ledger, "alice", aborting, "bob", {}, f.terms,
                                   f.blob, f.phi_spec, rng);
  EXPECT_EQ(out.terminal_phase, "aborted");
  EXPECT_EQ(out.deltas.at("alice"), 0);
  EXPECT_EQ(out.deltas.at("bob"), 0);
}

TEST(TwoParty, JunkSellerIsCaughtAndPunished) {
  TwoPartyFixture f;
  SplitMix64 rng(73);
  TradeOutcome out = run_two_party(f.ledger, "alice", {Behavior::SellerJunkData},
                                   "bob", {}, f.terms, f.blob, f.phi_spec, rng);
  EXPECT_EQ(out.terminal_phase, "aborted");
  ASSERT_EQ(out.verdicts.size(), 1u);
  EXPECT_EQ(out.verdicts[0].basis, VerdictBasis::ValidPom);
  EXPECT_EQ(out.verdicts[0].guilty, "alice");
  // Buyer refunded in full plus the forfeited deposit; seller loses it.
  EXPECT_EQ(out.deltas.at("bob"), 1);
  EXPECT_EQ(out.deltas.at("alice"), -1);
}

TEST(TwoParty, UnderpayStallsWithNotPaid) {
  TwoPartyFixture f;
  SplitMix64 rng(79);
  TradeOutcome out = run_two_party(f.ledger, "alice", {}, "bob",
                                   {Behavior::BuyerUnderpay}, f.terms, f.blob,
                                   f.phi_spec, rng);
  EXPECT_EQ(out.terminal_phase, "aborted");
  ASSERT_EQ(out.attempted_violations.size(), 1u);
  EXPECT_EQ(out.attempted_violations[0].op, "reveal_key");
  EXPECT_EQ(out.attempted_violations[0].error, Errc::NotPaid);
  EXPECT_EQ(out.deltas.at("alice"), 0);
  EXPECT_EQ(out.deltas.at("bob"), 0);
}

TEST(TwoParty, FalseComplaintIsRejectedAndTradeSettles) {
  TwoPartyFixture f;
  SplitMix64 rng(83);
  TradeOutcome out = run_two_party(f.ledger, "alice", {}, "bob",
                                   {Behavior::BuyerFalseComplaint}, f.terms,
                                   f.blob, f.phi_spec, rng);
  EXPECT_EQ(out.terminal_phase, "settled");
  ASSERT_EQ(out.verdicts.size(), 1u);
  EXPECT_EQ(out.verdicts[0].basis, VerdictBasis::InvalidComplaint);
  EXPECT_EQ(out.deltas.at("alice"), 5);
  EXPECT_EQ(out.deltas.at("bob"), -5);
}

TEST(TwoParty, WrongRhoAbortsBeforePayment) {
  TwoPartyFixture f;
  SplitMix64 rng(89);
  TradeOutcome out = run_two_party(f.ledger, "alice", {Behavior::SellerWrongRho},
                                   "bob", {}, f.terms, f.blob, f.phi_spec, rng);
  EXPECT_EQ(out.terminal_phase, "aborted");
  EXPECT_EQ(out.deltas.at("alice"), 0);
  EXPECT_EQ(out.deltas.at("bob"), 0);
}

TEST(TwoParty, PhaseOrderHoldsAcrossOutcomes) {
  for (Behavior buyer : {Behavior::Honest, Behavior::BuyerUnderpay,
                         Behavior::BuyerFalseComplaint}) {
    for (Behavior seller : {Behavior::Honest, Behavior::SellerJunkData}) {
      TwoPartyFixture f;
      SplitMix64 rng(97);
      run_two_party(f.ledger, "alice", {seller}, "bob", {buyer}, f.terms, f.blob,
                    f.phi_spec, rng);
      auto violation = check_protocol_order(f.ledger.read_log(0));
      EXPECT_EQ(violation, std::nullopt)
          << "seller=" << behavior_name(seller)
          << " buyer=" << behavior_name(buyer);
    }
  }
}

}  // namespace
}  // namespace dmx
