// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include <benchmark/benchmark.h>

#include "dmx/adversim.hpp"
#include "dmx/merkle.hpp"
#include "dmx/package.hpp"
#include "dmx/predicate.hpp"
#include "dmx/rng.hpp"

namespace {

using namespace dmx;

std::vector<Word> random_words(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Word> words(n);
  for (Word& w : words) w = rng.word();
  return words;
}

void BM_Sha256Word(benchmark::State& state) {
  Word w = SplitMix64(1).word();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sha256(span_of(w)));
  }
}
BENCHMARK(BM_Sha256Word);

void BM_MerkleRoot(benchmark::State& state) {
  std::vector<Word> leaves = random_words(state.range(0), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(merkle_root_words(leaves));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MerkleRoot)->Arg(64)->Arg(1024)->Arg(16384);

void BM_EncodePackage(benchmark::State& state) {
  SplitMix64 rng(3);
  DataBlob blob = make_random_blob(state.range(0), rng);
  PredicateCircuit phi = compile_spec(hash_equals_spec(blob));
  EncodingKey key{rng.word()};
  for (auto _ : state) {
    benchmark::DoNotOptimize(encode_package(blob, phi, key));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EncodePackage)->Arg(16)->Arg(256)->Arg(4096);

void BM_GenerateAndVerifyPom(benchmark::State& state) {
  SplitMix64 rng(4);
  DataBlob blob = make_random_blob(64, rng);
  PredicateCircuit phi = compile_spec(hash_equals_spec(blob));
  EncodingKey key{rng.word()};
  EncodedPackage pkg = encode_package(blob, phi, key);
  pkg.enc_chunks[7][3] ^= 0x40;  // dishonest encode
  pkg.root = package_root(pkg);
  for (auto _ : state) {
    auto pom = generate_pom(pkg, key, phi);
    benchmark::DoNotOptimize(verify_pom(pkg.root, phi, key, *pom));
  }
}
BENCHMARK(BM_GenerateAndVerifyPom);

void BM_LedgerTransfer(benchmark::State& state) {
  Ledger ledger;
  ledger.open_account("a", 1'000'000'000);
  ledger.open_account("b", 0);
  for (auto _ : state) {
    ledger.transfer("a", "b", 1);
    ledger.transfer("b", "a", 1);
  }
  state.SetItemsProcessed(state.iterations() * 2);
}
BENCHMARK(BM_LedgerTransfer);

void BM_RunHonestScenario(benchmark::State& state) {
  Scenario s;
  s.id = "bench";
  s.seed = 7;
  s.accounts = {{"seller", 10'000'000, Role::Seller},
                {"mediator", 0, Role::Mediator},
                {"buyer", 200'000'000, Role::Buyer}};
  s.p_s = 100'000'000;
  s.p_b = 120'000'000;
  s.c_s = 500;
  s.c_b = 1000;
  s.data.chunks = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_scenario(s));
  }
}
BENCHMARK(BM_RunHonestScenario)->Arg(8)->Arg(64);

}  // namespace
