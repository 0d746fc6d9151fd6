// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "dmx/ledger.hpp"

namespace dmx {

// The trade graph G = (V, E, T): vertices are accounts, one weighted edge
// per settled trade (seller -> buyer, weight = executed price), and one
// (seller, mediator, buyer) tuple per settled mediated trade. Nothing here
// is stored by any participant; it is derived from the event log alone.

struct TradeEdge {
  AccountId seller;
  AccountId buyer;
  Money weight = 0;
  TradeId trade;
  Digest data_root{};  // the agreement's plaintext data id

  bool operator==(const TradeEdge&) const = default;
};

struct TradeTuple {
  AccountId seller;
  AccountId mediator;
  AccountId buyer;
  TradeId trade;

  bool operator==(const TradeTuple&) const = default;
};

struct TradeGraph {
  std::set<AccountId> vertices;
  std::vector<TradeEdge> edges;    // in settlement order; repeats allowed
  std::vector<TradeTuple> tuples;

  bool operator==(const TradeGraph&) const = default;
};

// Incremental fold; feed events in log order.
class GraphBuilder {
 public:
  void apply(const LedgerEvent& event);
  const TradeGraph& graph() const { return graph_; }

 private:
  struct PendingTrade {
    AccountId seller;
    std::optional<AccountId> mediator;
    AccountId buyer;
    Money price = 0;
    Digest data_id{};
  };
  std::map<TradeId, PendingTrade> pending_;
  TradeGraph graph_;
};

// Validates seq contiguity (CorruptLog) and folds the whole log.
TradeGraph rebuild_from_log(std::span<const LedgerEvent> events);

// Edges carrying the given data root, in settlement order.
std::vector<TradeEdge> provenance_chain(const TradeGraph& graph, const Digest& root);

// Deterministic DOT rendering: edges sorted by trade id, weights as labels,
// mediator links dashed.
std::string export_dot(const TradeGraph& graph);

std::string graph_to_json(const TradeGraph& graph);

}  // namespace dmx
