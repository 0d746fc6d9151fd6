// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#include "dmx/tradegraph.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

#include "dmx/error.hpp"

namespace dmx {

using nlohmann::json;

void GraphBuilder::apply(const LedgerEvent& event) {
  switch (event.kind) {
    case EventKind::AccountOpened: {
      graph_.vertices.insert(std::get<AccountOpenedPayload>(event.payload).id);
      break;
    }
    case EventKind::AgreementRegistered: {
      const auto& p = std::get<AgreementRegisteredPayload>(event.payload);
      pending_[p.trade] = PendingTrade{p.agreement.seller, p.agreement.mediator,
                                       p.agreement.buyer, p.agreement.price,
                                       p.agreement.data_id};
      break;
    }
    case EventKind::CommitmentPosted: {
      const auto& p = std::get<CommitmentPostedPayload>(event.payload);
      auto it = pending_.find(p.contract);
      if (it != pending_.end() && p.data_id.has_value()) {
        it->second.data_id = *p.data_id;
      }
      break;
    }
    case EventKind::Settled: {
      const auto& p = std::get<SettledPayload>(event.payload);
      auto it = pending_.find(p.trade);
      if (it == pending_.end()) break;
      const PendingTrade& t = it->second;
      graph_.edges.push_back({t.seller, t.buyer, t.price, p.trade, t.data_id});
      if (t.mediator.has_value()) {
        graph_.tuples.push_back({t.seller, *t.mediator, t.buyer, p.trade});
      }
      break;
    }
    default:
      break;
  }
}

TradeGraph rebuild_from_log(std::span<const LedgerEvent> events) {
  validate_log(events);
  GraphBuilder builder;
  for (const LedgerEvent& e : events) builder.apply(e);
  return builder.graph();
}

std::vector<TradeEdge> provenance_chain(const TradeGraph& graph, const Digest& root) {
  std::vector<TradeEdge> chain;
  for (const TradeEdge& e : graph.edges) {
    if (e.data_root == root) chain.push_back(e);
  }
  return chain;
}

std::string export_dot(const TradeGraph& graph) {
  std::vector<TradeEdge> edges = graph.edges;
  std::sort(edges.begin(), edges.end(), [](const TradeEdge& a, const TradeEdge& b) {
    return a.trade < b.trade;
  });
  std::vector<TradeTuple> tuples = graph.tuples;
  std::sort(tuples.begin(), tuples.end(),
            [](const TradeTuple& a, const TradeTuple& b) { return a.trade < b.trade; });

  std::string out = "digraph trades {\n";
  for (const AccountId& v : graph.vertices) {
    out += "  \"" + v + "\";\n";
  }
  for (const TradeEdge& e : edges) {
    out += "  \"" + e.seller + "\" -> \"" + e.buyer + "\" [label=\"" + e.trade +
           ": " + std::to_string(e.weight) + "\"];\n";
  }
  for (const TradeTuple& t : tuples) {
    out += "  \"" + t.seller + "\" -> \"" + t.mediator + "\" [style=dashed, label=\"" +
           t.trade + "\"];\n";
    out += "  \"" + t.mediator + "\" -> \"" + t.buyer + "\" [style=dashed, label=\"" +
           t.trade + "\"];\n";
  }
  out += "}\n";
  return out;
}

std::string graph_to_json(const TradeGraph& graph) {
  json j;
  j["vertices"] = graph.vertices;
  json edges = json::array();
  for (const TradeEdge& e : graph.edges) {
    json ej;
    ej["seller"] = e.seller;
    ej["buyer"] = e.buyer;
    ej["weight"] = e.weight;
    ej["trade"] = e.trade;
    ej["data_root"] = to_hex(e.data_root);
    edges.push_back(std::move(ej));
  }
  j["edges"] = std::move(edges);
  json tuples = json::array();
  for (const TradeTuple& t : graph.tuples) {
    json tj;
    tj["seller"] = t.seller;
    tj["mediator"] = t.mediator;
    tj["buyer"] = t.buyer;
    tj["trade"] = t.trade;
    tuples.push_back(std::move(tj));
  }
  j["tuples"] = std::move(tuples);
  return j.dump(2) + "\n";
}

}  // namespace dmx
