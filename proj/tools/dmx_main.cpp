// Copyright 2026 the dmx authors. Distributed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
//
// dmx: run trade scenarios against the simulated ledger, rebuild trade
// graphs from event logs, and audit regulation digests retrospectively.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "dmx/adversim.hpp"
#include "dmx/tradegraph.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitCorruptLog = 3;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out);
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed,
            const std::string& out_dir) {
  auto text = read_file(scenario_path);
  if (!text.has_value()) {
    std::cerr << "dmx: cannot read " << scenario_path << "\n";
    return kExitInput;
  }
  try {
    dmx::Scenario scenario = dmx::Scenario::parse(*text);
    if (seed.has_value()) scenario.seed = *seed;
    dmx::TranscriptReport report = dmx::run_scenario(scenario);

    fs::create_directories(out_dir);
    fs::path report_path = fs::path(out_dir) / "report.json";
    fs::path events_path = fs::path(out_dir) / "events.jsonl";
    if (!write_file(report_path, report.to_json()) ||
        !write_file(events_path, dmx::events_to_jsonl(report.events))) {
      std::cerr << "dmx: cannot write outputs under " << out_dir << "\n";
      return kExitInput;
    }
    std::cout << report.scenario_id << ": " << report.terminal_phase << " ("
              << report.events.size() << " events)\n";
    return kExitOk;
  } catch (const dmx::Error& e) {
    std::cerr << "dmx: " << e.what() << "\n";
    return kExitInput;
  }
}

std::optional<std::vector<dmx::LedgerEvent>> load_events(const std::string& path,
                                                         int& exit_code) {
  auto text = read_file(path);
  if (!text.has_value()) {
    std::cerr << "dmx: cannot read " << path << "\n";
    exit_code = kExitInput;
    return std::nullopt;
  }
  try {
    std::vector<dmx::LedgerEvent> events = dmx::events_from_jsonl(*text);
    dmx::validate_log(events);
    return events;
  } catch (const dmx::Error& e) {
    std::cerr << "dmx: " << e.what() << "\n";
    exit_code = e.code() == dmx::Errc::CorruptLog ? kExitCorruptLog : kExitInput;
    return std::nullopt;
  }
}

int cmd_graph(const std::string& events_path, const std::string& out_dir) {
  int exit_code = kExitOk;
  auto events = load_events(events_path, exit_code);
  if (!events.has_value()) return exit_code;
  try {
    dmx::TradeGraph graph = dmx::rebuild_from_log(*events);
    fs::create_directories(out_dir);
    if (!write_file(fs::path(out_dir) / "graph.dot", dmx::export_dot(graph)) ||
        !write_file(fs::path(out_dir) / "graph.json", dmx::graph_to_json(graph))) {
      std::cerr << "dmx: cannot write outputs under " << out_dir << "\n";
      return kExitInput;
    }
    std::cout << graph.vertices.size() << " vertices, " << graph.edges.size()
              << " edges, " << graph.tuples.size() << " mediated tuples\n";
    return kExitOk;
  } catch (const dmx::Error& e) {
    std::cerr << "dmx: " << e.what() << "\n";
    return kExitCorruptLog;
  }
}

int cmd_audit(const std::string& events_path) {
  int exit_code = kExitOk;
  auto events = load_events(events_path, exit_code);
  if (!events.has_value()) return exit_code;
  try {
    dmx::Ledger ledger = dmx::Ledger::replay(*events);
    // One row per trade with an on-ledger resolution: settled trades, plus
    // trades whose complaint was upheld (flagged for the regulator).
    for (const dmx::LedgerEvent& e : *events) {
      if (e.kind != dmx::EventKind::AgreementRegistered) continue;
      const auto& reg = std::get<dmx::AgreementRegisteredPayload>(e.payload);
      const dmx::TradeState* t = ledger.trade(reg.trade);
      if (t == nullptr || (!t->settled && !t->refunded_by_complaint)) continue;
      std::string parties = "\"seller\":\"" + t->agreement.seller + "\"";
      if (t->agreement.mediator.has_value()) {
        parties += ",\"mediator\":\"" + *t->agreement.mediator + "\"";
      }
      parties += ",\"buyer\":\"" + t->agreement.buyer + "\"";
      std::cout << "{\"trade\":\"" << reg.trade << "\",\"parties\":{" << parties
                << "},\"price\":" << t->agreement.price << ",\"rho_digest\":\""
                << dmx::to_hex(t->agreement.rho_digest) << "\",\"rho_text\":\""
                << t->agreement.rho_text << "\",\"status\":\""
                << (t->refunded_by_complaint ? "complaint_upheld" : "settled")
                << "\",\"flagged\":" << (t->refunded_by_complaint ? "true" : "false")
                << "}\n";
    }
    return kExitOk;
  } catch (const dmx::Error& e) {
    std::cerr << "dmx: " << e.what() << "\n";
    return kExitCorruptLog;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"data-market protocol simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string events_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;

  CLI::App* run = app.add_subcommand("run", "run a scenario file");
  run->add_option("file", scenario_path, "scenario JSON")->required();
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--out", out_dir, "output directory");

  CLI::App* graph = app.add_subcommand("graph", "rebuild the trade graph from a log");
  graph->add_option("file", events_path, "events.jsonl")->required();
  graph->add_option("--out", out_dir, "output directory");

  CLI::App* audit = app.add_subcommand("audit", "list regulation digests of resolved trades");
  audit->add_option("file", events_path, "events.jsonl")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  if (run->parsed()) return cmd_run(scenario_path, seed, out_dir);
  if (graph->parsed()) return cmd_graph(events_path, out_dir);
  return cmd_audit(events_path);
}
