// Copyright 2026 The netcode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// netcode: validate, compile, simulate and draw flow networks.
//
// Exit codes: 0 success, 1 coding or verification failure, 2 bad input,
// 3 a resource cap was hit.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "netcode/encoder.hpp"
#include "netcode/errors.hpp"
#include "netcode/flow_graph.hpp"
#include "netcode/mason.hpp"
#include "netcode/report.hpp"
#include "netcode/simulator.hpp"

namespace {

using namespace netcode;

struct Config {
  std::string input;
  bool no_shortcut = false;
  std::optional<int> exponent_cap;
  std::size_t cycle_cap = MasonLimits{}.cycle_cap;
  std::size_t path_cap = MasonLimits{}.path_cap;
  std::size_t term_cap = MasonLimits{}.term_cap;
  std::optional<std::uint64_t> order_seed;
  std::string format = "text";
  std::size_t horizon = 64;
  std::uint64_t seed = 1;
  std::string schedule;
  bool no_precode = false;
  std::string trace_csv;
  bool knots = false;
  std::string out_dir = ".";
  bool mason_debug = false;
};

void add_encoder_flags(CLI::App* cmd, Config& c) {
  cmd->add_flag("--no-shortcut", c.no_shortcut, "Edges leaving a flow cycle combine their predecessors normally");
  cmd->add_option("--exponent-cap", c.exponent_cap, "Bound on each artificial delay exponent (default |T(e)|)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--cycle-cap", c.cycle_cap, "Most cycles enumerated per knot line graph")->capture_default_str();
  cmd->add_option("--path-cap", c.path_cap, "Most forward paths enumerated per transfer function")
      ->capture_default_str();
  cmd->add_option("--term-cap", c.term_cap, "Most disjoint-cycle subsets per determinant")->capture_default_str();
  cmd->add_option("--order-seed", c.order_seed, "Break ties among eligible edges randomly with this seed");
}

struct Loaded {
  FlowNetwork net;
  FlowStructure st;
};

Loaded load(const Config& c) {
  Loaded l{load_network(c.input), {}};
  if (!l.net.has_flows()) {
    std::cerr << "note: " << c.input << " has no flow lines; computing flows by max-flow\n";
    const std::size_t h = l.net.h();
    l.net = compute_flows(std::move(l.net), h);
  }
  l.st = validate(l.net);
  for (const auto& w : l.st.warnings) std::cerr << "warning: " << w << "\n";
  return l;
}

EncoderOptions encoder_options(const Config& c) {
  EncoderOptions o;
  o.shortcut = !c.no_shortcut;
  o.exponent_cap = c.exponent_cap;
  o.mason = {c.cycle_cap, c.path_cap, c.term_cap};
  o.order_seed = c.order_seed;
  return o;
}

int cmd_validate(const Config& c) {
  auto l = load(c);
  const auto knots = find_knots(l.net, l.st);
  std::cout << l.net.name << ": " << l.net.nodes.size() << " nodes, " << l.net.edges.size() << " edges, h = "
            << l.net.h() << ", " << l.net.sinks.size() << " sinks\n";
  if (knots.empty()) std::cout << "flow acyclic\n";
  for (const auto& k : knots) {
    std::cout << to_string(k.kind) << " {";
    for (std::size_t i = 0; i < k.edges.size(); ++i) std::cout << (i ? "," : "") << l.net.edges[k.edges[i]].id;
    std::cout << "}\n";
  }
  std::cout << "ok\n";
  return 0;
}

int cmd_compile(const Config& c) {
  auto l = load(c);
  if (c.format == "dot") {
    std::cout << to_dot(l.net);
    return 0;
  }
  const auto opts = encoder_options(c);
  const auto code = run(l.net, l.st, opts);
  const auto report = make_report(l.net, code, opts.shortcut);
  std::cout << (c.format == "structured" ? render_json(report) : render_text(report));
  if (c.mason_debug)
    for (const auto& table : code.transfers) std::cout << "\n" << mason_debug_dump(l.net, table, opts.mason);
  return 0;
}

int cmd_simulate(const Config& c) {
  auto l = load(c);
  const auto code = run(l.net, l.st, encoder_options(c));
  const bool precode = !c.no_precode;
  const auto schedule = c.schedule.empty() ? SourceSchedule::random(code.h, c.horizon, c.seed)
                                           : SourceSchedule::load(c.schedule, code.h, c.horizon);
  const auto filtered = simulate_filtered(code, schedule, precode);
  const auto structural = simulate_structural(code, schedule, precode);
  int status = 0;
  std::cout << l.net.name << ": horizon " << c.horizon << ", precode " << (precode ? code.precode.to_string() : "off")
            << "\n";
  if (auto d = first_divergence(filtered, structural)) {
    std::cout << "simulators diverge at edge " << l.net.edges[d->edge].id << ", time " << d->time << "\n";
    status = 1;
  } else {
    std::cout << "filtered and structural traces agree\n";
  }
  std::cout << "node memory: " << structural.memory.registers << " registers, " << structural.memory.feedback_registers
            << " with feedback, " << structural.memory.state_bits << " state bits\n";
  for (const auto& r : decode_at_sinks(code, l.net, structural, schedule, precode)) {
    std::cout << r.sink << ": delay " << r.delay << (r.ok ? " PASS" : " FAIL");
    if (r.first_bad_generation) std::cout << " (generation " << *r.first_bad_generation << " wrong)";
    if (r.realized && *r.realized != r.delay) std::cout << " (measured " << *r.realized << ")";
    std::cout << "; " << r.memory.registers << " registers, " << r.memory.feedback_registers << " with feedback\n";
    if (!r.ok) status = 1;
  }
  if (!c.trace_csv.empty()) {
    std::ofstream out(c.trace_csv);
    if (!out) throw InputError("cannot write " + c.trace_csv);
    out << trace_csv(structural, l.net);
  }
  return status;
}

int cmd_flows(const Config& c) {
  auto net = load_network(c.input);
  std::mt19937_64 rng(c.order_seed.value_or(0));
  const std::size_t h = net.h();
  net = compute_flows(std::move(net), h, c.order_seed ? &rng : nullptr);
  validate(net);
  std::cout << write_network(net);
  return 0;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw InputError("cannot write " + p.string());
  out << text;
  std::cout << p.string() << "\n";
}

int cmd_dot(const Config& c) {
  auto l = load(c);
  if (!c.knots) {
    std::cout << to_dot(l.net);
    return 0;
  }
  const std::filesystem::path dir(c.out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / (l.net.name + ".dot"), to_dot(l.net));
  const auto knots = find_knots(l.net, l.st);
  if (knots.empty()) std::cout << "no knots\n";
  for (std::size_t k = 0; k < knots.size(); ++k) {
    const auto line = build_line_graph(knots[k], l.st);
    const std::string stem = l.net.name + "_knot" + std::to_string(k + 1);
    write_file(dir / (stem + ".dot"), to_dot(line, l.net, stem));
    for (EdgeIndex p : knots[k].predecessors) {
      const std::string name = stem + "_" + l.net.edges[p].id;
      write_file(dir / (name + ".dot"), to_dot(prune_for_symbol(line, knots[k], p, l.net), l.net, name));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binary network codes with delays for cyclic and acyclic networks"};
  app.require_subcommand(1);
  Config c;

  auto* v = app.add_subcommand("validate", "Check a network file and its flows");
  v->add_option("input", c.input, "Network file")->required();

  auto* comp = app.add_subcommand("compile", "Synthesize the code and print equations, matrices and delays");
  comp->add_option("input", c.input, "Network file")->required();
  add_encoder_flags(comp, c);
  comp->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"text", "structured", "dot"}))
      ->capture_default_str();
  comp->add_flag("--mason-debug", c.mason_debug, "Append the Mason decomposition of every transfer function");

  auto* sim = app.add_subcommand("simulate", "Run both simulators and decode at every sink");
  sim->add_option("input", c.input, "Network file")->required();
  add_encoder_flags(sim, c);
  sim->add_option("--horizon", c.horizon, "Last simulated clock")->capture_default_str();
  sim->add_option("--seed", c.seed, "Seed for the random source streams")->capture_default_str();
  sim->add_option("--schedule", c.schedule, "File with one generation of h bits per line")
      ->check(CLI::ExistingFile);
  sim->add_flag("--no-precode", c.no_precode, "Send the raw source symbols");
  sim->add_option("--trace-csv", c.trace_csv, "Write every edge stream as time,edge,bit");

  auto* fl = app.add_subcommand("flows", "Compute edge-disjoint flows by max-flow and print the network");
  fl->add_option("input", c.input, "Network file")->required();
  fl->add_option("--order-seed", c.order_seed, "Randomize the augmenting path order with this seed");

  auto* dot = app.add_subcommand("dot", "Draw the network, and with --knots every knot line graph");
  dot->add_option("input", c.input, "Network file")->required();
  dot->add_flag("--knots", c.knots, "Also write the line graph of each knot and its per-symbol pruned variants");
  dot->add_option("--out-dir", c.out_dir, "Directory for --knots output")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*v) return cmd_validate(c);
    if (*comp) return cmd_compile(c);
    if (*sim) return cmd_simulate(c);
    if (*fl) return cmd_flows(c);
    if (*dot) return cmd_dot(c);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
