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

// Writes networks/ex5.net to stdout.
//
// The network has threefold rotational symmetry around node 7.  Only the
// flows into t1 are spelled out; the rotation 1->3->5, 2->4->6, e_k ->
// e_{k+4}, A->E->C, B->F->D, t1->t2->t3 produces the rest.

#include <array>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "netcode/flow_graph.hpp"

namespace {

struct Spec {
  std::string id, from, to;
};

std::string rotate_node(const std::string& n, int times) {
  static const std::map<std::string, std::string> step{
      {"1", "3"}, {"3", "5"}, {"5", "1"}, {"2", "4"}, {"4", "6"}, {"6", "2"}, {"7", "7"},
      {"A", "E"}, {"E", "C"}, {"C", "A"}, {"B", "F"}, {"F", "D"}, {"D", "B"},
      {"t1", "t2"}, {"t2", "t3"}, {"t3", "t1"}};
  std::string out = n;
  for (int i = 0; i < times; ++i) out = step.at(out);
  return out;
}

std::string rotate_edge(const std::string& id, int times) {
  if (id[0] == 'e' && std::isdigit(static_cast<unsigned char>(id[1]))) {
    int k = std::stoi(id.substr(1));
    return "e" + std::to_string((k - 1 + 4 * times) % 12 + 1);
  }
  static const std::map<std::string, std::string> entry{{"alpha", "epsilon"}, {"epsilon", "gamma"},
                                                        {"gamma", "alpha"},   {"beta", "phi"},
                                                        {"phi", "delta"},     {"delta", "beta"}};
  std::string out = id;
  for (int i = 0; i < times; ++i) out = entry.at(out);
  return out;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

int main() {
  netcode::FlowNetwork net;
  net.name = "ex5";
  for (const char* n : {"A", "B", "C", "D", "E", "F", "1", "2", "3", "4", "5", "6", "7", "t1", "t2", "t3"})
    net.add_node(n);
  auto node = [&](const std::string& n) { return *net.find_node(n); };

  // Knot: e1..e4 drawn for the sector around nodes 1, 2, 3; the rest by rotation.
  const std::array<Spec, 4> knot{{{"e1", "1", "2"}, {"e2", "2", "7"}, {"e3", "3", "2"}, {"e4", "7", "3"}}};
  std::map<int, Spec> knot_edges;
  for (int r = 0; r < 3; ++r)
    for (const auto& s : knot) {
      Spec rs{rotate_edge(s.id, r), rotate_node(s.from, r), rotate_node(s.to, r)};
      knot_edges[std::stoi(rs.id.substr(1))] = rs;
    }
  for (const auto& [k, s] : knot_edges) net.add_edge(s.id, node(s.from), node(s.to));

  const std::array<Spec, 2> entries{{{"alpha", "A", "1"}, {"beta", "B", "1"}}};
  for (int r = 0; r < 3; ++r)
    for (const auto& s : entries) net.add_edge(rotate_edge(s.id, r), node(rotate_node(s.from, r)), node(rotate_node(s.to, r)));

  // Flows into t1: a and b cross the knot and leave from node 4.
  struct Route {
    std::string source;
    std::vector<std::string> knot_part;  // entry edge first
    std::string exit_from;
  };
  const std::array<Route, 2> routes{{{"A", {"alpha", "e1", "e2", "e4", "e5"}, "4"},
                                     {"B", {"beta", "e11", "e10", "e8", "e7"}, "4"}}};
  const std::array<std::string, 4> direct{"C", "D", "E", "F"};

  for (const char* s : {"A", "B", "C", "D", "E", "F"}) net.add_source(node(s), lower(s));
  for (const char* t : {"t1", "t2", "t3"}) net.add_sink(node(t), t);

  for (int r = 0; r < 3; ++r) {
    const std::string t = rotate_node("t1", r);
    for (const auto& route : routes) {
      const std::string src = rotate_node(route.source, r);
      std::vector<netcode::EdgeIndex> path;
      for (const auto& id : route.knot_part) path.push_back(*net.find_edge(rotate_edge(id, r)));
      path.push_back(net.add_edge("out_" + t + "_" + lower(src), node(rotate_node(route.exit_from, r)), node(t)));
      net.set_path(*net.find_sink(t), *net.find_source(lower(src)), path);
    }
    for (const auto& d : direct) {
      const std::string src = rotate_node(d, r);
      auto e = net.add_edge("dir_" + t + "_" + lower(src), node(src), node(t));
      net.set_path(*net.find_sink(t), *net.find_source(lower(src)), {e});
    }
  }

  netcode::validate(net);
  std::cout << "# Generated by make_ex5; do not edit.  Six sources around a twelve-edge\n"
               "# knot centred on node 7, with threefold rotational symmetry.\n"
            << netcode::write_network(net);
  return 0;
}
