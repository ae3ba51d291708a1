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

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "netcode/encoder.hpp"
#include "netcode/flow_graph.hpp"
#include "netcode/gf2.hpp"

namespace fixture {

inline std::string path(const std::string& rel) { return std::string(NETCODE_SOURCE_DIR) + "/" + rel; }

inline std::string read_file(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline netcode::FlowNetwork example(int k) { return netcode::load_network(path("networks/ex" + std::to_string(k) + ".net")); }

struct Compiled {
  netcode::FlowNetwork net;
  netcode::FlowStructure st;
  netcode::NetworkCode code;

  netcode::EdgeIndex edge(const std::string& id) const { return *net.find_edge(id); }
  std::size_t sink(const std::string& name) const { return *net.find_sink(name); }
  const std::vector<netcode::Gf2Rational>& global(const std::string& id) const { return code.globals[edge(id)]; }
};

inline Compiled compile(netcode::FlowNetwork net, netcode::EncoderOptions opts = {}) {
  Compiled c{std::move(net), {}, {}};
  c.st = netcode::validate(c.net);
  c.code = netcode::run(c.net, c.st, opts);
  return c;
}

inline Compiled compile_example(int k, netcode::EncoderOptions opts = {}) { return compile(example(k), opts); }

inline netcode::Gf2Rational rat(const std::string& s) { return netcode::Gf2Rational::parse(s); }

}  // namespace fixture
