#include "urllc/reduction.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace urllc {

void UndirectedGraph::validate() const {
  if (vertices < 0) throw std::invalid_argument("UndirectedGraph: negative vertex count");
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= vertices || v < 0 || v >= vertices)
      throw std::invalid_argument("UndirectedGraph: edge endpoint out of range");
    if (u == v) throw std::invalid_argument("UndirectedGraph: self-loop");
  }
}

std::vector<int> UndirectedGraph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(vertices), 0);
  for (const auto& [u, v] : edges) {
    ++deg[static_cast<std::size_t>(u)];
    ++deg[static_cast<std::size_t>(v)];
  }
  return deg;
}

UndirectedGraph read_edge_list(std::istream& in) {
  UndirectedGraph g;
  std::string line;
  bool have_count = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    if (!have_count) {
      if (!(ls >> g.vertices)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        throw std::invalid_argument("edge list: first line must be the vertex count");
      }
      have_count = true;
      continue;
    }
    int u, v;
    if (!(ls >> u)) continue;
    if (!(ls >> v)) throw std::invalid_argument("edge list: expected \"u v\" per line");
    g.edges.emplace_back(u, v);
  }
  if (!have_count) throw std::invalid_argument("edge list: empty input");
  g.validate();
  return g;
}

UndirectedGraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("edge list: cannot open " + path);
  return read_edge_list(in);
}

BinaryInstance graph_to_urllc(const UndirectedGraph& graph) {
  graph.validate();
  if (graph.vertices < 1 || graph.edges.empty())
    throw std::invalid_argument("graph_to_urllc: need at least one vertex and one edge");

  BinaryInstance instance;
  instance.activity =
      Eigen::MatrixXi::Zero(graph.vertices, static_cast<int>(graph.edges.size()));
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    instance.activity(graph.edges[e].first, static_cast<int>(e)) = 1;
    instance.activity(graph.edges[e].second, static_cast<int>(e)) = 1;
  }
  const std::vector<int> deg = graph.degrees();
  instance.demand.resize(graph.vertices);
  for (int v = 0; v < graph.vertices; ++v)
    instance.demand(v) = deg[static_cast<std::size_t>(v)];
  instance.utility = Eigen::VectorXd::Ones(graph.vertices);
  instance.validate();
  return instance;
}

bool is_independent_set(const UndirectedGraph& graph, const std::vector<int>& vertices) {
  graph.validate();
  std::vector<bool> in_set(static_cast<std::size_t>(graph.vertices), false);
  for (int v : vertices) {
    if (v < 0 || v >= graph.vertices)
      throw std::invalid_argument("is_independent_set: vertex out of range");
    in_set[static_cast<std::size_t>(v)] = true;
  }
  for (const auto& [u, v] : graph.edges)
    if (in_set[static_cast<std::size_t>(u)] && in_set[static_cast<std::size_t>(v)]) return false;
  return true;
}

int independent_set_brute_force(const UndirectedGraph& graph) {
  graph.validate();
  if (graph.vertices > 20)
    throw std::invalid_argument("independent_set_brute_force: more than 20 vertices");
  int best = 0;
  for (std::uint32_t mask = 0; mask < (1u << graph.vertices); ++mask) {
    bool independent = true;
    for (const auto& [u, v] : graph.edges) {
      if ((mask >> u & 1u) && (mask >> v & 1u)) {
        independent = false;
        break;
      }
    }
    if (independent) best = std::max(best, std::popcount(mask));
  }
  return best;
}

}  // namespace urllc
