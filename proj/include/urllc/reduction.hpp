#pragma once

#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "urllc/types.hpp"

namespace urllc {

struct UndirectedGraph {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;

  void validate() const;
  std::vector<int> degrees() const;
};

/// Edge-list text format: first line is the vertex count, each further
/// non-empty line one "u v" pair (0-based).
UndirectedGraph read_edge_list(std::istream& in);
UndirectedGraph read_edge_list_file(const std::string& path);

/// Independent-set instance: users are vertices, blocks are edges, a user is
/// active exactly on its incident edges and demands its degree, utilities
/// are all one. A vertex subset is schedulable here iff it is independent;
/// isolated vertices have zero demand and are always admissible.
BinaryInstance graph_to_urllc(const UndirectedGraph& graph);

bool is_independent_set(const UndirectedGraph& graph, const std::vector<int>& vertices);

/// Exhaustive maximum independent set size; capped at 20 vertices.
int independent_set_brute_force(const UndirectedGraph& graph);

}  // namespace urllc
