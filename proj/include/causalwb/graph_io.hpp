#ifndef CAUSALWB_GRAPH_IO_HPP
#define CAUSALWB_GRAPH_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "causalwb/graph.hpp"

namespace causalwb {

// Text format, one edge per line:
//
//   nodes: A,B,C,D
//   A --> B
//   A --- C
//   C <-> D
//   B o-> D
//   A o-o D
//
// Lines starting with '#' are comments. The `nodes:` header fixes node order
// and declares isolated nodes; undeclared nodes are appended as they appear.

MixedGraph parse_graph(std::string_view text);
MixedGraph read_graph_file(const std::filesystem::path& path);

/// Canonical form: header with every node, then edges by (min index, max index).
/// `comments` are emitted verbatim after the edges, each prefixed with "# ".
std::string format_graph(const MixedGraph& g, const std::vector<std::string>& comments = {});
void write_graph_file(const MixedGraph& g, const std::filesystem::path& path,
                      const std::vector<std::string>& comments = {});

/// "A --> B" style rendering of a single edge.
std::string format_edge(const MixedGraph& g, const Edge& e);

}  // namespace causalwb

#endif  // CAUSALWB_GRAPH_IO_HPP
