// Graph serialization. Two interchangeable formats:
//   text: "n m" header line, then one "u v" line per edge
//   json: {"n": int, "edges": [[u,v], ...], "coords": [[x,y], ...]}  (coords optional)
// The text format cannot carry an embedding. Readers auto-detect the format.
#pragma once

#include <iosfwd>
#include <string>

#include "subquad/graph.hpp"

namespace subquad {

std::string write_graph_text(const Graph& g);
std::string write_graph_json(const Graph& g);

Graph read_graph(std::istream& in);
Graph read_graph_file(const std::string& path);
void write_graph_file(const Graph& g, const std::string& path);  // .json => json, else text

}  // namespace subquad
