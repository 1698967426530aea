#include "subquad/graph_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace subquad {

using nlohmann::json;

std::string write_graph_text(const Graph& g) {
  std::ostringstream out;
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
  return out.str();
}

std::string write_graph_json(const Graph& g) {
  json j;
  j["n"] = g.vertex_count();
  auto& e = j["edges"] = json::array();
  for (const auto& [u, v] : g.edges()) e.push_back({u, v});
  if (g.has_coords()) {
    auto& c = j["coords"] = json::array();
    for (const auto& xy : g.coords()) c.push_back({xy[0], xy[1]});
  }
  return j.dump(2) + "\n";
}

static Graph read_graph_json(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("bad graph json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    throw ArgumentError("graph json needs \"n\" and \"edges\"");
  int n = 0;
  std::vector<Edge> edges;
  std::optional<std::vector<Coord>> coords;
  try {
    n = j.at("n").get<int>();
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ArgumentError("each edge must be a pair");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    if (j.contains("coords")) {
      coords.emplace();
      for (const auto& c : j.at("coords")) {
        if (!c.is_array() || c.size() != 2) throw ArgumentError("each coord must be a pair");
        coords->push_back({c[0].get<int>(), c[1].get<int>()});
      }
    }
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("bad graph json: ") + e.what());
  }
  return Graph::from_edges(n, edges, std::move(coords));
}

static Graph read_graph_text(std::istream& in) {
  long long n = -1, m = -1;
  if (!(in >> n >> m)) throw ArgumentError("graph text must start with \"n m\"");
  if (n < 0 || m < 0) throw ArgumentError("negative counts in graph header");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    int u, v;
    if (!(in >> u >> v))
      throw ArgumentError("expected " + std::to_string(m) + " edges, got " + std::to_string(i));
    edges.emplace_back(u, v);
  }
  return Graph::from_edges(static_cast<int>(n), edges);
}

Graph read_graph(std::istream& in) {
  // Auto-detect: json starts with '{' after whitespace.
  int c = in.peek();
  while (c == ' ' || c == '\n' || c == '\t' || c == '\r') {
    in.get();
    c = in.peek();
  }
  if (c == '{') return read_graph_json(in);
  return read_graph_text(in);
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open graph file: " + path);
  return read_graph(in);
}

void write_graph_file(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write graph file: " + path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    out << write_graph_json(g);
  else
    out << write_graph_text(g);
}

}  // namespace subquad
