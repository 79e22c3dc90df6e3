#include "poolsim/geo/road_network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

namespace poolsim::geo {

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream ss(body);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

template <typename Int>
Int parse_int(const std::string& s, std::size_t line, const char* what) {
  Int v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ParseError(line, std::string("bad ") + what + " '" + s + "'");
  return v;
}

double parse_real(const std::string& s, std::size_t line, const char* what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError(line, std::string("bad ") + what + " '" + s + "'");
  }
  if (used != s.size()) throw ParseError(line, std::string("bad ") + what + " '" + s + "'");
  return v;
}

Millimeters length_to_mm(double meters) {
  const double mm = std::round(meters * 1000.0);
  return mm < 1.0 ? 1 : static_cast<Millimeters>(mm);
}

}  // namespace

RoadNetwork::RoadNetwork(std::vector<LatLon> coords, std::vector<Edge> edges)
    : coords_(std::move(coords)), edges_(std::move(edges)) {
  for (const Edge& e : edges_) {
    if (e.from >= coords_.size())
      throw ValidationError("edge endpoint references undeclared node " + std::to_string(e.from));
    if (e.to >= coords_.size())
      throw ValidationError("edge endpoint references undeclared node " + std::to_string(e.to));
    if (e.length == 0 || e.length == kUnreachable)
      throw ValidationError("edge " + std::to_string(e.from) + "->" + std::to_string(e.to) +
                            " has non-positive length");
  }
  graph_ = Digraph(coords_.size(), edges_);
}

WalkingNetwork::WalkingNetwork(std::size_t node_count, std::vector<Edge> symmetric_edges)
    : edges_(std::move(symmetric_edges)), graph_(node_count, edges_) {}

RoadNetwork load_network(std::istream& in) {
  std::optional<std::size_t> n_decl, m_decl;
  std::map<NodeId, LatLon> nodes;
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_lines;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tok = tokens_of(line);
    if (tok.empty()) continue;
    if (tok[0] == "nodes") {
      if (tok.size() != 4 || tok[2] != "edges") throw ParseError(lineno, "expected 'nodes <n> edges <m>'");
      if (n_decl) throw ParseError(lineno, "duplicate header");
      n_decl = parse_int<std::size_t>(tok[1], lineno, "node count");
      m_decl = parse_int<std::size_t>(tok[3], lineno, "edge count");
    } else if (tok[0] == "node") {
      if (tok.size() != 4) throw ParseError(lineno, "expected 'node <id> <lat> <lon>'");
      const auto id = parse_int<NodeId>(tok[1], lineno, "node id");
      LatLon p{parse_real(tok[2], lineno, "latitude"), parse_real(tok[3], lineno, "longitude")};
      if (!(p.lat >= -90 && p.lat <= 90 && p.lon >= -180 && p.lon <= 180))
        throw ParseError(lineno, "coordinate out of range");
      if (!nodes.emplace(id, p).second) throw ParseError(lineno, "duplicate node " + std::to_string(id));
    } else if (tok[0] == "edge") {
      if (tok.size() != 4) throw ParseError(lineno, "expected 'edge <from> <to> <length_m>'");
      const auto from = parse_int<NodeId>(tok[1], lineno, "edge endpoint");
      const auto to = parse_int<NodeId>(tok[2], lineno, "edge endpoint");
      const double len = parse_real(tok[3], lineno, "edge length");
      if (!std::isfinite(len) || len <= 0)
        throw ValidationError("line " + std::to_string(lineno) + ": edge " + std::to_string(from) + "->" +
                              std::to_string(to) + " has non-positive length");
      edges.push_back(Edge{from, to, length_to_mm(len)});
      edge_lines.push_back(lineno);
    } else {
      throw ParseError(lineno, "unknown record '" + tok[0] + "'");
    }
  }
  if (!n_decl) throw ParseError(lineno, "missing 'nodes <n> edges <m>' header");
  if (nodes.size() != *n_decl)
    throw ValidationError("header declares " + std::to_string(*n_decl) + " nodes, found " +
                          std::to_string(nodes.size()));
  if (edges.size() != *m_decl)
    throw ValidationError("header declares " + std::to_string(*m_decl) + " edges, found " +
                          std::to_string(edges.size()));
  std::vector<LatLon> coords;
  coords.reserve(nodes.size());
  NodeId expect = 0;
  for (const auto& [id, p] : nodes) {
    if (id != expect) throw ValidationError("node ids are not dense: missing node " + std::to_string(expect));
    coords.push_back(p);
    ++expect;
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (NodeId end : {edges[i].from, edges[i].to})
      if (end >= coords.size())
        throw ValidationError("line " + std::to_string(edge_lines[i]) + ": edge references undeclared node " +
                              std::to_string(end));
  }
  return RoadNetwork(std::move(coords), std::move(edges));
}

RoadNetwork load_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open network file " + path);
  return load_network(in);
}

void write_network(std::ostream& out, const RoadNetwork& rn) {
  out << "nodes " << rn.node_count() << " edges " << rn.edge_count() << "\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < rn.node_count(); ++i)
    out << "node " << i << ' ' << rn.coords()[i].lat << ' ' << rn.coords()[i].lon << "\n";
  for (const Edge& e : rn.edges()) {
    out << "edge " << e.from << ' ' << e.to << ' ' << e.length / 1000 << '.' << std::setw(3)
        << std::setfill('0') << e.length % 1000 << std::setfill(' ') << "\n";
  }
}

WalkingNetwork derive_walking_network(const RoadNetwork& rn) {
  std::map<std::pair<NodeId, NodeId>, Millimeters> best;
  for (const Edge& e : rn.edges()) {
    if (e.from == e.to) continue;
    auto key = std::minmax(e.from, e.to);
    auto [it, fresh] = best.emplace(std::pair{key.first, key.second}, e.length);
    if (!fresh) it->second = std::min(it->second, e.length);
  }
  std::vector<Edge> sym;
  sym.reserve(best.size() * 2);
  for (const auto& [k, len] : best) {
    sym.push_back(Edge{k.first, k.second, len});
    sym.push_back(Edge{k.second, k.first, len});
  }
  std::sort(sym.begin(), sym.end(), [](const Edge& a, const Edge& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  return WalkingNetwork(rn.node_count(), std::move(sym));
}

NodeId snap_to_node(const LatLon& p, const RoadNetwork& rn) {
  if (rn.node_count() == 0) throw std::invalid_argument("cannot snap to an empty network");
  NodeId best = 0;
  double best_d = haversine(p, rn.coords()[0]);
  for (NodeId v = 1; v < rn.node_count(); ++v) {
    const double d = haversine(p, rn.coords()[v]);
    if (d < best_d) {
      best_d = d;
      best = v;
    }
  }
  return best;
}

}  // namespace poolsim::geo
