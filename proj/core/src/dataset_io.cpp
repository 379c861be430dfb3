#include "tskit/dataset_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tskit/error.hpp"

namespace tskit {
namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + p.string());
  return out;
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + p.string());
  return in;
}

// Shortest text that reads back to the same double.
std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

NodeId parse_node(const std::string& text, std::size_t n, const fs::path& file) {
  unsigned long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || v >= n) {
    throw Error(ErrorCode::MalformedDataset, "bad node id '" + text + "' in " + file.string());
  }
  return static_cast<NodeId>(v);
}

}  // namespace

void save_dataset(const GateGraph& graph, const fs::path& dir) {
  fs::create_directories(dir);
  const std::size_t n = graph.num_nodes();

  {
    auto out = open_out(dir / "adj.txt");
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v : graph.adjacency.neighbors(u)) {
        if (u < v) out << u << ' ' << v << '\n';
      }
    }
  }
  {
    auto out = open_out(dir / "feats.csv");
    out << "node_id";
    for (const auto& c : graph.schema.column_names()) out << ',' << c;
    out << '\n';
    for (NodeId u = 0; u < n; ++u) {
      out << u;
      for (Eigen::Index c = 0; c < graph.features.cols(); ++c) out << ',' << format_double(graph.features(u, c));
      out << '\n';
    }
  }
  {
    auto out = open_out(dir / "labels.txt");
    for (NodeId u = 0; u < n; ++u) out << u << ' ' << int(graph.labels[u]) << '\n';
  }
  {
    nlohmann::ordered_json roles;
    for (Role r : {Role::Train, Role::Validation, Role::Test}) roles[std::string(to_string(r))] = graph.nodes_with_role(r);
    open_out(dir / "roles.json") << roles.dump() << '\n';
  }
  {
    auto out = open_out(dir / "nodes.tsv");
    out << "node_id\tdesign\tinstance\n";
    for (NodeId u = 0; u < n; ++u) out << u << '\t' << graph.origin[u].design << '\t' << graph.origin[u].instance << '\n';
  }
  save_schema(graph.schema, dir / "schema.json");
}

GateGraph load_dataset(const fs::path& dir) {
  GateGraph g;
  g.schema = load_schema(dir / "schema.json");

  {
    auto in = open_in(dir / "nodes.tsv");
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = split(line, '\t');
      if (f.size() != 3 || f[0] != std::to_string(g.origin.size())) {
        throw Error(ErrorCode::MalformedDataset, "nodes.tsv: unexpected row '" + line + "'");
      }
      g.origin.push_back({f[1], f[2]});
    }
  }
  const std::size_t n = g.origin.size();

  {
    std::vector<std::vector<NodeId>> lists(n);
    auto in = open_in(dir / "adj.txt");
    std::string a, b;
    while (in >> a >> b) {
      const NodeId u = parse_node(a, n, dir / "adj.txt");
      const NodeId v = parse_node(b, n, dir / "adj.txt");
      if (u == v) throw Error(ErrorCode::MalformedDataset, "self-loop in adj.txt");
      lists[u].push_back(v);
      lists[v].push_back(u);
    }
    g.adjacency = Adjacency::from_lists(std::move(lists));
  }
  {
    const auto width = static_cast<Eigen::Index>(g.schema.width());
    g.features = FeatureMatrix::Zero(static_cast<Eigen::Index>(n), width);
    auto in = open_in(dir / "feats.csv");
    std::string line;
    std::getline(in, line);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = split(line, ',');
      if (static_cast<Eigen::Index>(f.size()) != width + 1) {
        throw Error(ErrorCode::MalformedDataset, "feats.csv: row width does not match schema");
      }
      const NodeId u = parse_node(f[0], n, dir / "feats.csv");
      for (Eigen::Index c = 0; c < width; ++c) {
        const auto& cell = f[static_cast<std::size_t>(c) + 1];
        double v = 0;
        const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (res.ec != std::errc{}) throw Error(ErrorCode::MalformedDataset, "feats.csv: bad value '" + cell + "'");
        g.features(u, c) = v;
      }
      ++rows;
    }
    if (rows != n) throw Error(ErrorCode::MalformedDataset, "feats.csv: row count mismatch");
  }
  {
    g.labels.assign(n, 0);
    auto in = open_in(dir / "labels.txt");
    std::string a;
    int label = 0;
    std::size_t rows = 0;
    while (in >> a >> label) {
      if (label != 0 && label != 1) throw Error(ErrorCode::MalformedDataset, "labels.txt: label must be 0/1");
      g.labels[parse_node(a, n, dir / "labels.txt")] = static_cast<std::uint8_t>(label);
      ++rows;
    }
    if (rows != n) throw Error(ErrorCode::MalformedDataset, "labels.txt: row count mismatch");
  }
  {
    g.roles.assign(n, Role::Train);
    std::vector<bool> assigned(n, false);
    auto in = open_in(dir / "roles.json");
    try {
      const auto j = nlohmann::json::parse(in);
      for (const auto& [key, ids] : j.items()) {
        const auto role = role_from_string(key);
        if (!role) throw Error(ErrorCode::MalformedDataset, "roles.json: unknown role '" + key + "'");
        for (const auto& id : ids) {
          const auto u = id.get<std::size_t>();
          if (u >= n || assigned[u]) {
            throw Error(ErrorCode::MalformedDataset, "roles.json: node " + std::to_string(u) + " invalid or repeated");
          }
          assigned[u] = true;
          g.roles[u] = *role;
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedDataset, std::string("roles.json: ") + e.what());
    }
    for (std::size_t u = 0; u < n; ++u) {
      if (!assigned[u]) throw Error(ErrorCode::MalformedDataset, "roles.json: node " + std::to_string(u) + " has no role");
    }
  }
  return g;
}

}  // namespace tskit
