#include "tskit/metrics.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "tskit/error.hpp"

namespace tskit {

namespace {

void tally(ConfusionCounts& c, bool decision, std::uint8_t label) {
  if (label != 0) {
    decision ? ++c.tp : ++c.fn;
  } else {
    decision ? ++c.fp : ++c.tn;
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  // Design and instance names come from Verilog identifiers, which may carry
  // commas once escaped; such fields are double-quoted.
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::optional<double> Metrics::balanced() const {
  if (tpr && tnr) return (*tpr + *tnr) / 2.0;
  if (tpr) return tpr;
  return tnr;
}

Metrics metrics_from_counts(const ConfusionCounts& counts) {
  Metrics m;
  m.counts = counts;
  if (counts.tp + counts.fn > 0) m.tpr = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fn);
  if (counts.tn + counts.fp > 0) m.tnr = static_cast<double>(counts.tn) / static_cast<double>(counts.tn + counts.fp);
  return m;
}

Metrics compute_metrics(std::span<const Prediction> predictions, std::span<const std::uint8_t> labels) {
  ConfusionCounts c;
  for (const auto& p : predictions) {
    if (p.node >= labels.size()) {
      throw Error(ErrorCode::MissingLabel, "no label for node " + std::to_string(p.node) + " (" + p.instance + ")");
    }
    tally(c, p.decision, labels[p.node]);
  }
  return metrics_from_counts(c);
}

Metrics compute_metrics(const std::vector<bool>& decisions, std::span<const std::uint8_t> labels) {
  if (decisions.size() != labels.size()) {
    throw Error(ErrorCode::MissingLabel, std::to_string(decisions.size()) + " decisions but " +
                                             std::to_string(labels.size()) + " labels");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < decisions.size(); ++i) tally(c, decisions[i], labels[i]);
  return metrics_from_counts(c);
}

void write_predictions_csv(std::ostream& out, std::span<const Prediction> predictions) {
  out << "node_id,design,instance,p_ht,decision\n";
  for (const auto& p : predictions) {
    out << p.node << ',' << csv_field(p.design) << ',' << csv_field(p.instance) << ',' << format_double(p.p_trojan)
        << ',' << (p.decision ? 1 : 0) << '\n';
  }
}

void save_predictions_csv(const std::filesystem::path& path, std::span<const Prediction> predictions) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  write_predictions_csv(out, predictions);
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

std::vector<Prediction> read_predictions_csv(std::istream& in) {
  std::vector<Prediction> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      if (line != "node_id,design,instance,p_ht,decision") {
        throw Error(ErrorCode::MalformedDataset, "unexpected predictions header '" + line + "'", lineno);
      }
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 5) throw Error(ErrorCode::MalformedDataset, "predictions row needs 5 fields", lineno);
    Prediction p;
    auto bad = [&](const std::string& what) {
      return Error(ErrorCode::MalformedDataset, "bad " + what + " in predictions", lineno);
    };
    auto parse = [](const std::string& field, auto& value) {
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      return ec == std::errc{} && ptr == field.data() + field.size() && !field.empty();
    };
    if (!parse(f[0], p.node)) throw bad("node_id");
    p.design = f[1];
    p.instance = f[2];
    if (!parse(f[3], p.p_trojan)) throw bad("p_ht");
    if (f[4] != "0" && f[4] != "1") throw bad("decision");
    p.decision = f[4] == "1";
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Prediction> load_predictions_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  return read_predictions_csv(in);
}

}  // namespace tskit
