#include "tskit/synth.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "tskit/error.hpp"
#include "tskit/random.hpp"

namespace tskit {

namespace {

struct LibCell {
  const char* type;
  const char* family;
  const char* out;
  std::vector<const char*> ins;
};

const std::vector<LibCell>& library() {
  static const std::vector<LibCell> cells = {
      {"AND2X1", "AND", "Y", {"A", "B"}},
      {"AND4X1", "AND", "Y", {"A", "B", "C", "D"}},
      {"NAND2X1", "NAND", "Y", {"A", "B"}},
      {"OR2X1", "OR", "Y", {"A", "B"}},
      {"NOR2X1", "NOR", "Y", {"A", "B"}},
      {"XOR2X1", "XOR", "Y", {"A", "B"}},
      {"XNOR2X1", "XNOR", "Y", {"A", "B"}},
      {"INVX1", "INV", "Y", {"A"}},
      {"BUFX2", "BUF", "Y", {"A"}},
      {"MUX2X1", "MUX", "Y", {"A", "B", "S"}},
      {"DFFX1", "DFF", "Q", {"D", "CLK"}},
      {"AOI22X1", "AOI", "Y", {"A0", "A1", "B0", "B1"}},
      {"OAI21X1", "OAI", "Y", {"A0", "A1", "B0"}},
  };
  return cells;
}

const LibCell& cell(std::string_view type) {
  for (const auto& c : library()) {
    if (type == c.type) return c;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown synthetic cell " + std::string(type));
}

// Benign mix with relative weights; XNOR2 and AND4 are reserved for the Trojan.
const std::vector<std::pair<const char*, unsigned>>& benign_mix() {
  static const std::vector<std::pair<const char*, unsigned>> mix = {
      {"AND2X1", 12}, {"NAND2X1", 14}, {"OR2X1", 10}, {"NOR2X1", 10}, {"XOR2X1", 5}, {"INVX1", 14},
      {"BUFX2", 5},   {"MUX2X1", 6},   {"DFFX1", 10}, {"AOI22X1", 7}, {"OAI21X1", 7},
  };
  return mix;
}

constexpr int kConstOne = -1;

struct Gate {
  std::string type;
  std::string instance;
  std::vector<int> inputs;  // net ids, or kConstOne
  int output = 0;
  bool trojan = false;
  bool attribute = false;
};

class Generator {
 public:
  explicit Generator(const SynthOptions& o) : o_(o), rng_(derive_seed(o.seed, 0x5e)) {}

  SynthDesign run() {
    if (o_.trigger_width != 0 && (o_.trigger_width < 4 || o_.trigger_width > 10)) {
      throw Error(ErrorCode::InvalidConfig, "trigger_width must be 0 or in [4, 10]");
    }
    num_pi_ = 8 + o_.benign_gates / 40;
    num_po_ = 4 + o_.benign_gates / 50;
    clk_ = static_cast<int>(num_pi_);
    next_net_ = clk_ + 1;
    for (int i = 0; i < clk_; ++i) pool_.push_back(i);

    for (std::size_t i = 0; i < o_.benign_gates; ++i) add_benign(i);
    choose_outputs();
    if (o_.trigger_width) plant_trojan();
    if (o_.extras) add_extras();
    return render();
  }

 private:
  int pick_net() {
    // Mostly recent nets, so logic grows in depth rather than fanning out
    // from the inputs only.
    const std::size_t n = pool_.size();
    if (n > 24 && uniform_unit(rng_) < 0.7) return pool_[n - 1 - uniform_index(rng_, 24)];
    return pool_[uniform_index(rng_, n)];
  }

  std::string pick_benign_type() {
    unsigned total = 0;
    for (const auto& [t, w] : benign_mix()) total += w;
    auto r = static_cast<unsigned>(uniform_index(rng_, total));
    for (const auto& [t, w] : benign_mix()) {
      if (r < w) return t;
      r -= w;
    }
    return benign_mix().back().first;
  }

  void add_benign(std::size_t i) {
    Gate g;
    g.type = pick_benign_type();
    g.instance = "U" + std::to_string(i + 1);
    const LibCell& c = cell(g.type);
    std::set<int> used;
    for (const char* pin : c.ins) {
      if (std::string_view(pin) == "CLK") {
        g.inputs.push_back(clk_);
        continue;
      }
      int net = pick_net();
      for (int tries = 0; tries < 4 && used.count(net); ++tries) net = pick_net();
      used.insert(net);
      g.inputs.push_back(net);
    }
    g.output = next_net_++;
    pool_.push_back(g.output);
    gates_.push_back(std::move(g));
  }

  void choose_outputs() {
    // The last gates' outputs leave the module.
    for (std::size_t k = 0; k < num_po_ && k < gates_.size(); ++k) {
      po_nets_.push_back(gates_[gates_.size() - 1 - k].output);
    }
    std::reverse(po_nets_.begin(), po_nets_.end());
  }

  void plant_trojan() {
    std::vector<Gate> trojan;
    std::vector<int> level;
    for (std::size_t k = 0; k < o_.trigger_width; ++k) {
      Gate g;
      g.type = "XNOR2X1";
      g.instance = "Trojan_cmp" + std::to_string(k);
      const int a = pool_[uniform_index(rng_, pool_.size())];
      int b = pool_[uniform_index(rng_, pool_.size())];
      while (b == a) b = pool_[uniform_index(rng_, pool_.size())];
      g.inputs = {a, b};
      g.output = next_net_++;
      level.push_back(g.output);
      trojan.push_back(std::move(g));
    }
    std::size_t tree = 0;
    while (level.size() > 1) {
      std::vector<int> next;
      for (std::size_t i = 0; i < level.size(); i += 4) {
        Gate g;
        g.type = "AND4X1";
        g.instance = "Trojan_and" + std::to_string(tree++);
        for (std::size_t j = 0; j < 4; ++j) g.inputs.push_back(level[std::min(i + j, level.size() - 1)]);
        g.output = next_net_++;
        next.push_back(g.output);
        trojan.push_back(std::move(g));
      }
      level = std::move(next);
    }
    // Payload: XNOR of the victim output with the trigger replaces the
    // output the victim used to drive.
    const std::size_t slot = uniform_index(rng_, po_nets_.size());
    Gate payload;
    payload.type = "XNOR2X1";
    payload.instance = "Trojan_payload";
    payload.inputs = {po_nets_[slot], level.front()};
    payload.output = next_net_++;
    po_nets_[slot] = payload.output;
    trojan.push_back(std::move(payload));

    for (auto& g : trojan) {
      g.trojan = true;
      const std::size_t at = uniform_index(rng_, gates_.size() + 1);
      gates_.insert(gates_.begin() + static_cast<std::ptrdiff_t>(at), std::move(g));
    }
  }

  void add_extras() {
    // One gate reads an alias of an internal net, a MUX select is tied high
    // and one instance carries an attribute.
    alias_of_ = gates_[gates_.size() / 3].output;
    alias_id_ = next_net_++;
    for (auto& g : gates_) {
      if (!g.trojan && g.type == "INVX1" && &g > &gates_[gates_.size() / 2]) {
        g.inputs[0] = alias_id_;
        break;
      }
    }
    for (auto& g : gates_) {
      if (!g.trojan && g.type == "MUX2X1") {
        g.inputs[2] = kConstOne;
        break;
      }
    }
    gates_[gates_.size() / 4].attribute = true;
  }

  bool escaped() const { return o_.style == SynthStyle::Escaped; }

  std::string net_name(int id) const {
    if (id == kConstOne) return "1'b1";
    const bool bus = o_.style == SynthStyle::Bus;
    if (id == clk_) return "clk";
    if (id < clk_) return bus ? "pi[" + std::to_string(id) + "]" : "in" + std::to_string(id);
    for (std::size_t k = 0; k < po_nets_.size(); ++k) {
      if (po_nets_[k] == id) return bus ? "po[" + std::to_string(k) + "]" : "out" + std::to_string(k);
    }
    if (o_.extras && id == alias_id_) return "alias_n";
    const int internal = id - clk_ - 1;
    if (bus) return "w[" + std::to_string(internal) + "]";
    if (escaped()) return "n" + std::to_string(internal) + ".x";
    return "n" + std::to_string(internal);
  }

  // Spelling in source: escaped identifiers get a backslash and a
  // terminating space.
  std::string spell(const std::string& name) const {
    if (name.find_first_of(".$") != std::string::npos) return "\\" + name + " ";
    return name;
  }

  std::string instance_name(const Gate& g) const {
    if (escaped()) return g.trojan ? g.instance + "$t" : g.instance + "$g";
    return g.instance;
  }

  SynthStyle gate_style(std::size_t index) const {
    if (o_.style != SynthStyle::Mixed) return o_.style;
    return index % 3 == 0 ? SynthStyle::Positional : SynthStyle::Named;
  }

  SynthDesign render() {
    const bool bus = o_.style == SynthStyle::Bus;
    std::ostringstream v;
    if (o_.extras) v << "// generated netlist " << o_.name << "\n/* structural only */\n`timescale 1ns/1ps\n";

    std::vector<int> internal;
    std::set<int> po_set(po_nets_.begin(), po_nets_.end());
    for (const auto& g : gates_) {
      if (!po_set.count(g.output)) internal.push_back(g.output);
    }

    if (bus) {
      const int width = next_net_ - clk_ - 1;
      v << "module " << o_.name << " (input clk, input [" << num_pi_ - 1 << ":0] pi, output [" << po_nets_.size() - 1
        << ":0] po);\n";
      v << "  wire [" << width - 1 << ":0] w;\n";
    } else {
      v << "module " << o_.name << " (clk";
      for (std::size_t i = 0; i < num_pi_; ++i) v << ", in" << i;
      for (std::size_t k = 0; k < po_nets_.size(); ++k) v << ", out" << k;
      v << ");\n  input clk;\n";
      for (std::size_t i = 0; i < num_pi_; ++i) v << "  input in" << i << ";\n";
      for (std::size_t k = 0; k < po_nets_.size(); ++k) v << "  output out" << k << ";\n";
      for (int id : internal) v << "  wire " << spell(net_name(id)) << ";\n";
    }
    if (o_.extras) {
      v << "  wire alias_n;\n  assign alias_n = " << spell(net_name(alias_of_)) << ";\n";
    }

    SynthDesign out;
    out.name = o_.name;
    for (std::size_t i = 0; i < gates_.size(); ++i) {
      const Gate& g = gates_[i];
      const LibCell& c = cell(g.type);
      const std::string inst = instance_name(g);
      if (g.trojan) out.trojan_instances.push_back(inst);
      v << "  ";
      if (g.attribute) v << "(* keep = 1 *) ";
      v << g.type << ' ' << spell(inst) << " (";
      if (gate_style(i) == SynthStyle::Positional) {
        v << spell(net_name(g.output));
        for (int in : g.inputs) v << ", " << spell(net_name(in));
      } else {
        for (std::size_t p = 0; p < c.ins.size(); ++p) v << '.' << c.ins[p] << '(' << spell(net_name(g.inputs[p])) << "), ";
        v << '.' << c.out << '(' << spell(net_name(g.output)) << ')';
      }
      v << ");\n";
    }
    v << "endmodule\n";
    out.verilog = v.str();
    out.gate_count = gates_.size();
    return out;
  }

  const SynthOptions& o_;
  Rng rng_;
  std::size_t num_pi_ = 0;
  std::size_t num_po_ = 0;
  int clk_ = 0;
  int next_net_ = 0;
  int alias_of_ = 0;
  int alias_id_ = -2;
  std::vector<int> pool_;
  std::vector<int> po_nets_;
  std::vector<Gate> gates_;
};

}  // namespace

SynthDesign synthesize_design(const SynthOptions& options) { return Generator(options).run(); }

std::string generic_library_profile() {
  std::string out = "# generic synthetic library; pins in positional order\n";
  for (const auto& c : library()) {
    out += c.type;
    out += ": ";
    out += c.out;
    out += "=out";
    for (const char* in : c.ins) {
      out += ", ";
      out += in;
      out += "=in";
    }
    out += " family=";
    out += c.family;
    out += '\n';
  }
  return out;
}

std::vector<SynthOptions> default_corpus_plan() {
  std::vector<SynthOptions> plan(4);
  plan[0] = {"alut100", 101, 240, 4, SynthStyle::Named, false};
  plan[1] = {"alut200", 102, 420, 7, SynthStyle::Bus, false};
  plan[2] = {"ctrlt100", 201, 310, 10, SynthStyle::Positional, false};
  plan[3] = {"ctrlt200", 202, 560, 5, SynthStyle::Mixed, false};
  return plan;
}

std::vector<SynthOptions> parser_corpus_plan() {
  static constexpr SynthStyle styles[] = {SynthStyle::Named, SynthStyle::Bus, SynthStyle::Escaped,
                                          SynthStyle::Positional, SynthStyle::Mixed};
  std::vector<SynthOptions> plan;
  for (std::size_t i = 0; i < 20; ++i) {
    SynthOptions o;
    o.name = "pc" + std::to_string(i);
    o.seed = 1000 + i;
    o.benign_gates = 20 + 7 * i;
    o.trigger_width = i % 4 == 3 ? 0 : 4 + i % 7;
    o.style = styles[i % 5];
    o.extras = (i / 5) % 2 == 1;
    plan.push_back(o);
  }
  return plan;
}

void write_corpus(const std::filesystem::path& dir, const std::vector<SynthOptions>& plan) {
  std::filesystem::create_directories(dir);
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + p.string());
    out << text;
  };
  write(dir / "generic.profile", generic_library_profile());
  for (const auto& o : plan) write(dir / (o.name + ".v"), synthesize_design(o).verilog);
}

}  // namespace tskit
