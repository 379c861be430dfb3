#include "tskit/netlist_parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "tskit/error.hpp"
#include "tskit/log.hpp"

namespace tskit {
namespace {

enum class TokKind { Ident, Number, Punct, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  std::size_t line = 0;
  bool escaped = false;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size()) break;
      out.push_back(next());
    }
    out.push_back(Token{TokKind::End, "<eof>", line_, false});
    return out;
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') ++line_;
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      const char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        const std::size_t start = line_;
        advance();
        advance();
        while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) advance();
        if (pos_ >= src_.size()) throw Error(ErrorCode::SyntaxError, "unterminated comment", start);
        advance();
        advance();
      } else if (c == '(' && peek(1) == '*' && peek(2) != ')') {
        // attribute instance (* ... *)
        const std::size_t start = line_;
        advance();
        advance();
        while (pos_ < src_.size() && !(peek() == '*' && peek(1) == ')')) advance();
        if (pos_ >= src_.size()) throw Error(ErrorCode::SyntaxError, "unterminated attribute", start);
        advance();
        advance();
      } else if (c == '`') {
        // compiler directive: ignore the rest of the line
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
  }

  Token next() {
    Token tok;
    tok.line = line_;
    const char c = peek();
    if (c == '\\') {
      advance();
      while (pos_ < src_.size() && !std::isspace(static_cast<unsigned char>(peek()))) {
        tok.text.push_back(peek());
        advance();
      }
      if (tok.text.empty()) throw Error(ErrorCode::SyntaxError, "empty escaped identifier", tok.line);
      tok.kind = TokKind::Ident;
      tok.escaped = true;
      return tok;
    }
    if (ident_start(c)) {
      while (pos_ < src_.size() && ident_char(peek())) {
        tok.text.push_back(peek());
        advance();
      }
      tok.kind = TokKind::Ident;
      return tok;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '\'') {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(peek()))) {
        tok.text.push_back(peek());
        advance();
      }
      if (peek() == '\'') {
        tok.text.push_back('\'');
        advance();
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
          tok.text.push_back(peek());
          advance();
        }
      }
      tok.kind = TokKind::Number;
      return tok;
    }
    tok.kind = TokKind::Punct;
    tok.text = std::string(1, c);
    advance();
    return tok;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

const std::set<std::string, std::less<>> kBehavioural = {
    "always", "always_ff", "always_comb", "always_latch", "initial", "reg",  "logic",
    "function", "task", "generate", "genvar", "integer", "real", "parameter", "localparam",
    "defparam", "specify", "event", "fork", "begin", "if", "case", "for", "while"};

const std::set<std::string, std::less<>> kNetKinds = {"wire", "tri", "supply0", "supply1",
                                                      "wand", "wor", "tri0", "tri1"};

const std::set<std::string, std::less<>> kPrimitives = {"and", "nand", "or",  "nor",
                                                        "xor", "xnor", "not", "buf"};

struct Range {
  long msb = 0;
  long lsb = 0;
};

enum class PortDir { None, Input, Output, Inout };

struct NetRef {
  std::string name;  // normalised scalar identifier
  std::size_t line = 0;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, const LibraryProfile& profile, const ParseOptions& options)
      : toks_(std::move(tokens)), profile_(profile), options_(options) {}

  Netlist run() {
    bool seen_module = false;
    while (peek().kind != TokKind::End) {
      const Token& t = peek();
      if (t.kind == TokKind::Ident && !t.escaped && (t.text == "module" || t.text == "macromodule")) {
        if (seen_module) {
          throw Error(ErrorCode::MultipleModules,
                      "more than one module in file; inputs must be flattened", t.line);
        }
        seen_module = true;
        parse_module();
      } else {
        throw Error(ErrorCode::SyntaxError, "expected 'module', got '" + t.text + "'", t.line);
      }
    }
    if (!seen_module) throw Error(ErrorCode::SyntaxError, "no module found", peek().line);
    finish();
    return std::move(netlist_);
  }

 private:
  // ---- token helpers -------------------------------------------------
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is_punct(const Token& t, char c) const {
    return t.kind == TokKind::Punct && t.text.size() == 1 && t.text[0] == c;
  }
  bool is_keyword(const Token& t, std::string_view kw) const {
    return t.kind == TokKind::Ident && !t.escaped && t.text == kw;
  }
  bool accept(char c) {
    if (is_punct(peek(), c)) {
      take();
      return true;
    }
    return false;
  }
  const Token& expect(char c) {
    if (!is_punct(peek(), c)) {
      throw Error(ErrorCode::SyntaxError,
                  std::string("expected '") + c + "', got '" + peek().text + "'", peek().line);
    }
    return take();
  }
  const Token& expect_ident() {
    if (peek().kind != TokKind::Ident) {
      throw Error(ErrorCode::SyntaxError, "expected identifier, got '" + peek().text + "'",
                  peek().line);
    }
    return take();
  }
  long expect_integer() {
    const Token& t = take();
    if (t.kind != TokKind::Number || t.text.find('\'') != std::string::npos) {
      throw Error(ErrorCode::SyntaxError, "expected integer, got '" + t.text + "'", t.line);
    }
    return std::stol(t.text);
  }
  void skip_balanced_parens() {
    expect('(');
    int depth = 1;
    while (depth > 0) {
      const Token& t = take();
      if (t.kind == TokKind::End) throw Error(ErrorCode::SyntaxError, "unbalanced '('", t.line);
      if (is_punct(t, '(')) ++depth;
      if (is_punct(t, ')')) --depth;
    }
  }

  // ---- declarations --------------------------------------------------
  std::optional<Range> parse_optional_range() {
    if (!is_punct(peek(), '[')) return std::nullopt;
    take();
    Range r;
    r.msb = expect_integer();
    expect(':');
    r.lsb = expect_integer();
    expect(']');
    return r;
  }

  static std::vector<std::string> expand(const std::string& base, const std::optional<Range>& r) {
    if (!r) return {base};
    std::vector<std::string> bits;
    const long step = r->msb >= r->lsb ? -1 : 1;
    for (long i = r->msb;; i += step) {
      bits.push_back(base + "[" + std::to_string(i) + "]");
      if (i == r->lsb) break;
    }
    return bits;
  }

  void declare_net(const std::string& name) {
    if (declared_.insert(name).second) netlist_.nets.push_back(name);
  }

  void declare(const Token& name_tok, const std::optional<Range>& range, PortDir dir) {
    const std::string& base = name_tok.text;
    if (range) {
      auto [it, inserted] = buses_.emplace(base, *range);
      if (!inserted && (it->second.msb != range->msb || it->second.lsb != range->lsb)) {
        throw Error(ErrorCode::SyntaxError, "conflicting ranges for '" + base + "'", name_tok.line);
      }
    }
    for (auto& bit : expand(base, range)) {
      declare_net(bit);
      if (dir == PortDir::None) continue;
      auto [it, inserted] = directions_.emplace(bit, dir);
      if (!inserted && it->second != dir) {
        throw Error(ErrorCode::SyntaxError, "conflicting port directions for '" + bit + "'",
                    name_tok.line);
      }
      if (!inserted) continue;
      if (dir == PortDir::Input || dir == PortDir::Inout) netlist_.primary_inputs.push_back(bit);
      if (dir == PortDir::Output || dir == PortDir::Inout) netlist_.primary_outputs.push_back(bit);
    }
  }

  static PortDir dir_of(const Token& t) {
    if (t.escaped || t.kind != TokKind::Ident) return PortDir::None;
    if (t.text == "input") return PortDir::Input;
    if (t.text == "output") return PortDir::Output;
    if (t.text == "inout") return PortDir::Inout;
    return PortDir::None;
  }

  // `input [3:0] a, b;` after the direction keyword
  void parse_direction_decl(PortDir dir) {
    if (peek().kind == TokKind::Ident && !peek().escaped && kNetKinds.count(peek().text)) take();
    if (is_keyword(peek(), "reg")) {
      throw Error(ErrorCode::UnsupportedConstruct, "'reg' declarations are behavioural",
                  peek().line);
    }
    const auto range = parse_optional_range();
    do {
      declare(expect_ident(), range, dir);
    } while (accept(','));
    expect(';');
  }

  void parse_net_decl() {
    take();  // wire/tri/...
    const auto range = parse_optional_range();
    do {
      const Token& name = expect_ident();
      if (is_punct(peek(), '=')) {
        throw Error(ErrorCode::UnsupportedConstruct, "net declaration assignment", name.line);
      }
      declare(name, range, PortDir::None);
    } while (accept(','));
    expect(';');
  }

  void parse_header_ports() {
    if (!accept('(')) return;
    if (accept(')')) return;
    if (dir_of(peek()) != PortDir::None) {
      // ANSI-style port list
      PortDir dir = PortDir::None;
      std::optional<Range> range;
      do {
        if (const PortDir d = dir_of(peek()); d != PortDir::None) {
          take();
          dir = d;
          if (peek().kind == TokKind::Ident && !peek().escaped && kNetKinds.count(peek().text)) take();
          if (is_keyword(peek(), "reg")) {
            throw Error(ErrorCode::UnsupportedConstruct, "'reg' ports are behavioural", peek().line);
          }
          range = parse_optional_range();
        }
        declare(expect_ident(), range, dir);
      } while (accept(','));
    } else {
      do {
        header_ports_.push_back(expect_ident());
      } while (accept(','));
    }
    expect(')');
  }

  // ---- references ----------------------------------------------------
  std::optional<NetRef> parse_net_expr() {
    const Token& t = peek();
    if (is_punct(t, '{')) {
      throw Error(ErrorCode::UnsupportedConstruct, "concatenation in connection", t.line);
    }
    if (t.kind == TokKind::Number) {
      take();
      return NetRef{constant_net(t), t.line};
    }
    if (t.kind != TokKind::Ident) {
      throw Error(ErrorCode::SyntaxError, "expected net expression, got '" + t.text + "'", t.line);
    }
    take();
    std::string name = t.text;
    if (is_punct(peek(), '[')) {
      take();
      const long index = expect_integer();
      if (is_punct(peek(), ':')) {
        throw Error(ErrorCode::UnsupportedConstruct, "part-select in connection", t.line);
      }
      expect(']');
      name += "[" + std::to_string(index) + "]";
    }
    if (!declared_.count(name)) {
      if (buses_.count(name)) {
        throw Error(ErrorCode::UnsupportedConstruct,
                    "multi-bit net '" + name + "' connected to a scalar pin", t.line);
      }
      throw Error(ErrorCode::UnknownNet, "undeclared net '" + name + "'", t.line);
    }
    return NetRef{std::move(name), t.line};
  }

  std::string constant_net(const Token& t) {
    const std::string& text = t.text;
    const auto tick = text.find('\'');
    std::string digits;
    int base = 10;
    if (tick == std::string::npos) {
      digits = text;
    } else {
      if (tick > 0 && std::stol(text.substr(0, tick)) != 1) {
        throw Error(ErrorCode::SyntaxError, "multi-bit constant '" + text + "' on a scalar pin",
                    t.line);
      }
      std::size_t i = tick + 1;
      if (i < text.size() && (text[i] == 's' || text[i] == 'S')) ++i;
      if (i >= text.size()) throw Error(ErrorCode::SyntaxError, "malformed constant", t.line);
      switch (std::tolower(static_cast<unsigned char>(text[i]))) {
        case 'b': base = 2; break;
        case 'o': base = 8; break;
        case 'd': base = 10; break;
        case 'h': base = 16; break;
        default: throw Error(ErrorCode::SyntaxError, "malformed constant '" + text + "'", t.line);
      }
      digits = text.substr(i + 1);
    }
    digits.erase(std::remove(digits.begin(), digits.end(), '_'), digits.end());
    if (digits.empty()) throw Error(ErrorCode::SyntaxError, "malformed constant", t.line);
    unsigned long value = 0;
    for (char c : digits) {
      if (!std::isxdigit(static_cast<unsigned char>(c))) {
        throw Error(ErrorCode::SyntaxError, "unsupported constant '" + text + "'", t.line);
      }
      const int d = std::isdigit(static_cast<unsigned char>(c))
                        ? c - '0'
                        : std::tolower(static_cast<unsigned char>(c)) - 'a' + 10;
      if (d >= base) throw Error(ErrorCode::SyntaxError, "bad digit in '" + text + "'", t.line);
      value = value * base + d;
      if (value > 1) break;
    }
    if (value > 1) throw Error(ErrorCode::SyntaxError, "constant '" + text + "' is not 0 or 1", t.line);
    std::string net = value == 0 ? kConstZeroNet : kConstOneNet;
    declare_net(net);
    return net;
  }

  // ---- statements ----------------------------------------------------
  void parse_assign() {
    const std::size_t line = take().line;
    const auto lhs = parse_net_expr();
    expect('=');
    const Token& rhs_start = peek();
    const auto rhs = parse_net_expr();
    if (!is_punct(peek(), ';')) {
      throw Error(ErrorCode::UnsupportedConstruct, "assign with an expression", rhs_start.line);
    }
    take();
    if (is_constant_net(lhs->name)) {
      throw Error(ErrorCode::SyntaxError, "assignment to a constant", line);
    }
    aliases_.emplace_back(lhs->name, rhs->name);
  }

  void parse_instance() {
    const Token& type_tok = expect_ident();
    if (is_punct(peek(), '#')) {
      take();
      skip_balanced_parens();
    }
    if (!(peek().kind == TokKind::Ident)) {
      throw Error(ErrorCode::SyntaxError,
                  "expected instance name after '" + type_tok.text + "', got '" + peek().text + "'",
                  peek().line);
    }
    const Token& inst_tok = take();
    if (is_punct(peek(), '[')) {
      throw Error(ErrorCode::UnsupportedConstruct, "instance arrays", inst_tok.line);
    }

    Cell cell;
    cell.cell_type = type_tok.text;
    cell.instance_name = inst_tok.text;
    const std::size_t line = inst_tok.line;

    const CellRule* rule = profile_.match(cell.cell_type);
    cell.family = (rule && !rule->family.empty()) ? rule->family : heuristic_family(cell.cell_type);

    std::set<std::string> pins_seen;
    auto add_pin = [&](std::string pin, PinDirection dir, NetRef net) {
      if (!pins_seen.insert(pin).second) {
        throw Error(ErrorCode::SyntaxError,
                    "duplicate pin '" + pin + "' on instance '" + cell.instance_name + "'", net.line);
      }
      PinConnection conn{std::move(pin), std::move(net.name)};
      (dir == PinDirection::Input ? cell.input_pins : cell.output_pins).push_back(std::move(conn));
    };

    expect('(');
    if (is_punct(peek(), '.')) {
      do {
        expect('.');
        const Token& pin_tok = expect_ident();
        expect('(');
        std::optional<NetRef> net;
        if (!is_punct(peek(), ')')) net = parse_net_expr();
        expect(')');
        if (!net) continue;  // explicitly unconnected
        add_pin(pin_tok.text, named_pin_direction(cell.cell_type, pin_tok.text, rule, pin_tok.line), *net);
      } while (accept(','));
    } else if (!is_punct(peek(), ')')) {
      std::size_t index = 0;
      do {
        if (is_punct(peek(), ',') || is_punct(peek(), ')')) {
          ++index;  // empty positional slot
          continue;
        }
        const auto net = parse_net_expr();
        auto [pin, dir] = positional_pin(cell.cell_type, index, rule, line);
        add_pin(std::move(pin), dir, *net);
        ++index;
      } while (accept(','));
    }
    expect(')');
    if (is_punct(peek(), ',')) {
      throw Error(ErrorCode::UnsupportedConstruct, "multiple instances in one statement", peek().line);
    }
    expect(';');

    if (!instance_names_.insert(cell.instance_name).second) {
      throw Error(ErrorCode::DuplicateInstance, "instance '" + cell.instance_name + "'", line);
    }
    netlist_.cells.push_back(std::move(cell));
  }

  PinDirection named_pin_direction(const std::string& cell_type, const std::string& pin,
                                   const CellRule* rule, std::size_t line) {
    if (rule) {
      for (const auto& p : rule->pins) {
        if (glob_match(p.pattern, pin)) return p.direction;
      }
    }
    if (options_.strict) {
      throw Error(ErrorCode::UnknownPinDirection,
                  "cannot classify pin '" + pin + "' of cell type '" + cell_type + "'", line);
    }
    const PinDirection dir = heuristic_pin_direction(pin);
    if (warned_.insert(cell_type + "/" + pin).second) {
      log_warning("pin '" + pin + "' of cell type '" + cell_type + "' not in library profile; "
                  "classified as " + (dir == PinDirection::Output ? "output" : "input") +
                  " by name heuristic");
    }
    return dir;
  }

  std::pair<std::string, PinDirection> positional_pin(const std::string& cell_type,
                                                      std::size_t index, const CellRule* rule,
                                                      std::size_t line) {
    if (rule && rule->has_literal_pins()) {
      if (index >= rule->pins.size()) {
        throw Error(ErrorCode::SyntaxError,
                    "too many positional connections for '" + cell_type + "'", line);
      }
      return {rule->pins[index].pattern, rule->pins[index].direction};
    }
    // Gate-primitive convention: first terminal is the output.
    const PinDirection dir = index == 0 ? PinDirection::Output : PinDirection::Input;
    if (!kPrimitives.count(cell_type)) {
      if (options_.strict) {
        throw Error(ErrorCode::UnknownPinDirection,
                    "positional pin " + std::to_string(index) + " of cell type '" + cell_type +
                        "' has no ordered profile rule",
                    line);
      }
      if (warned_.insert(cell_type + "/#positional").second) {
        log_warning("cell type '" + cell_type + "' connected positionally without an ordered "
                    "profile rule; first terminal taken as the output");
      }
    }
    return {"p" + std::to_string(index), dir};
  }

  void parse_module() {
    take();  // module
    netlist_.name = expect_ident().text;
    if (is_punct(peek(), '#')) {
      take();
      skip_balanced_parens();
    }
    parse_header_ports();
    expect(';');

    while (true) {
      const Token& t = peek();
      if (t.kind == TokKind::End) throw Error(ErrorCode::SyntaxError, "missing 'endmodule'", t.line);
      if (is_keyword(t, "endmodule")) {
        take();
        break;
      }
      if (is_punct(t, ';')) {
        take();
        continue;
      }
      if (const PortDir d = dir_of(t); d != PortDir::None) {
        take();
        parse_direction_decl(d);
      } else if (t.kind == TokKind::Ident && !t.escaped && kNetKinds.count(t.text)) {
        parse_net_decl();
      } else if (is_keyword(t, "assign")) {
        parse_assign();
      } else if (t.kind == TokKind::Ident && !t.escaped && kBehavioural.count(t.text)) {
        throw Error(ErrorCode::UnsupportedConstruct, "'" + t.text + "' is not structural", t.line);
      } else if (is_keyword(t, "module")) {
        throw Error(ErrorCode::MultipleModules, "nested module", t.line);
      } else if (t.kind == TokKind::Ident) {
        parse_instance();
      } else {
        throw Error(ErrorCode::SyntaxError, "unexpected token '" + t.text + "'", t.line);
      }
    }

    for (const auto& port : header_ports_) {
      const std::string& name = port.text;
      const bool has_dir = directions_.count(name) ||
                           (buses_.count(name) && directions_.count(expand(name, buses_[name]).front()));
      if (!has_dir) {
        throw Error(ErrorCode::SyntaxError, "port '" + name + "' has no direction declaration",
                    port.line);
      }
    }
  }

  // Resolves alias assigns: every pin on an aliased net is moved to one
  // representative (constant, then primary input, then primary output, then
  // the earliest declared net).
  void finish() {
    if (aliases_.empty()) return;
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < netlist_.nets.size(); ++i) index.emplace(netlist_.nets[i], i);
    std::vector<std::size_t> parent(netlist_.nets.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    const std::unordered_set<std::string> pis(netlist_.primary_inputs.begin(),
                                              netlist_.primary_inputs.end());
    const std::unordered_set<std::string> pos(netlist_.primary_outputs.begin(),
                                              netlist_.primary_outputs.end());
    auto rank = [&](std::size_t i) {
      const auto& n = netlist_.nets[i];
      if (is_constant_net(n)) return 0;
      if (pis.count(n)) return 1;
      if (pos.count(n)) return 2;
      return 3;
    };
    for (const auto& [lhs, rhs] : aliases_) {
      std::size_t a = find(index.at(lhs));
      std::size_t b = find(index.at(rhs));
      if (a == b) continue;
      if (std::pair(rank(b), b) < std::pair(rank(a), a)) std::swap(a, b);
      parent[b] = a;
    }
    for (auto& cell : netlist_.cells) {
      for (auto* pins : {&cell.input_pins, &cell.output_pins}) {
        for (auto& p : *pins) p.net = netlist_.nets[find(index.at(p.net))];
      }
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const LibraryProfile& profile_;
  const ParseOptions& options_;

  Netlist netlist_;
  std::unordered_set<std::string> declared_;
  std::map<std::string, Range> buses_;
  std::unordered_map<std::string, PortDir> directions_;
  std::vector<Token> header_ports_;
  std::unordered_set<std::string> instance_names_;
  std::vector<std::pair<std::string, std::string>> aliases_;
  std::set<std::string> warned_;
};

}  // namespace

Netlist parse_netlist(std::string_view source, const LibraryProfile& profile,
                      const ParseOptions& options) {
  Parser parser(Lexer(source).run(), profile, options);
  return parser.run();
}

Netlist parse_netlist_file(const std::filesystem::path& path, const LibraryProfile& profile,
                           const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open netlist " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_netlist(buf.str(), profile, options);
}

}  // namespace tskit
