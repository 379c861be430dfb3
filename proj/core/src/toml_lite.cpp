#include "toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <string>
#include <vector>

#include "tskit/error.hpp"

namespace tskit::detail {

namespace {

using Json = nlohmann::ordered_json;

class TomlReader {
 public:
  explicit TomlReader(std::string_view text) : s_(text) {}

  Json run() {
    Json root = Json::object();
    Json* table = &root;
    while (true) {
      skip_blank_lines();
      if (at_end()) break;
      if (peek() == '[') {
        ++pos_;
        if (peek() == '[') fail("arrays of tables are not supported");
        const auto path = read_key_path(']');
        expect(']');
        table = &root;
        for (const auto& part : path) {
          Json& next = (*table)[part];
          if (next.is_null()) next = Json::object();
          if (!next.is_object()) fail("'" + part + "' is not a table");
          table = &next;
        }
        if (!defined_tables_.insert_unique(path)) fail("table defined twice");
      } else {
        const auto path = read_key_path('=');
        expect('=');
        skip_spaces();
        Json value = read_value();
        Json* target = table;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          Json& next = (*target)[path[i]];
          if (next.is_null()) next = Json::object();
          if (!next.is_object()) fail("'" + path[i] + "' is not a table");
          target = &next;
        }
        if (target->contains(path.back())) fail("duplicate key '" + path.back() + "'");
        (*target)[path.back()] = std::move(value);
      }
      end_of_line();
    }
    return root;
  }

 private:
  // Tiny set of seen table headers, kept as joined strings.
  struct TableSet {
    std::vector<std::string> seen;
    bool insert_unique(const std::vector<std::string>& path) {
      std::string key;
      for (const auto& p : path) key += p + '\x1f';
      for (const auto& s : seen) {
        if (s == key) return false;
      }
      seen.push_back(std::move(key));
      return true;
    }
  };

  [[noreturn]] void fail(const std::string& msg) const { throw Error(ErrorCode::InvalidConfig, msg, line_); }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }

  void skip_spaces() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  void skip_comment() {
    if (peek() == '#') {
      while (!at_end() && peek() != '\n') ++pos_;
    }
  }

  void skip_blank_lines() {
    while (true) {
      skip_spaces();
      skip_comment();
      if (peek() == '\r') ++pos_;
      if (peek() == '\n') {
        ++pos_;
        ++line_;
        continue;
      }
      return;
    }
  }

  // Inside arrays newlines and comments are insignificant.
  void skip_array_space() {
    while (true) {
      skip_spaces();
      skip_comment();
      if (peek() == '\r') {
        ++pos_;
      } else if (peek() == '\n') {
        ++pos_;
        ++line_;
      } else {
        return;
      }
    }
  }

  void end_of_line() {
    skip_spaces();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (at_end()) return;
    if (peek() != '\n') fail(std::string("unexpected '") + peek() + "'");
    ++pos_;
    ++line_;
  }

  void expect(char c) {
    skip_spaces();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::vector<std::string> read_key_path(char terminator) {
    std::vector<std::string> path;
    while (true) {
      skip_spaces();
      std::string part;
      if (peek() == '"') {
        part = read_basic_string();
      } else if (peek() == '\'') {
        part = read_literal_string();
      } else {
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) {
          part += s_[pos_++];
        }
        if (part.empty()) fail("expected a key");
      }
      path.push_back(std::move(part));
      skip_spaces();
      if (peek() == '.') {
        ++pos_;
        continue;
      }
      if (peek() != terminator) fail(std::string("expected '") + terminator + "' after key");
      return path;
    }
  }

  std::string read_basic_string() {
    ++pos_;
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      const char c = s_[pos_++];
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (at_end()) fail("unterminated string");
      const char e = s_[pos_++];
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        default: fail(std::string("unsupported escape \\") + e);
      }
    }
  }

  std::string read_literal_string() {
    ++pos_;
    const auto end = s_.find('\'', pos_);
    const auto nl = s_.find('\n', pos_);
    if (end == std::string_view::npos || (nl != std::string_view::npos && nl < end)) fail("unterminated string");
    std::string out(s_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return out;
  }

  Json read_value() {
    const char c = peek();
    if (c == '"') return read_basic_string();
    if (c == '\'') return read_literal_string();
    if (c == '[') return read_array();
    if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    return read_number();
  }

  Json read_array() {
    ++pos_;
    Json arr = Json::array();
    while (true) {
      skip_array_space();
      if (peek() == ']') {
        ++pos_;
        return arr;
      }
      arr.push_back(read_value());
      skip_array_space();
      if (peek() == ',') {
        ++pos_;
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
  }

  Json read_number() {
    std::string tok;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' || peek() == '-' ||
                         peek() == '.' || peek() == '_')) {
      if (peek() != '_') tok += peek();
      ++pos_;
    }
    if (tok.empty()) fail("expected a value");
    const bool is_float = tok.find_first_of(".eE") != std::string::npos || tok == "inf" || tok == "nan" ||
                          tok == "+inf" || tok == "-inf";
    const char* b = tok.data();
    const char* e = tok.data() + tok.size();
    if (*b == '+') ++b;
    if (is_float) {
      double v = 0.0;
      const auto r = std::from_chars(b, e, v);
      if (r.ec != std::errc{} || r.ptr != e) fail("bad number '" + tok + "'");
      return v;
    }
    std::int64_t v = 0;
    const auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc{} || r.ptr != e) fail("bad number '" + tok + "'");
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  TableSet defined_tables_;
};

}  // namespace

nlohmann::ordered_json parse_toml(std::string_view text) { return TomlReader(text).run(); }

}  // namespace tskit::detail
