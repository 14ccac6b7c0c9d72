#include "facons/map_parser.hpp"

#include <cctype>
#include <sstream>

namespace facons {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

bool valid_variable_name(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) return false;
  for (char ch : name)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
  return true;
}

namespace {

constexpr unsigned kMaxExponent = 1000;

class ExprParser {
public:
  ExprParser(std::string_view text, const ArenaPtr& arena, int line, int col0)
      : text_(text), arena_(arena), line_(line), col0_(col0) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail(std::string("unexpected character '") + text_[pos_] + "'");
    return p;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, col0_ + static_cast<int>(pos_) + 1);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  Polynomial expr() {
    skip_ws();
    Polynomial acc(arena_);
    bool neg = false;
    if (peek('+')) {
      ++pos_;
    } else if (peek('-')) {
      ++pos_;
      neg = true;
    }
    Polynomial t = term();
    acc = neg ? -t : t;
    while (true) {
      if (peek('+')) {
        ++pos_;
        acc += term();
      } else if (peek('-')) {
        ++pos_;
        acc -= term();
      } else {
        break;
      }
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = factor();
    while (peek('*')) {
      ++pos_;
      acc *= factor();
    }
    skip_ws();
    if (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '('))
      fail("missing '*' (juxtaposition is not multiplication)");
    return acc;
  }

  Polynomial factor() {
    skip_ws();
    if (peek('-')) {
      ++pos_;
      return -factor();
    }
    Polynomial b = base();
    if (peek('^')) {
      ++pos_;
      skip_ws();
      if (peek('-')) fail("negative exponent");
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        fail("expected nonnegative integer exponent");
      Integer e = digits();
      if (e > kMaxExponent) fail("exponent too large");
      b = b.pow(static_cast<unsigned>(e.get_ui()));
    }
    return b;
  }

  Integer digits() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return Integer(std::string(text_.substr(start, pos_ - start)));
  }

  Polynomial base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial inner = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Integer num = digits();
      Integer den = 1;
      if (pos_ < text_.size() && text_[pos_] == '.') fail("decimal literals are not supported");
      if (peek('/')) {
        ++pos_;
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
          fail("division is only allowed between integer literals");
        den = digits();
        if (den == 0) fail("zero denominator");
      }
      Rational q(num, den);
      q.canonicalize();
      return Polynomial(arena_, q);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      int idx = arena_->index_of(name);
      if (idx < 0) {
        pos_ = start;
        fail("unknown variable '" + name + "'");
      }
      return Polynomial::variable(arena_, static_cast<std::size_t>(idx));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  const ArenaPtr& arena_;
  int line_;
  int col0_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_names(std::string_view s, int line, int col) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string tok;
  while (is >> tok) {
    if (!valid_variable_name(tok)) throw ParseError("invalid variable name '" + tok + "'", line, col);
    out.push_back(tok);
  }
  return out;
}

struct ExprSlot {
  std::string text;
  int line;
  int column;
};

}  // namespace

Polynomial parse_polynomial(std::string_view expr, const ArenaPtr& arena) {
  return ExprParser(expr, arena, 1, 0).parse();
}

ParsedMap parse_map(std::string_view text) {
  MapDocument doc;
  std::vector<ExprSlot> slots;
  bool have_vars = false;
  bool have_targets = false;
  bool in_map = false;
  int map_line = 0;

  int lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    std::string_view line = trim(raw);
    int indent = static_cast<int>(raw.find_first_not_of(" \t"));
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }

    auto push_exprs = [&](std::string_view body, int col_offset) {
      std::size_t s = 0;
      while (s <= body.size()) {
        std::size_t semi = body.find(';', s);
        if (semi == std::string_view::npos) semi = body.size();
        std::string_view piece = body.substr(s, semi - s);
        std::size_t lead = piece.find_first_not_of(" \t");
        std::string_view t = trim(piece);
        if (!t.empty())
          slots.push_back({std::string(t), lineno, col_offset + static_cast<int>(s + (lead == std::string_view::npos ? 0 : lead))});
        else if (semi != body.size())
          throw ParseError("empty expression", lineno, col_offset + static_cast<int>(s) + 1);
        s = semi + 1;
      }
    };

    if (in_map) {
      push_exprs(raw, 0);
      continue;
    }

    auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key:' header line", lineno, indent + 1);
    std::string_view key = trim(line.substr(0, colon));
    std::string_view value = line.substr(colon + 1);
    int value_col = indent + static_cast<int>(colon) + 1;
    if (key == "vars") {
      if (have_vars) throw ParseError("duplicate 'vars:' line", lineno, indent + 1);
      doc.source_vars = split_names(value, lineno, value_col + 1);
      if (doc.source_vars.empty()) throw ParseError("'vars:' needs at least one name", lineno, value_col + 1);
      have_vars = true;
    } else if (key == "targets") {
      if (have_targets) throw ParseError("duplicate 'targets:' line", lineno, indent + 1);
      doc.target_vars = split_names(value, lineno, value_col + 1);
      have_targets = true;
    } else if (key == "map") {
      if (!have_vars) throw ParseError("'map:' before 'vars:'", lineno, indent + 1);
      in_map = true;
      map_line = lineno;
      push_exprs(value, value_col);
    } else {
      if (!valid_variable_name(key)) throw ParseError("invalid header key", lineno, indent + 1);
      doc.options[std::string(key)] = std::string(trim(value));
    }
  }

  if (!have_vars) throw ParseError("missing 'vars:' line", lineno, 1);
  if (!in_map) throw ParseError("missing 'map:' section", lineno, 1);
  std::size_t n = doc.source_vars.size();
  if (slots.size() != n)
    throw ParseError("expected " + std::to_string(n) + " component expressions, found " +
                         std::to_string(slots.size()),
                     slots.empty() ? map_line : slots.back().line, 1);
  if (!have_targets) {
    for (std::size_t i = 0; i < n; ++i) doc.target_vars.push_back("a" + std::to_string(i + 1));
  } else if (doc.target_vars.size() != n) {
    throw ParseError("target count differs from source count", map_line, 1);
  }

  ArenaPtr source;
  ArenaPtr target;
  try {
    source = make_arena(doc.source_vars);
    target = make_arena(doc.target_vars);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 1, 1);
  }

  std::vector<Polynomial> comps;
  for (const auto& slot : slots) {
    comps.push_back(ExprParser(slot.text, source, slot.line, slot.column).parse());
    doc.component_exprs.push_back(slot.text);
  }
  return ParsedMap{std::move(doc), PolynomialMap(source, target, std::move(comps))};
}

std::string format_map(const PolynomialMap& map) {
  std::ostringstream os;
  os << "vars:";
  for (const auto& v : map.source()->names()) os << " " << v;
  os << "\ntargets:";
  for (const auto& v : map.target()->names()) os << " " << v;
  os << "\nmap:\n";
  for (const auto& c : map.components()) os << "  " << c.to_string() << "\n";
  return os.str();
}

}  // namespace facons
