#include "cmr/sexpr.hpp"

#include <cctype>

namespace cmr {

ParseError::ParseError(Kind kind, int line, int col, const std::string& msg)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " +
                         std::string(to_string(kind)) + ": " + msg),
      kind_(kind),
      line_(line),
      col_(col),
      detail_(msg) {}

std::string_view to_string(ParseError::Kind k) {
  switch (k) {
    case ParseError::Kind::Lexical: return "lexical error";
    case ParseError::Kind::Arity: return "arity error";
    case ParseError::Kind::UnknownHead: return "unknown head symbol";
    case ParseError::Kind::Sort: return "sort error";
    case ParseError::Kind::Structure: return "malformed input";
  }
  return "error";
}

namespace sexpr {

std::string_view Sexp::head() const {
  if (atom || items.empty() || !items[0].atom) return {};
  return items[0].text;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view t) : text_(t) {}

  bool at_end() {
    skip();
    return pos_ >= text_.size();
  }

  Sexp read() {
    skip();
    if (pos_ >= text_.size()) throw ParseError(ParseError::Kind::Lexical, line_, col_, "unexpected end of input");
    Sexp s;
    s.line = line_;
    s.col = col_;
    char c = text_[pos_];
    if (c == '(') {
      advance();
      for (;;) {
        skip();
        if (pos_ >= text_.size())
          throw ParseError(ParseError::Kind::Lexical, s.line, s.col, "unclosed parenthesis");
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        s.items.push_back(read());
      }
      return s;
    }
    if (c == ')') throw ParseError(ParseError::Kind::Lexical, line_, col_, "unexpected ')'");
    s.atom = true;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';') break;
      if (static_cast<unsigned char>(d) < 0x20)
        throw ParseError(ParseError::Kind::Lexical, line_, col_, "control character");
      s.text.push_back(d);
      advance();
    }
    return s;
  }

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Sexp> read_all(std::string_view text) {
  Reader r(text);
  std::vector<Sexp> out;
  while (!r.at_end()) out.push_back(r.read());
  return out;
}

Sexp read_one(std::string_view text) {
  Reader r(text);
  if (r.at_end()) throw ParseError(ParseError::Kind::Lexical, 1, 1, "empty input");
  Sexp s = r.read();
  if (!r.at_end())
    throw ParseError(ParseError::Kind::Structure, r.line(), r.col(), "trailing input after form");
  return s;
}

std::string print(const Sexp& s) {
  if (s.atom) return s.text;
  std::string out = "(";
  for (size_t i = 0; i < s.items.size(); ++i) {
    if (i) out += ' ';
    out += print(s.items[i]);
  }
  return out + ")";
}

void collect_atoms(const Sexp& s, std::vector<std::string>& out) {
  if (s.atom) {
    out.push_back(s.text);
    return;
  }
  for (const auto& i : s.items) collect_atoms(i, out);
}

void fail(const Sexp& at, ParseError::Kind kind, const std::string& msg) {
  throw ParseError(kind, at.line, at.col, msg);
}

void expect_size(const Sexp& s, size_t n) {
  if (s.atom || s.items.size() != n)
    fail(s, ParseError::Kind::Arity,
         "'" + std::string(s.head()) + "' expects " + std::to_string(n - 1) + " argument(s)");
}

}  // namespace sexpr
}  // namespace cmr
