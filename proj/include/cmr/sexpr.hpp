#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cmr {

/// Input error with a source position (1-based line and column).
class ParseError : public std::runtime_error {
 public:
  enum class Kind { Lexical, Arity, UnknownHead, Sort, Structure };

  ParseError(Kind kind, int line, int col, const std::string& msg);

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int col() const { return col_; }
  const std::string& detail() const { return detail_; }

 private:
  Kind kind_;
  int line_;
  int col_;
  std::string detail_;
};

std::string_view to_string(ParseError::Kind k);

namespace sexpr {

struct Sexp {
  bool atom = false;
  std::string text;  // atoms only
  std::vector<Sexp> items;
  int line = 0;
  int col = 0;

  bool is_atom(std::string_view s) const { return atom && text == s; }
  /// Head symbol of a list whose first item is an atom, else "".
  std::string_view head() const;
  size_t size() const { return items.size(); }
  const Sexp& operator[](size_t i) const { return items[i]; }
};

/// Reads every top-level form. `;` starts a comment running to end of line.
std::vector<Sexp> read_all(std::string_view text);

/// Reads exactly one form.
Sexp read_one(std::string_view text);

std::string print(const Sexp& s);

/// Every atom occurring in the form, for fresh-name generation.
void collect_atoms(const Sexp& s, std::vector<std::string>& out);

[[noreturn]] void fail(const Sexp& at, ParseError::Kind kind, const std::string& msg);

/// Throws an arity error unless the list has exactly n items (head included).
void expect_size(const Sexp& s, size_t n);

}  // namespace sexpr
}  // namespace cmr
