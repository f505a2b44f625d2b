#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cealg/error.hpp"
#include "cealg/generator.hpp"
#include "cealg/ncpoly.hpp"

namespace cealg::io {

struct ParseError {
  std::size_t line = 0;    // 1-based
  std::size_t column = 0;  // 1-based
  std::string message;

  friend bool operator==(const ParseError&, const ParseError&) = default;
};

/// "line:column: message"
std::string to_string(const ParseError& e);

/// Raised by document parsers with every problem found, ordered by position.
class ParseFailure : public Error {
 public:
  explicit ParseFailure(std::vector<ParseError> errors);
  const std::vector<ParseError>& errors() const { return errors_; }

 private:
  std::vector<ParseError> errors_;
};

struct Token {
  std::string text;
  std::size_t column = 0;
};

struct Line {
  std::size_t number = 0;
  std::vector<Token> tokens;
};

/// Splits a document into non-empty lines of tokens. `#` starts a comment;
/// `+`, `=`, `:` and `<-` are tokens on their own, everything else is split
/// on whitespace. The one exception is the kind token `dp+`.
std::vector<Line> tokenize(std::string_view text);

/// Collects errors while a document is parsed.
class Diagnostics {
 public:
  void error(const Line& line, std::size_t token, std::string message);
  void error_at(std::size_t line, std::size_t column, std::string message);
  bool empty() const { return errors_.empty(); }
  /// Throws ParseFailure when anything was recorded.
  void throw_if_any();

 private:
  std::vector<ParseError> errors_;
};

std::optional<std::int64_t> parse_integer(std::string_view text);

/// `gen <name> <degree> <p/q> <kind>`; the directive token is tokens[0].
std::optional<Generator> parse_generator(const Line& line, Diagnostics& diag);

/// "name degree action kind" in document form.
std::string generator_line(const Generator& g);

/// Parses tokens [first, last) of `line` as a polynomial: `+`-separated
/// monomials `coeff? name*`. Integer coefficients are reduced into `field`.
/// Undeclared names are reported.
std::optional<NcPoly> parse_polynomial(const Line& line, std::size_t first, std::size_t last, Field field,
                                       const std::function<bool(const std::string&)>& declared, Diagnostics& diag);

/// Requires `line` to have exactly `count` tokens.
bool expect_arity(const Line& line, std::size_t count, std::string_view usage, Diagnostics& diag);

}  // namespace cealg::io
