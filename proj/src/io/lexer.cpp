#include "cealg/io/lexer.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "cealg/rational.hpp"

namespace cealg::io {

std::string to_string(const ParseError& e) {
  return std::to_string(e.line) + ":" + std::to_string(e.column) + ": " + e.message;
}

namespace {

std::string summary(const std::vector<ParseError>& errors) {
  std::string out = std::to_string(errors.size()) + " parse error" + (errors.size() == 1 ? "" : "s");
  for (const auto& e : errors) out += "\n  " + to_string(e);
  return out;
}

}  // namespace

ParseFailure::ParseFailure(std::vector<ParseError> errors) : Error(summary(errors)), errors_(std::move(errors)) {}

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  while (!text.empty() || number == 0) {
    ++number;
    const auto eol = text.find('\n');
    std::string_view raw = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

    Line line{number, {}};
    Token current;
    auto flush = [&] {
      if (!current.text.empty()) line.tokens.push_back(std::move(current));
      current = Token{};
    };
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const char c = raw[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        flush();
      } else if (c == '+' && current.text == "dp") {
        current.text += c;  // the kind token dp+
      } else if (c == '+' || c == '=' || c == ':') {
        flush();
        line.tokens.push_back(Token{std::string(1, c), i + 1});
      } else if (c == '<' && i + 1 < raw.size() && raw[i + 1] == '-') {
        flush();
        line.tokens.push_back(Token{"<-", i + 1});
        ++i;
      } else {
        if (current.text.empty()) current.column = i + 1;
        current.text += c;
      }
    }
    flush();
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (eol == std::string_view::npos) break;
  }
  return lines;
}

void Diagnostics::error(const Line& line, std::size_t token, std::string message) {
  std::size_t column = 1;
  if (token < line.tokens.size()) column = line.tokens[token].column;
  else if (!line.tokens.empty()) column = line.tokens.back().column + line.tokens.back().text.size();
  errors_.push_back({line.number, column, std::move(message)});
}

void Diagnostics::error_at(std::size_t line, std::size_t column, std::string message) {
  errors_.push_back({line, column, std::move(message)});
}

void Diagnostics::throw_if_any() {
  if (errors_.empty()) return;
  std::stable_sort(errors_.begin(), errors_.end(), [](const ParseError& a, const ParseError& b) {
    return std::tie(a.line, a.column) < std::tie(b.line, b.column);
  });
  throw ParseFailure(std::move(errors_));
}

std::optional<std::int64_t> parse_integer(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::int64_t value = 0;
  const char* begin = text.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<Generator> parse_generator(const Line& line, Diagnostics& diag) {
  if (!expect_arity(line, 5, "gen <name> <degree> <p/q> <kind>", diag)) return std::nullopt;
  const auto& t = line.tokens;
  bool ok = true;
  Generator g;
  g.name = t[1].text;
  if (!is_valid_name(g.name)) {
    diag.error(line, 1, "invalid generator name '" + g.name + "'");
    ok = false;
  }
  const auto degree = parse_integer(t[2].text);
  if (!degree || *degree < -1000 || *degree > 1000) {
    diag.error(line, 2, "degree '" + t[2].text + "' is not an integer in [-1000, 1000]");
    ok = false;
  } else {
    g.degree = static_cast<int>(*degree);
  }
  if (t[3].text.find('/') == std::string::npos) {
    diag.error(line, 3, "action '" + t[3].text + "' must be written as p/q");
    ok = false;
  } else if (const auto action = parse_rational(t[3].text)) {
    g.action = *action;
  } else {
    diag.error(line, 3, "action '" + t[3].text + "' is not a rational p/q with q > 0");
    ok = false;
  }
  if (const auto kind = kind_from_token(t[4].text)) {
    g.kind = *kind;
  } else {
    diag.error(line, 4, "unknown generator kind '" + t[4].text + "'");
    ok = false;
  }
  if (ok)
    if (const auto conflict = kind_action_conflict(g)) {
      diag.error(line, 3, *conflict);
      ok = false;
    }
  return ok ? std::optional(g) : std::nullopt;
}

std::string generator_line(const Generator& g) {
  return g.name + " " + std::to_string(g.degree) + " " + cealg::to_string(g.action) + " " + std::string(to_token(g.kind));
}

std::optional<NcPoly> parse_polynomial(const Line& line, std::size_t first, std::size_t last, Field field,
                                       const std::function<bool(const std::string&)>& declared, Diagnostics& diag) {
  if (first >= last) {
    diag.error(line, first, "missing polynomial");
    return std::nullopt;
  }
  NcPoly poly(field);
  bool ok = true;
  std::size_t start = first;
  for (std::size_t i = first; i <= last; ++i) {
    if (i < last && line.tokens[i].text != "+") continue;
    if (i == start) {
      diag.error(line, i, "empty monomial");
      ok = false;
    } else {
      Scalar coeff = field.one();
      Word word;
      for (std::size_t j = start; j < i; ++j) {
        const auto& text = line.tokens[j].text;
        if (const auto n = parse_integer(text)) {
          if (j != start) {
            diag.error(line, j, "coefficient '" + text + "' must come first in its monomial");
            ok = false;
          }
          coeff = field(*n);
        } else if (!is_valid_name(text)) {
          diag.error(line, j, "'" + text + "' is neither a coefficient nor a generator name");
          ok = false;
        } else if (!declared(text)) {
          diag.error(line, j, "undeclared generator '" + text + "'");
          ok = false;
        } else {
          word.letters.push_back(text);
        }
      }
      if (ok) poly.add_term(word, coeff);
    }
    start = i + 1;
  }
  return ok ? std::optional(std::move(poly)) : std::nullopt;
}

bool expect_arity(const Line& line, std::size_t count, std::string_view usage, Diagnostics& diag) {
  if (line.tokens.size() == count) return true;
  diag.error(line, std::min(count, line.tokens.size()), "expected '" + std::string(usage) + "'");
  return false;
}

}  // namespace cealg::io
