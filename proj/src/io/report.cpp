#include "cealg/io/report.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>
#include <sstream>

namespace cealg::io {

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1)
    throw Error("SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

Json to_json(const ValidationReport& report) {
  Json out = Json::array();
  for (const auto& v : report.violations)
    out.push_back(Json{{"check", v.check}, {"subject", v.subject}, {"message", v.message}});
  return out;
}

Report::Report(std::string command) : command_(std::move(command)) {}

void Report::add_input(std::string role, std::string path, std::string_view contents) {
  inputs_.push_back(Json{{"role", std::move(role)}, {"path", std::move(path)}, {"sha256", sha256_hex(contents)}});
}

void Report::add_error(std::string kind, std::string message) {
  errors_.push_back(Json{{"kind", std::move(kind)}, {"message", std::move(message)}});
}

void Report::add_parse_errors(const std::string& role, const std::vector<ParseError>& errors) {
  for (const auto& e : errors)
    errors_.push_back(Json{{"kind", "parse"},
                           {"input", role},
                           {"line", e.line},
                           {"column", e.column},
                           {"message", e.message}});
}

int Report::exit_code() const {
  if (!errors_.empty()) return 2;
  if (!violations_.ok()) return 1;
  return 0;
}

Json Report::to_json() const {
  const int code = exit_code();
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command_;
  j["inputs"] = inputs_;
  j["status"] = code == 0 ? "pass" : code == 1 ? "violations" : "input-error";
  j["exit_code"] = code;
  j["result"] = result_;
  j["violations"] = io::to_json(violations_);
  j["errors"] = errors_;
  return j;
}

namespace {

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

bool is_flat(const Json& v) {
  if (!v.is_array()) return false;
  for (const auto& x : v)
    if (x.is_structured()) return false;
  return true;
}

void render(const Json& v, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (v.is_object()) {
    for (const auto& [key, value] : v.items()) {
      if (value.is_string() && value.get<std::string>().find('\n') != std::string::npos) {
        out += pad + key + ": |\n";
        std::istringstream lines(value.get<std::string>());
        for (std::string l; std::getline(lines, l);) out += pad + "  " + l + "\n";
      } else if (!value.is_structured()) {
        out += pad + key + ": " + scalar_text(value) + "\n";
      } else if (value.empty()) {
        out += pad + key + ": " + (value.is_array() ? "none" : "-") + "\n";
      } else if (is_flat(value)) {
        std::string line;
        for (const auto& x : value) line += (line.empty() ? "" : ", ") + scalar_text(x);
        out += pad + key + ": " + line + "\n";
      } else {
        out += pad + key + ":\n";
        render(value, indent + 1, out);
      }
    }
    return;
  }
  if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_structured()) {
        out += pad + "- " + scalar_text(x) + "\n";
        continue;
      }
      out += pad + "-\n";
      render(x, indent + 1, out);
    }
    return;
  }
  out += pad + scalar_text(v) + "\n";
}

}  // namespace

std::string render_text(const Json& report) {
  std::string out;
  render(report, 0, out);
  return out;
}

}  // namespace cealg::io
