#pragma once

// Text formats: channel description files (key = value), codebook files
// (one word per line, base-q alphanumeric digits), trial reports as JSON,
// and CSV assembly helpers. Fraction literals ("a/b") in a channel file mark
// it for the exact-rational backend.

#include <json.hpp>

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qpc/channel.hpp"
#include "qpc/codes.hpp"
#include "qpc/errors.hpp"
#include "qpc/simulate.hpp"

namespace qpc {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace detail

/// Parsed channel description: either an explicit matrix or erasure/error
/// family parameters, with an optional number of uses.
struct ChannelFileSpec {
  std::string kind;
  int q = 2;
  unsigned n = 1;
  std::string eps = "0";
  std::string delta = "0";
  std::vector<std::vector<std::string>> rows;
  bool fractions = false;
};

inline ChannelFileSpec parse_channel_spec(const std::string& text) {
  ChannelFileSpec spec;
  std::map<int, std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("channel file: expected key = value: " + line);
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (fraction_syntax(val)) spec.fractions = true;
    if (key == "kind") {
      spec.kind = val;
    } else if (key == "q") {
      spec.q = std::stoi(val);
    } else if (key == "n") {
      spec.n = static_cast<unsigned>(std::stoul(val));
    } else if (key == "eps") {
      spec.eps = val;
    } else if (key == "delta") {
      spec.delta = val;
    } else if (key.rfind("row", 0) == 0) {
      rows[std::stoi(key.substr(3))] = detail::split_ws(val);
    } else {
      throw ConfigError("channel file: unknown key '" + key + "'");
    }
  }
  if (spec.kind != "matrix" && spec.kind != "erasure_error")
    throw ConfigError("channel file: kind must be 'matrix' or 'erasure_error'");
  if (spec.kind == "matrix") {
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      auto it = rows.find(i);
      if (it == rows.end()) throw ConfigError("channel file: missing row" + std::to_string(i));
      spec.rows.push_back(it->second);
    }
    if (spec.rows.empty()) throw ConfigError("channel file: matrix kind needs row0, row1, ...");
  }
  return spec;
}

template <class S>
Channel<S> build_channel(const ChannelFileSpec& spec, std::uint64_t budget = kDefaultBudget) {
  Channel<S> base = [&] {
    if (spec.kind == "erasure_error") {
      ErasureErrorParams<S> p;
      p.q = spec.q;
      p.eps = num_traits<S>::from_rat(parse_rat(spec.eps));
      p.delta = num_traits<S>::from_rat(parse_rat(spec.delta));
      return Channel<S>::erasure_error(p);
    }
    std::vector<std::vector<S>> rows;
    for (const auto& r : spec.rows) {
      rows.emplace_back();
      for (const auto& cell : r) rows.back().push_back(num_traits<S>::from_rat(parse_rat(cell)));
    }
    return Channel<S>::dense(std::move(rows));
  }();
  return spec.n > 1 ? base.power(spec.n, budget) : base;
}

inline int symbol_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  if (c >= 'A' && c <= 'Z') return c - 'A' + 10;
  return -1;
}

inline char symbol_char(int v) {
  return v < 10 ? static_cast<char>('0' + v) : static_cast<char>('a' + v - 10);
}

/// Codebook file: `# n=<n> q=<q>` header, then one word per line in base-q
/// alphanumeric digits (q <= 36).
inline Codebook parse_code_file(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int n = -1, q = -1;
  std::vector<std::vector<std::uint8_t>> words;
  while (std::getline(is, line)) {
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      for (const auto& tok : detail::split_ws(line.substr(1))) {
        if (tok.rfind("n=", 0) == 0) n = std::stoi(tok.substr(2));
        if (tok.rfind("q=", 0) == 0) q = std::stoi(tok.substr(2));
      }
      continue;
    }
    std::vector<std::uint8_t> w;
    for (char c : line) {
      int v = symbol_value(c);
      if (v < 0) throw ConfigError("code file: bad symbol '" + std::string(1, c) + "'");
      w.push_back(static_cast<std::uint8_t>(v));
    }
    words.push_back(std::move(w));
  }
  if (n < 0 || q < 0) throw ConfigError("code file: missing '# n=<n> q=<q>' header");
  if (q > 36) throw ConfigError("code file: q <= 36 (alphanumeric digits)");
  return Codebook::from_words(n, q, std::move(words));
}

inline std::string format_code_file(const Codebook& code) {
  std::string out = "# n=" + std::to_string(code.n) + " q=" + std::to_string(code.q) + "\n";
  for (const auto& w : code.words) {
    for (auto s : w) out.push_back(symbol_char(s));
    out.push_back('\n');
  }
  return out;
}

/// Trial report with the field order fixed for byte-stable output.
inline nlohmann::ordered_json trial_report_json(const TrialReport& rep) {
  nlohmann::ordered_json j;
  j["trials"] = rep.trials;
  j["failures"] = rep.failures;
  if (rep.estimate)
    j["estimate"] = *rep.estimate;
  else
    j["estimate"] = nullptr;
  j["ci95_lo"] = rep.ci95_lo;
  j["ci95_hi"] = rep.ci95_hi;
  j["seed"] = rep.seed;
  j["decoder"] = rep.decoder;
  return j;
}

inline std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out.push_back(',');
    out += cells[i];
  }
  out.push_back('\n');
  return out;
}

}  // namespace qpc
