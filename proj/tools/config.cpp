#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ccim/error.hpp"

namespace ccim::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ConfigError("bad value for '" + std::string(key) + "': '" + std::string(text) + "'");
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw ConfigError("bad boolean for '" + std::string(key) + "': '" + std::string(text) + "'");
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError("expected key = value", line_no);
      const auto key = trim(line.substr(0, eq));
      if (key.empty()) throw ParseError("empty key", line_no);
      out[std::string(key)] = std::string(trim(line.substr(eq + 1)));
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

KeyValues load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_key_values(buf.str());
}

KeyValues merge(KeyValues base, const KeyValues& overrides) {
  for (const auto& [k, v] : overrides) base[k] = v;
  return base;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (auto part : split(text, ',')) {
    if (part.empty()) throw ConfigError("empty entry in integer list '" + std::string(text) + "'");
    out.push_back(parse_number<int>("ns", part));
  }
  if (out.empty()) throw ConfigError("empty N list");
  return out;
}

MixedKind parse_mixed_kind(std::string_view name) {
  for (MixedKind k : {MixedKind::Central, MixedKind::Biased, MixedKind::Corner, MixedKind::FirstDerivAssisted,
                      MixedKind::SecondDerivAssisted, MixedKind::ShiftOutOfPlane, MixedKind::ShiftInPlane,
                      MixedKind::CrossInterface})
    if (kind_name(k) == name) return k;
  throw ConfigError("unknown mixed scheme '" + std::string(name) + "'");
}

RunConfig make_config(const KeyValues& values) {
  RunConfig c;
  for (const auto& [key, value] : values) {
    const std::string_view v = value;
    if (key == "surface") {
      c.surface = value;
    } else if (key == "problem") {
      c.problem = value;
    } else if (key == "n") {
      c.ns = {parse_number<int>(key, v)};
    } else if (key == "ns") {
      c.ns = parse_int_list(v);
    } else if (key == "tolerance") {
      c.tolerance = parse_number<double>(key, v);
    } else if (key == "max_iterations") {
      c.max_iterations = parse_number<int>(key, v);
    } else if (key == "precondition") {
      c.precondition = parse_bool(key, v);
    } else if (key == "output") {
      c.output = value;
    } else if (key == "threads") {
      c.threads = parse_number<int>(key, v);
    } else if (key == "verbosity") {
      c.verbosity = parse_number<int>(key, v);
    } else if (key == "tie_break") {
      c.tie_break = parse_bool(key, v);
    } else if (key == "force_scheme") {
      for (auto entry : split(v, ';')) {
        if (entry.empty()) continue;
        const auto parts = split(entry, ':');
        if (parts.size() != 3) throw ConfigError("force_scheme entry must be i,j,k:k,l:kind");
        const auto idx = parse_int_list(parts[0]);
        const auto pair = parse_int_list(parts[1]);
        if (idx.size() != 3 || pair.size() != 2 || pair[0] == pair[1] || pair[0] < 0 || pair[1] < 0 || pair[0] > 2 ||
            pair[1] > 2)
          throw ConfigError("force_scheme entry must be i,j,k:k,l:kind with axes 0..2");
        c.overrides.push_back({{idx[0], idx[1], idx[2]}, pair[0], pair[1], parse_mixed_kind(parts[2])});
      }
    } else if (key == "pqr") {
      c.pqr = value;
    } else if (key == "level") {
      c.level = parse_number<double>(key, v);
    } else if (key == "eta") {
      c.eta = parse_number<double>(key, v);
    } else if (key == "margin") {
      c.margin = parse_number<double>(key, v);
    } else if (key == "t_end") {
      c.t_end = parse_number<double>(key, v);
    } else if (key == "r0") {
      c.r0 = parse_number<double>(key, v);
    } else if (key == "cfl") {
      c.cfl = parse_number<double>(key, v);
    } else if (key == "dt_h2") {
      c.dt_h2 = parse_number<double>(key, v);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  for (std::size_t i = 0; i < c.ns.size(); ++i) {
    if (c.ns[i] < 2) throw ConfigError("N must be at least 2");
    if (i > 0 && c.ns[i] <= c.ns[i - 1]) throw ConfigError("N sweep must be strictly increasing");
  }
  if (!(c.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (c.threads < 1) throw ConfigError("threads must be at least 1");
  if (!(c.eta > 0.0)) throw ConfigError("eta must be positive");
  if (!(c.cfl > 0.0) || c.cfl > 0.5) throw ConfigError("cfl must lie in (0, 0.5]");
  return c;
}

}  // namespace ccim::cli
