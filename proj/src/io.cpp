#include "freespec/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "freespec/error.hpp"
#include "freespec/transforms.hpp"

namespace freespec {

namespace {

using nlohmann::json;

double number(const json& j, const char* key, std::optional<double> fallback = std::nullopt) {
  auto it = j.find(key);
  if (it == j.end()) {
    if (fallback) return *fallback;
    fail(Errc::InvalidArgument, std::string("measure is missing '") + key + "'");
  }
  if (!it->is_number()) fail(Errc::InvalidArgument, std::string("'") + key + "' must be a number");
  return it->get<double>();
}

void only_keys(const json& j, std::initializer_list<const char*> keys) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = it.key() == "kind";
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) fail(Errc::InvalidArgument, "unknown measure field '" + it.key() + "'");
  }
}

Measure from_json(const json& j) {
  if (j.is_string()) return from_json(json{{"kind", j.get<std::string>()}});
  if (!j.is_object()) fail(Errc::InvalidArgument, "measure must be a JSON object or kind string");
  auto it = j.find("kind");
  if (it == j.end() || !it->is_string()) fail(Errc::InvalidArgument, "measure needs a string 'kind'");
  const std::string kind = it->get<std::string>();
  if (kind == "semicircle") {
    only_keys(j, {"variance"});
    return Measure::semicircle(number(j, "variance", 1.0));
  }
  if (kind == "arcsine") {
    only_keys(j, {});
    return Measure::arcsine();
  }
  if (kind == "kesten_mckay") {
    only_keys(j, {"eta"});
    return Measure::kesten_mckay(number(j, "eta"));
  }
  if (kind == "bernoulli") {
    only_keys(j, {});
    return Measure::bernoulli();
  }
  if (kind == "gaussian") {
    only_keys(j, {"sigma"});
    return Measure::gaussian(number(j, "sigma", 1.0));
  }
  if (kind == "orthopoly") {
    only_keys(j, {"a", "b"});
    return Measure::orthopoly(number(j, "a"), number(j, "b"));
  }
  if (kind == "dirac") {
    only_keys(j, {"c"});
    return Measure::dirac(number(j, "c", 0.0));
  }
  if (kind == "affine") {
    only_keys(j, {"scale", "shift", "base"});
    auto b = j.find("base");
    if (b == j.end()) fail(Errc::InvalidArgument, "affine measure needs 'base'");
    return Measure::affine(number(j, "scale", 1.0), number(j, "shift", 0.0), from_json(*b));
  }
  fail(Errc::InvalidArgument, "unknown measure kind '" + kind + "'");
}

json to_json(const Measure& m) {
  return std::visit(
      [&](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        json j{{"kind", m.name()}};
        if constexpr (std::is_same_v<K, Semicircle>) j["variance"] = k.variance;
        else if constexpr (std::is_same_v<K, KestenMcKay>) j["eta"] = k.eta;
        else if constexpr (std::is_same_v<K, Gaussian>) j["sigma"] = k.sigma;
        else if constexpr (std::is_same_v<K, OrthoPoly>) {
          j["a"] = k.a;
          j["b"] = k.b;
        } else if constexpr (std::is_same_v<K, Dirac>) j["c"] = k.c;
        else if constexpr (std::is_same_v<K, Affine>) {
          j["scale"] = k.scale;
          j["shift"] = k.shift;
          j["base"] = to_json(*k.base);
        }
        return j;
      },
      m.kind());
}

double parse_number(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || s.empty()) fail(Errc::Usage, "cannot parse " + what + " from '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Measure parse_measure(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(Errc::InvalidArgument, std::string("invalid measure JSON: ") + e.what());
  }
  return from_json(j);
}

Measure load_measure(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(Errc::Io, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_measure(ss.str());
}

std::string serialize_measure(const Measure& m) { return to_json(m).dump(); }

std::vector<double> parse_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) fail(Errc::Usage, "grid must be lo:hi:n, got '" + spec + "'");
  const double lo = parse_number(parts[0], "grid lo"), hi = parse_number(parts[1], "grid hi");
  const double n = parse_number(parts[2], "grid n");
  if (!(n >= 2) || n != std::floor(n)) fail(Errc::Usage, "grid n must be an integer >= 2");
  if (!(hi > lo)) fail(Errc::Usage, "grid needs hi > lo");
  return linspace(lo, hi, std::size_t(n));
}

WindowSpec parse_window(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 2) fail(Errc::Usage, "window must be lo:hi, got '" + spec + "'");
  WindowSpec w{parse_number(parts[0], "window lo"), parse_number(parts[1], "window hi")};
  if (!(w.hi > w.lo)) fail(Errc::Usage, "window needs hi > lo");
  return w;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

void write_csv(const std::string& path, const CsvTable& t, std::uint64_t seed, const std::string& cmd) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(Errc::Io, "cannot open '" + path + "' for writing");
  os << "# freespec v" << FREESPEC_VERSION << " seed=" << seed << " cmd=" << cmd << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& r : t.rows) {
    require(r.size() == t.columns.size(), Errc::DimensionMismatch, "row width differs from the header");
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
    os << "\n";
  }
  if (!os) fail(Errc::Io, "write to '" + path + "' failed");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(Errc::Io, "cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line, ',');
    if (!header) {
      t.columns = cells;
      header = true;
      continue;
    }
    if (cells.size() != t.columns.size()) fail(Errc::Io, "ragged row in '" + path + "'");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      if (c == "nan") row.push_back(NAN);
      else row.push_back(parse_number(c, "CSV cell"));
    }
    t.rows.push_back(std::move(row));
  }
  if (!header) fail(Errc::Io, "'" + path + "' has no header");
  return t;
}

}  // namespace freespec
