#include "npl_cli/config.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace npl::cli {

namespace {

using V = ValueType;

const std::vector<std::string> kAll{"roots", "modes", "verify", "energy", "decay", "mms", "dispersion", "sweep"};
const std::vector<std::string> kProblem{"modes", "verify", "energy", "decay", "mms", "sweep"};
const std::vector<std::string> kMode{"verify", "energy", "decay"};

std::vector<KeySpec> build_specs() {
  std::vector<KeySpec> s;
  auto add = [&](std::string name, V type, std::optional<std::string> def, std::vector<std::string> commands,
                 std::vector<std::string> required, std::vector<std::string> choices, std::string help) {
    s.push_back({std::move(name), type, std::move(def), std::move(commands), std::move(required),
                 std::move(choices), std::move(help)});
  };
  add("output_path", V::text, "", kAll, {}, {}, "output file (stdout when empty)");
  add("format", V::text, "json", kAll, {}, {"json", "csv"}, "report format");
  add("seed", V::integer, "42", kAll, {}, {}, "seed for random collocation points");
  add("quad_order", V::integer, "32", kAll, {}, {}, "Gauss-Legendre points per axis");

  add("variant", V::text, "problem2", kProblem, {}, {"problem1", "problem2", "problem3"}, "problem variant");
  add("convention", V::text, "corrected", kProblem, {}, {"corrected", "paper_literal"}, "lambda/exponent convention");
  add("m", V::real, "1", kProblem, {}, {}, "y-degeneracy exponent");
  add("n", V::real, "1", kProblem, {}, {}, "x-degeneracy exponent");
  add("alpha", V::complex, "0.5", {"modes", "verify", "energy", "decay", "mms", "dispersion"}, {}, {},
      "non-local weight alpha");
  add("lambda", V::complex, std::nullopt, {"verify", "energy"}, {}, {},
      "spectral parameter (problem3) or lambda override in the energy functional");

  add("nu", V::real, std::nullopt, {"roots"}, {"roots"}, {}, "Bessel order");
  add("count", V::integer, std::nullopt, {"roots"}, {"roots"}, {}, "number of zeros");

  add("kmax", V::integer, std::nullopt, {"modes", "sweep"}, {"modes", "sweep"}, {}, "largest x-index");
  add("pmax", V::integer, std::nullopt, {"modes", "sweep"}, {"modes", "sweep"}, {}, "largest y-index");
  add("smax", V::integer, "0", {"modes", "sweep"}, {}, {}, "temporal branches -smax..smax");
  add("alphas", V::complex_list, std::nullopt, {"sweep"}, {"sweep"}, {}, "comma-separated alpha values");

  add("k", V::integer, std::nullopt, kMode, {"decay"}, {}, "x-index of the mode");
  add("p", V::integer, std::nullopt, kMode, {"decay"}, {}, "y-index of the mode");
  add("s", V::integer, "0", {"verify", "energy", "decay", "dispersion"}, {}, {}, "temporal branch index");
  add("points", V::integer, "200", {"verify", "sweep"}, {}, {}, "random collocation points");
  add("tolerance", V::real, std::nullopt, {"verify", "energy", "decay", "dispersion", "sweep"}, {}, {},
      "pass/fail threshold");

  add("nx", V::integer, "16", {"decay"}, {}, {}, "cells in x");
  add("ny", V::integer, "16", {"decay"}, {}, {}, "cells in y");
  add("nt", V::integer, "32", {"decay"}, {}, {}, "time steps");
  add("t_end", V::real, "1", {"decay", "mms"}, {}, {}, "final time");
  add("refinements", V::integer, "2", {"decay"}, {}, {}, "number of grid doublings");
  add("refine", V::text, "time", {"decay"}, {}, {"time", "space"}, "refined direction");
  add("base_cells", V::integer, "16", {"mms"}, {}, {}, "cells per axis on the coarsest level");
  add("levels", V::integer, "3", {"mms"}, {}, {}, "refinement levels");
  add("order_min", V::real, "1.7", {"mms"}, {}, {}, "lowest accepted order");
  add("order_max", V::real, "2.3", {"mms"}, {}, {}, "highest accepted order");

  for (int i = 1; i <= 6; ++i)
    add("k" + std::to_string(i), V::real, std::nullopt, {"verify", "energy", "dispersion"}, {"dispersion"}, {},
        "coupling coefficient k" + std::to_string(i));
  add("re_min", V::real, std::nullopt, {"dispersion"}, {"dispersion"}, {}, "scan region, real part low");
  add("re_max", V::real, std::nullopt, {"dispersion"}, {"dispersion"}, {}, "scan region, real part high");
  add("im_min", V::real, "0", {"dispersion"}, {}, {}, "scan region, imaginary part low");
  add("im_max", V::real, "0", {"dispersion"}, {}, {}, "scan region, imaginary part high");
  add("density_re", V::integer, "512", {"dispersion"}, {}, {}, "samples along the real axis");
  add("density_im", V::integer, "1", {"dispersion"}, {}, {}, "samples along the imaginary axis");
  add("threads", V::integer, "0", {"dispersion", "sweep"}, {}, {}, "worker threads (0: automatic)");
  return s;
}

double default_tolerance(const std::string& command) {
  if (command == "decay") return 0.05;
  if (command == "dispersion") return 1e-7;
  return 1e-8;
}

struct IntRange {
  const char* key;
  long long lo, hi;
};

constexpr IntRange kIntRanges[] = {
    {"seed", 0, (1LL << 62)}, {"quad_order", 2, 64}, {"count", 1, 200}, {"kmax", 1, 50},
    {"pmax", 1, 50},          {"smax", 0, 50},       {"k", 1, 200},      {"p", 1, 200},
    {"s", -1000, 1000},       {"points", 1, 100000}, {"nx", 2, 4096},    {"ny", 2, 4096},
    {"nt", 1, 100000},        {"refinements", 1, 6}, {"base_cells", 4, 512}, {"levels", 2, 6},
    {"density_re", 1, 512},   {"density_im", 1, 512}, {"threads", 0, 64},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_real(std::string_view text) {
  const std::string t = trim(text);
  if (t.empty()) throw UsageError("empty number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
    throw UsageError("malformed number '" + t + "'");
  return v;
}

long long parse_integer(std::string_view text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) throw UsageError("malformed integer '" + t + "'");
  return v;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::string format_real(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

const std::vector<std::string>& command_names() { return kAll; }

const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs = build_specs();
  return specs;
}

const KeySpec* find_key(std::string_view name) {
  for (const KeySpec& k : key_specs())
    if (k.name == name) return &k;
  return nullptr;
}

cplx parse_complex(std::string_view text) {
  std::string t;
  for (char c : text)
    if (c != ' ' && c != '\t') t.push_back(c);
  if (t.empty()) throw UsageError("empty complex number");
  if (t.back() != 'i' && t.back() != 'j') return {parse_real(t), 0.0};
  t.pop_back();
  // Split before the last sign that is not an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t i = t.size(); i-- > 1;) {
    if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_part = [](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_real(s);
  };
  if (split == std::string::npos) return {0.0, imag_part(t)};
  return {parse_real(t.substr(0, split)), imag_part(t.substr(split))};
}

std::string format_complex(cplx z) {
  const std::string im = format_real(z.imag());
  return format_real(z.real()) + (im.front() == '-' ? "" : "+") + im + "i";
}

Value parse_value(const KeySpec& spec, std::string_view text) {
  try {
    switch (spec.type) {
      case V::integer: return parse_integer(text);
      case V::real: return parse_real(text);
      case V::complex: return parse_complex(text);
      case V::text: {
        std::string t = trim(text);
        if (!spec.choices.empty() && std::find(spec.choices.begin(), spec.choices.end(), t) == spec.choices.end())
          throw UsageError("'" + t + "' is not one of the accepted values");
        return t;
      }
      case V::real_list: {
        std::vector<double> out;
        for (const auto& item : split_list(text)) out.push_back(parse_real(item));
        return out;
      }
      case V::complex_list: {
        std::vector<cplx> out;
        for (const auto& item : split_list(text)) out.push_back(parse_complex(item));
        return out;
      }
    }
  } catch (const UsageError& e) {
    throw UsageError("invalid value for key '" + spec.name + "': " + e.what());
  }
  throw UsageError("invalid value for key '" + spec.name + "'");
}

std::string format_value(const Value& value) {
  struct Visitor {
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_real(v); }
    std::string operator()(cplx v) const { return format_complex(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(const std::vector<double>& v) const {
      std::string out;
      for (double x : v) out += (out.empty() ? "" : ",") + format_real(x);
      return out;
    }
    std::string operator()(const std::vector<cplx>& v) const {
      std::string out;
      for (cplx x : v) out += (out.empty() ? "" : ",") + format_complex(x);
      return out;
    }
  };
  return std::visit(Visitor{}, value);
}

RawEntries read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  RawEntries out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(number) + ": expected 'key = value'");
    std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw UsageError(path + ":" + std::to_string(number) + ": empty key");
    out.emplace_back(std::move(key), trim(std::string_view(line).substr(eq + 1)));
  }
  return out;
}

template <class T>
static const T& get(const RunConfig& c, const std::string& key) {
  auto it = c.values.find(key);
  if (it == c.values.end()) throw UsageError("missing required key '" + key + "'");
  return std::get<T>(it->second);
}

long long RunConfig::integer(const std::string& key) const { return get<long long>(*this, key); }
double RunConfig::real(const std::string& key) const { return get<double>(*this, key); }
cplx RunConfig::complex(const std::string& key) const { return get<cplx>(*this, key); }
const std::string& RunConfig::text(const std::string& key) const { return get<std::string>(*this, key); }
const std::vector<double>& RunConfig::reals(const std::string& key) const {
  return get<std::vector<double>>(*this, key);
}
const std::vector<cplx>& RunConfig::complexes(const std::string& key) const {
  return get<std::vector<cplx>>(*this, key);
}

RunConfig resolve_config(const std::string& command, const RawEntries& file_entries, const RawEntries& flag_entries) {
  if (std::find(kAll.begin(), kAll.end(), command) == kAll.end())
    throw UsageError("unknown command '" + command + "'");

  std::map<std::string, std::string> merged;
  for (const auto* source : {&file_entries, &flag_entries}) {
    for (const auto& [key, value] : *source) {
      if (key == "command") {
        if (value != command)
          throw UsageError("key 'command' is '" + value + "' but the command is '" + command + "'");
        continue;
      }
      const KeySpec* spec = find_key(key);
      if (!spec) throw UsageError("unknown key '" + key + "'");
      if (std::find(spec->commands.begin(), spec->commands.end(), command) == spec->commands.end())
        throw UsageError("key '" + key + "' is not accepted by command '" + command + "'");
      merged[key] = value;
    }
  }

  RunConfig config;
  config.command = command;
  for (const KeySpec& spec : key_specs()) {
    if (std::find(spec.commands.begin(), spec.commands.end(), command) == spec.commands.end()) continue;
    auto it = merged.find(spec.name);
    if (it != merged.end()) {
      config.values[spec.name] = parse_value(spec, it->second);
      continue;
    }
    if (std::find(spec.required_for.begin(), spec.required_for.end(), command) != spec.required_for.end())
      throw UsageError("missing required key '" + spec.name + "'");
    if (spec.name == "tolerance") {
      config.values[spec.name] = default_tolerance(command);
    } else if (spec.name == "quad_order" && std::getenv("NPL_QUAD_ORDER")) {
      try {
        config.values[spec.name] = parse_value(spec, std::getenv("NPL_QUAD_ORDER"));
      } catch (const UsageError& e) {
        throw UsageError(std::string("NPL_QUAD_ORDER: ") + e.what());
      }
    } else if (spec.default_value) {
      config.values[spec.name] = parse_value(spec, *spec.default_value);
    }
  }

  for (const IntRange& r : kIntRanges) {
    auto it = config.values.find(r.key);
    if (it == config.values.end()) continue;
    const long long v = std::get<long long>(it->second);
    if (v < r.lo || v > r.hi)
      throw UsageError("key '" + std::string(r.key) + "' must lie in [" + std::to_string(r.lo) + ", " +
                       std::to_string(r.hi) + "]");
  }
  for (const char* key : {"m", "n", "t_end", "tolerance"}) {
    if (config.has(key) && !(config.real(key) > 0.0))
      throw UsageError("key '" + std::string(key) + "' must be > 0");
  }
  if (config.has("alpha") && std::abs(config.complex("alpha")) == 0.0)
    throw UsageError("key 'alpha' must be non-zero");
  if (config.has("alphas"))
    for (cplx a : config.complexes("alphas"))
      if (std::abs(a) == 0.0) throw UsageError("key 'alphas' must not contain zero");
  if (command == "dispersion") {
    if (config.complex("alpha").imag() != 0.0) throw UsageError("key 'alpha' must be real for dispersion");
    if (!(config.real("re_min") <= config.real("re_max")) || !(config.real("im_min") <= config.real("im_max")))
      throw UsageError("key 're_min'/'im_min' must not exceed 're_max'/'im_max'");
  }
  if (config.has("variant")) {
    const std::string& v = config.text("variant");
    if (v == "problem1" && config.has("alpha") && config.complex("alpha").imag() != 0.0)
      throw UsageError("key 'alpha' must be real for problem1");
    if (v == "problem3") {
      if (command != "verify" && command != "energy")
        throw UsageError("key 'variant' = problem3 is handled by verify, energy and dispersion");
      if (!config.has("lambda")) throw UsageError("missing required key 'lambda'");
      for (int i = 1; i <= 6; ++i)
        if (!config.has("k" + std::to_string(i)))
          throw UsageError("missing required key 'k" + std::to_string(i) + "'");
    }
    if (v != "problem3" && command != "modes" && command != "sweep" && command != "mms") {
      for (const char* key : {"k", "p"})
        if (!config.has(key)) throw UsageError("missing required key '" + std::string(key) + "'");
    }
  }
  return config;
}

nlohmann::ordered_json config_to_json(const RunConfig& config) {
  nlohmann::ordered_json j;
  j["command"] = config.command;
  for (const auto& [key, value] : config.values) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, cplx>) {
            j[key] = format_complex(v);
          } else if constexpr (std::is_same_v<T, std::vector<cplx>>) {
            auto arr = nlohmann::ordered_json::array();
            for (cplx z : v) arr.push_back(format_complex(z));
            j[key] = arr;
          } else {
            j[key] = v;
          }
        },
        value);
  }
  return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("command") || !j["command"].is_string())
    throw UsageError("config object must contain a 'command' string");
  RawEntries entries;
  for (const auto& [key, value] : j.items()) {
    if (key == "command") continue;
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_number_integer()) {
      text = std::to_string(value.get<long long>());
    } else if (value.is_number()) {
      text = format_real(value.get<double>());
    } else if (value.is_array()) {
      for (const auto& item : value) {
        if (!text.empty()) text += ",";
        text += item.is_string() ? item.get<std::string>() : format_real(item.get<double>());
      }
    } else {
      throw UsageError("config key '" + key + "' has an unsupported JSON type");
    }
    entries.emplace_back(key, text);
  }
  return resolve_config(j["command"].get<std::string>(), entries, {});
}

}  // namespace npl::cli
