#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "npl/field.hpp"

namespace npl::cli {

/// Bad command line or configuration; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ValueType { integer, real, complex, text, real_list, complex_list };

using Value = std::variant<long long, double, cplx, std::string, std::vector<double>, std::vector<cplx>>;

struct KeySpec {
  std::string name;
  ValueType type;
  std::optional<std::string> default_value;  // nullopt: required or optional, see below
  std::vector<std::string> commands;          // commands that accept the key
  std::vector<std::string> required_for;      // commands that need it without a default
  std::vector<std::string> choices;           // non-empty for tags
  std::string help;
};

const std::vector<std::string>& command_names();
const std::vector<KeySpec>& key_specs();
const KeySpec* find_key(std::string_view name);

Value parse_value(const KeySpec& spec, std::string_view text);
std::string format_value(const Value& value);
cplx parse_complex(std::string_view text);
std::string format_complex(cplx z);

/// Raw key/value pairs before validation, in insertion order of the source.
using RawEntries = std::vector<std::pair<std::string, std::string>>;

/// Flat `key = value` file; '#' starts a comment, blank lines are ignored.
RawEntries read_config_file(const std::string& path);

/// Fully validated configuration: every key accepted by the command is
/// present, defaults filled in. Optional keys without a default appear only
/// when given.
struct RunConfig {
  std::string command;
  std::map<std::string, Value> values;

  bool has(const std::string& key) const { return values.count(key) != 0; }
  long long integer(const std::string& key) const;
  double real(const std::string& key) const;
  cplx complex(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  const std::vector<double>& reals(const std::string& key) const;
  const std::vector<cplx>& complexes(const std::string& key) const;

  bool operator==(const RunConfig&) const = default;
};

/// Merges file entries and flag entries (flags win) and validates them for
/// `command`. Unknown keys, keys the command does not accept, missing
/// required keys and malformed values raise UsageError naming the key.
/// NPL_QUAD_ORDER, when set, replaces the built-in quad_order default.
RunConfig resolve_config(const std::string& command, const RawEntries& file_entries,
                         const RawEntries& flag_entries);

nlohmann::ordered_json config_to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

}  // namespace npl::cli
