#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "savwave/experiments.hpp"
#include "savwave/model.hpp"
#include "savwave/sav_stepper.hpp"

namespace savwave::cli {

/// Invalid or unreadable configuration. The message names the offending key.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class Mode { Run, ConvergeTime, ConvergeSpace, Energy };

std::string_view to_string(Mode m);
Mode parse_mode(std::string_view name);

/// Initial data selector: the two reference examples, or zero data on the
/// first example's setup.
enum class Initial { Example1, Example2, Zero };

/// Every key the config document may carry.
const std::vector<std::string>& config_keys();

struct RunConfig {
  Mode mode = Mode::Run;
  Initial initial = Initial::Example1;
  Problem problem;  // grid has nx points per axis
  double tau = 0.01;
  int steps = 100;
  std::vector<double> tau_list;
  std::vector<int> n_list;
  std::vector<std::pair<double, double>> gamma_list;
  std::filesystem::path outdir = ".";
  int n_ref = 64;
  int k_ref = 1000;

  /// Example used for studies; the zero data has no study of its own.
  Example example() const;
  StudyConfig study() const;
};

/// Validates a flat JSON object into a RunConfig. Unknown keys, wrong types
/// and out-of-range values throw ConfigError.
RunConfig parse_config(const nlohmann::json& doc);

/// Reads a JSON document from disk.
nlohmann::json load_config_file(const std::filesystem::path& path);

/// Shallow merge; keys in `overlay` win. Setting one of tau/steps in the
/// overlay drops the other from `base`.
nlohmann::json merge_config(nlohmann::json base, const nlohmann::json& overlay);

/// 17 significant digits, enough to round-trip any double.
std::string format_number(double x);

std::string energy_csv(const std::vector<EnergyRecord>& records);
std::string errors_time_csv(const std::vector<ErrorRow>& rows);
std::string errors_space_csv(const std::vector<ErrorRow>& rows);

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

/// File name of one ledger of an energy study.
std::string energy_ledger_name(double gamma1, double gamma2);

/// Runs the configured mode, writing CSVs under cfg.outdir. Returns the
/// process exit code; progress lines go to `log` unless it is null.
int execute(const RunConfig& cfg, std::ostream* log);

}  // namespace savwave::cli
