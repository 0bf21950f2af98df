/*
 * Copyright 2026 The tagmatch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tagmatch/match_engine.hpp"
#include "tagmatch/metrics.hpp"

namespace tagmatch::cli {

using Json = nlohmann::ordered_json;

/// Bad flag or config value; reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Options that exist both as `--name` flags and as `"name"` keys of the JSON
/// config file. Flags win over the file.
class Params {
 public:
  explicit Params(CLI::App& app) : app_(&app) {}

  template <typename T>
  CLI::Option* add(const std::string& name, T& value, const std::string& help,
                   bool recorded = true);
  CLI::Option* flag(const std::string& name, bool& value, const std::string& help,
                    bool recorded = true);

  /// Fills every option not given on the command line from `config`.
  void apply(const Json& config) const;
  /// Effective values of the recorded options, in declaration order.
  Json effective() const;

 private:
  struct Entry {
    std::string name;
    CLI::Option* option;
    std::function<void(const Json&)> load;
    std::function<Json()> dump;
    bool recorded;
  };
  CLI::App* app_;
  std::vector<Entry> entries_;
};

/// Options shared by every subcommand.
struct Common {
  std::string config_path;
  std::uint64_t seed = 1;
  std::size_t width = 32;
  std::vector<std::string> metric_names;
  std::string out = ".";
  std::size_t jobs = 1;
  bool raw = false;
  std::size_t table_samples = 10'000;
  std::string tables;
  std::size_t resamples = 10'000;
  bool quiet = false;

  std::vector<MetricKind> metrics;  // resolved from metric_names
};

/// Registers the shared options. `with_raw` adds the raw/normalized switch.
void add_common(Params& params, Common& common, bool with_raw);

/// Loads the config file named by --config (if any), applies it and resolves
/// the metric list. Throws UsageError on any invalid input.
void finish_common(const Params& params, Common& common);

/// Root seed default: TAGMATCH_SEED when set, else 1.
std::uint64_t default_seed();

struct EngineRecord {
  MatchEngine engine;
  Json provenance;
};

/// Engine for `metric` under the common options. Tables come from --tables
/// when present there, and are otherwise built from the root seed.
EngineRecord make_engine(MetricKind metric, const Common& common);

void log_line(const Common& common, const std::string& message);

/// Creates the output directory and returns the path of `name` inside it.
std::filesystem::path output_path(const Common& common, const std::string& name);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& json);

/// CSV text with a header row, LF line endings and shortest round-trip
/// floats.
class CsvBuffer {
 public:
  explicit CsvBuffer(std::vector<std::string> columns);
  CsvBuffer& cell(const std::string& text);
  CsvBuffer& cell(std::string_view text) { return cell(std::string(text)); }
  CsvBuffer& cell(const char* text) { return cell(std::string(text)); }
  CsvBuffer& cell(double value);
  CsvBuffer& cell(std::uint64_t value);
  CsvBuffer& cell(int value) { return cell(static_cast<std::uint64_t>(value)); }
  void end_row();
  std::size_t rows() const noexcept { return rows_; }
  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::string& text() const noexcept { return text_; }

 private:
  std::vector<std::string> columns_;
  std::string text_;
  std::size_t column_ = 0;
  std::size_t rows_ = 0;
};

/// Writes `csv` to `name` plus a `name.json` sidecar holding `provenance`.
void write_csv(const Common& common, const std::string& name, const CsvBuffer& csv,
               const Json& provenance);

void register_normalize(CLI::App& app, std::function<void()>& run);
void register_geometry(CLI::App& app, std::function<void()>& run);
void register_variation(CLI::App& app, std::function<void()>& run);
void register_evolve(CLI::App& app, std::function<void()>& run);

// Template definitions.

namespace detail {

template <typename T>
T json_value(const Json& j, const std::string& name) {
  const auto bad = [&] { return UsageError("config key '" + name + "' has the wrong type"); };
  if constexpr (std::is_same_v<T, bool>) {
    if (!j.is_boolean()) throw bad();
    return j.get<bool>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_integer()) throw bad();
    if (j.is_number_unsigned()) return static_cast<T>(j.get<std::uint64_t>());
    if (j.get<std::int64_t>() < 0) throw UsageError("config key '" + name + "' must be >= 0");
    return static_cast<T>(j.get<std::int64_t>());
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!j.is_number()) throw bad();
    return j.get<T>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!j.is_string()) throw bad();
    return j.get<std::string>();
  } else {
    // std::vector<U>: a JSON array, or a single scalar as a one-element list.
    using U = typename T::value_type;
    T out;
    if (j.is_array()) {
      for (const auto& item : j) out.push_back(json_value<U>(item, name));
    } else {
      out.push_back(json_value<U>(j, name));
    }
    return out;
  }
}

}  // namespace detail

template <typename T>
CLI::Option* Params::add(const std::string& name, T& value, const std::string& help,
                         bool recorded) {
  CLI::Option* option = app_->add_option("--" + name, value, help)->capture_default_str();
  if constexpr (!std::is_same_v<T, std::string> && !std::is_arithmetic_v<T>) {
    option->delimiter(',');
  }
  entries_.push_back({name, option,
                      [&value, name](const Json& j) { value = detail::json_value<T>(j, name); },
                      [&value] { return Json(value); }, recorded});
  return option;
}

}  // namespace tagmatch::cli
