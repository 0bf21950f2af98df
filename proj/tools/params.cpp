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

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "tagmatch/format.hpp"
#include "tagmatch/normalizer.hpp"

namespace tagmatch::cli {

CLI::Option* Params::flag(const std::string& name, bool& value, const std::string& help,
                          bool recorded) {
  CLI::Option* option = app_->add_flag("--" + name, value, help);
  entries_.push_back({name, option,
                      [&value, name](const Json& j) { value = detail::json_value<bool>(j, name); },
                      [&value] { return Json(value); }, recorded});
  return option;
}

void Params::apply(const Json& config) const {
  if (!config.is_object()) throw UsageError("config file must hold a JSON object");
  for (const auto& [key, value] : config.items()) {
    const auto it = std::find_if(entries_.begin(), entries_.end(),
                                 [&](const Entry& e) { return e.name == key; });
    if (it == entries_.end() || key == "config") {
      throw UsageError("unknown config key '" + key + "' for '" + app_->get_name() + "'");
    }
    if (it->option->count() == 0) it->load(value);
  }
}

Json Params::effective() const {
  Json out = Json::object();
  for (const Entry& e : entries_) {
    if (e.recorded) out[e.name] = e.dump();
  }
  return out;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("TAGMATCH_SEED");
  if (env == nullptr || *env == '\0') return 1;
  const std::string_view text(env);
  std::uint64_t seed = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("TAGMATCH_SEED must be an unsigned integer, got '" + std::string(text) + "'");
  }
  return seed;
}

void add_common(Params& params, Common& common, bool with_raw) {
  common.seed = default_seed();
  params.add("config", common.config_path, "Flat JSON file of option values", false);
  params.add("seed", common.seed, "Root seed (default: TAGMATCH_SEED or 1)");
  params.add("width", common.width, "Tag width in bits");
  params.add("metric", common.metric_names,
             "Metrics to run: hamming, hash, integer, integer-bi, streak (default: all)");
  params.add("out", common.out, "Output directory", false);
  params.add("jobs", common.jobs, "Worker threads; never changes results", false);
  params.add("table-samples", common.table_samples, "Random pairs per normalization table");
  params.add("tables", common.tables,
             "Directory of cached normalization tables, read if present and written otherwise",
             false);
  params.add("resamples", common.resamples, "Bootstrap resamples for confidence intervals");
  params.flag("quiet", common.quiet, "Suppress progress lines", false);
  if (with_raw) params.flag("raw", common.raw, "Use raw distances instead of normalized ones");
}

void finish_common(const Params& params, Common& common) {
  if (!common.config_path.empty()) {
    std::ifstream in(common.config_path, std::ios::binary);
    if (!in) throw UsageError("cannot read config file '" + common.config_path + "'");
    Json config;
    try {
      config = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw UsageError("config file '" + common.config_path + "' is not valid JSON: " + e.what());
    }
    params.apply(config);
  }

  if (common.width == 0) throw UsageError("--width must be positive");
  if (common.table_samples == 0) throw UsageError("--table-samples must be positive");
  if (common.resamples == 0) throw UsageError("--resamples must be positive");
  if (common.jobs == 0) throw UsageError("--jobs must be positive");

  common.metrics.clear();
  for (const std::string& entry : common.metric_names) {
    std::stringstream parts(entry);
    std::string name;
    while (std::getline(parts, name, ',')) {
      if (name.empty()) continue;
      const auto kind = parse_metric(name);
      if (!kind) throw UsageError("unknown metric '" + name + "'");
      if (std::find(common.metrics.begin(), common.metrics.end(), *kind) == common.metrics.end()) {
        common.metrics.push_back(*kind);
      }
    }
  }
  if (common.metrics.empty()) common.metrics.assign(kAllMetrics.begin(), kAllMetrics.end());
}

EngineRecord make_engine(MetricKind metric, const Common& common) {
  Json provenance = Json::object();
  provenance["metric"] = metric_name(metric);
  provenance["width"] = common.width;
  if (common.raw) {
    provenance["normalized"] = false;
    return {MatchEngine::raw(metric, common.width), provenance};
  }

  std::optional<NormalizationTable> table;
  if (!common.tables.empty()) {
    const std::filesystem::path path = std::filesystem::path(common.tables) /
                                       (std::string(metric_name(metric)) + "-w" +
                                        std::to_string(common.width) + ".table");
    if (std::filesystem::exists(path)) {
      table = load_table(path);
      log_line(common, "loaded table " + path.string());
    } else {
      RngStream rng = table_stream(metric, common.width, common.seed);
      table = build_table(metric, common.width, common.table_samples, rng);
      std::filesystem::create_directories(common.tables);
      save_table(*table, path);
      log_line(common, "wrote table " + path.string());
    }
  } else {
    RngStream rng = table_stream(metric, common.width, common.seed);
    table = build_table(metric, common.width, common.table_samples, rng);
  }
  provenance["normalized"] = true;
  provenance["table_sample_count"] = table->sample_count();
  provenance["table_build_seed"] = table->build_seed();
  const auto width = common.width;
  return {MatchEngine(metric, width, std::move(*table)), provenance};
}

void log_line(const Common& common, const std::string& message) {
  if (!common.quiet) std::cerr << "[tagmatch] " << message << '\n';
}

std::filesystem::path output_path(const Common& common, const std::string& name) {
  const std::filesystem::path dir(common.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + common.out + "'");
  return dir / name;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void write_json(const std::filesystem::path& path, const Json& json) {
  write_text(path, json.dump(2) + "\n");
}

CsvBuffer::CsvBuffer(std::vector<std::string> columns) : columns_(std::move(columns)) {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) text_ += ',';
    text_ += columns_[i];
  }
  text_ += '\n';
}

CsvBuffer& CsvBuffer::cell(const std::string& text) {
  if (column_ > 0) text_ += ',';
  text_ += text;
  ++column_;
  return *this;
}

CsvBuffer& CsvBuffer::cell(double value) { return cell(format_double(value)); }

CsvBuffer& CsvBuffer::cell(std::uint64_t value) { return cell(std::to_string(value)); }

void CsvBuffer::end_row() {
  if (column_ != columns_.size()) {
    throw std::logic_error("CSV row has " + std::to_string(column_) + " cells, expected " +
                           std::to_string(columns_.size()));
  }
  text_ += '\n';
  column_ = 0;
  ++rows_;
}

void write_csv(const Common& common, const std::string& name, const CsvBuffer& csv,
               const Json& provenance) {
  write_text(output_path(common, name), csv.text());
  Json sidecar = Json::object();
  sidecar["file"] = name;
  sidecar["columns"] = csv.columns();
  sidecar["rows"] = csv.rows();
  for (const auto& [key, value] : provenance.items()) sidecar[key] = value;
  write_json(output_path(common, name + ".json"), sidecar);
}

}  // namespace tagmatch::cli
