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

#include <algorithm>
#include <memory>
#include <sstream>

#include "cli.hpp"
#include "tagmatch/geometry.hpp"
#include "tagmatch/graph_evolve.hpp"
#include "tagmatch/mutation.hpp"
#include "tagmatch/normalizer.hpp"
#include "tagmatch/parallel.hpp"
#include "tagmatch/stats.hpp"

namespace tagmatch::cli {

namespace {

Json summary_json(const Summary& s) {
  Json j = Json::object();
  j["count"] = s.count;
  j["mean"] = s.mean;
  j["sd"] = s.sd;
  j["min"] = s.min;
  j["max"] = s.max;
  j["ci_lo"] = s.ci_lo;
  j["ci_hi"] = s.ci_hi;
  return j;
}

RngStream keyed_stream(std::uint64_t seed, const std::string& label) {
  return derive_stream(seed, stream_key(label));
}

std::string width_label(const Common& common) { return std::to_string(common.width); }

Json header(const std::string& command, const Params& params) {
  Json j = Json::object();
  j["command"] = command;
  j["config"] = params.effective();
  return j;
}

// Expands "all" to every listed choice and rejects anything else.
std::vector<std::string> choices(const std::string& value, const std::string& flag,
                                 const std::vector<std::string>& allowed) {
  if (value == "all") return allowed;
  if (std::find(allowed.begin(), allowed.end(), value) == allowed.end()) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw UsageError("--" + flag + " must be one of: " + list + ", all (got '" + value + "')");
  }
  return {value};
}

// ---------------------------------------------------------------------------
// normalize

struct NormalizeOptions {
  Common common;
  std::size_t validation_samples = 10'000;
};

void run_normalize(const Params& params, NormalizeOptions& opt) {
  finish_common(params, opt.common);
  const Common& c = opt.common;
  if (opt.validation_samples == 0) throw UsageError("--validation-samples must be positive");

  Json report = header("normalize", params);
  report["tables"] = Json::array();
  for (const MetricKind metric : c.metrics) {
    const std::string name = std::string(metric_name(metric));
    RngStream build = table_stream(metric, c.width, c.seed);
    const NormalizationTable table = build_table(metric, c.width, c.table_samples, build);
    const std::string file = name + "-w" + width_label(c) + ".table";
    save_table(table, output_path(c, file));

    RngStream fresh = keyed_stream(c.seed, "normalize-validate/" + name + "/" + width_label(c));
    std::vector<double> values(opt.validation_samples);
    for (double& v : values) {
      const Tag t = new_random_tag(c.width, fresh);
      const Tag u = new_random_tag(c.width, fresh);
      v = table.normalize(raw_distance(metric, t, u));
    }
    const double ks = ks_uniform_statistic(values);
    log_line(c, "normalize " + name + ": wrote " + file + ", ks " + std::to_string(ks));

    Json entry = Json::object();
    entry["metric"] = name;
    entry["width"] = c.width;
    entry["file"] = file;
    entry["sample_count"] = table.sample_count();
    entry["build_seed"] = table.build_seed();
    entry["validation_samples"] = opt.validation_samples;
    entry["ks_statistic"] = ks;
    report["tables"].push_back(entry);
  }
  write_json(output_path(c, "normalize_report.json"), report);
}

// ---------------------------------------------------------------------------
// geometry

struct GeometryCliOptions {
  Common common;
  std::string stat = "all";
  std::size_t samples = 5'000;
  double radius = 0.01;
  double inner = 0.01;
  double outer = 0.99;
  bool swap_pair_order = false;
  std::uint64_t max_attempts = kDefaultMaxAttempts;
};

void run_geometry(const Params& params, GeometryCliOptions& opt) {
  finish_common(params, opt.common);
  const Common& c = opt.common;
  const auto stats = choices(opt.stat, "stat", {"similarity", "dissimilarity", "detour"});
  if (opt.samples == 0) throw UsageError("--samples must be positive");
  if (!(opt.radius > 0.0 && opt.radius < 1.0)) throw UsageError("--radius must lie in (0, 1)");
  if (!(opt.inner > 0.0 && opt.inner < opt.outer && opt.outer < 1.0)) {
    throw UsageError("--inner and --outer must satisfy 0 < inner < outer < 1");
  }
  if (opt.max_attempts == 0) throw UsageError("--max-attempts must be positive");

  GeometryOptions gopt;
  gopt.max_attempts = opt.max_attempts;
  gopt.swap_pair_order = opt.swap_pair_order;
  gopt.jobs = c.jobs;

  std::vector<EngineRecord> engines;
  Json tables = Json::array();
  for (const MetricKind metric : c.metrics) {
    engines.push_back(make_engine(metric, c));
    tables.push_back(engines.back().provenance);
  }

  Json summary = header("geometry", params);
  summary["engines"] = tables;
  summary["results"] = Json::array();
  Json provenance = header("geometry", params);
  provenance["engines"] = tables;

  for (const std::string& stat : stats) {
    const bool detour = stat == "detour";
    CsvBuffer csv = detour ? CsvBuffer({"metric", "width", "sample_id", "statistic", "attempts",
                                        "tag_a", "tag_b", "tag_c", "d_ab", "d_bc", "d_ac"})
                           : CsvBuffer({"metric", "width", "sample_id", "statistic", "attempts",
                                        "target", "first", "second", "first_attempts",
                                        "second_attempts"});
    for (std::size_t m = 0; m < c.metrics.size(); ++m) {
      const std::string name(metric_name(c.metrics[m]));
      const MatchEngine& engine = engines[m].engine;
      const RngStream rng =
          keyed_stream(c.seed, "geometry/" + stat + "/" + name + "/" + width_label(c));
      std::vector<GeometrySample> samples;
      if (stat == "similarity") {
        samples = sample_similarity_constraint(engine, opt.radius, opt.samples, rng, gopt);
      } else if (stat == "dissimilarity") {
        samples =
            sample_dissimilarity_constraint(engine, opt.inner, opt.outer, opt.samples, rng, gopt);
      } else {
        samples = sample_detour_difference(engine, opt.samples, rng, gopt);
      }

      std::vector<double> values;
      values.reserve(samples.size());
      double attempts = 0.0;
      std::size_t negative = 0;
      std::size_t extreme = 0;
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const GeometrySample& s = samples[i];
        values.push_back(s.statistic);
        attempts += static_cast<double>(s.attempts + s.second_attempts);
        negative += s.statistic < 0.0 ? 1 : 0;
        extreme += (s.statistic < 0.05 || s.statistic > 0.95) ? 1 : 0;
        csv.cell(name).cell(c.width).cell(std::uint64_t{i}).cell(s.statistic);
        csv.cell(s.attempts + s.second_attempts);
        csv.cell(s.target.to_hex()).cell(s.first.to_hex()).cell(s.second->to_hex());
        if (detour) {
          csv.cell(s.legs[0]).cell(s.legs[1]).cell(s.legs[2]);
        } else {
          csv.cell(s.attempts).cell(s.second_attempts);
        }
        csv.end_row();
      }

      RngStream boot = keyed_stream(c.seed, "geometry-summary/" + stat + "/" + name);
      const Summary sum = summarize(values, boot, c.resamples);
      const auto n = static_cast<double>(samples.size());
      Json entry = Json::object();
      entry["stat"] = stat;
      entry["metric"] = name;
      entry["summary"] = summary_json(sum);
      entry["fraction_negative"] = static_cast<double>(negative) / n;
      entry["fraction_below_0.05_or_above_0.95"] = static_cast<double>(extreme) / n;
      if (!detour) {
        entry["mean_attempts_per_tag"] = attempts / (2.0 * n);
        std::vector<double> clamped(values);
        for (double& v : clamped) v = std::clamp(v, 0.0, 1.0);
        entry["ks_uniform"] = ks_uniform_statistic(clamped);
      }
      summary["results"].push_back(entry);
      log_line(c, "geometry " + stat + " " + name + ": mean " + std::to_string(sum.mean));
    }
    write_csv(c, "geometry_" + stat + ".csv", csv, provenance);
  }
  write_json(output_path(c, "geometry_summary.json"), summary);
}

// ---------------------------------------------------------------------------
// variation

struct VariationOptions {
  Common common;
  std::string mode = "all";
  std::string regime = "all";
  std::string start = "all";
  std::size_t samples = 5'000;
  std::size_t walks = 1'000;
  std::size_t steps = 65;
  std::uint64_t max_attempts = kDefaultMaxAttempts;
};

void run_variation(const Params& params, VariationOptions& opt) {
  finish_common(params, opt.common);
  const Common& c = opt.common;
  const auto modes = choices(opt.mode, "mode", {"step", "walk"});
  const auto regimes = choices(opt.regime, "regime", {"loose", "tight"});
  const auto starts = choices(opt.start, "start", {"identical", "sampled-close"});
  if (opt.samples == 0) throw UsageError("--samples must be positive");
  if (opt.walks < 2) throw UsageError("--walks must be at least 2");
  if (opt.steps == 0) throw UsageError("--steps must be positive");
  if (opt.max_attempts == 0) throw UsageError("--max-attempts must be positive");

  std::vector<EngineRecord> engines;
  Json tables = Json::array();
  for (const MetricKind metric : c.metrics) {
    engines.push_back(make_engine(metric, c));
    tables.push_back(engines.back().provenance);
  }
  Json summary = header("variation", params);
  summary["engines"] = tables;
  Json provenance = header("variation", params);
  provenance["engines"] = tables;

  const bool run_steps = std::find(modes.begin(), modes.end(), "step") != modes.end();
  const bool run_walks = std::find(modes.begin(), modes.end(), "walk") != modes.end();

  if (run_steps) {
    CsvBuffer csv({"metric", "width", "regime", "sample_id", "pre", "post", "perturbation"});
    summary["steps"] = Json::array();
    MutationOptions mopt;
    mopt.max_attempts = opt.max_attempts;
    mopt.jobs = c.jobs;
    for (std::size_t m = 0; m < c.metrics.size(); ++m) {
      const std::string name(metric_name(c.metrics[m]));
      for (const std::string& regime_text : regimes) {
        const Regime regime = *parse_regime(regime_text);
        const RngStream rng =
            keyed_stream(c.seed, "variation/step/" + regime_text + "/" + name + "/" +
                                     width_label(c));
        const auto samples = sample_single_step(engines[m].engine, regime, opt.samples, rng, mopt);
        std::vector<double> perturbations;
        std::size_t up = 0, down = 0, neutral = 0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
          const StepSample& s = samples[i];
          perturbations.push_back(s.perturbation);
          up += s.perturbation > 0.0 ? 1 : 0;
          down += s.perturbation < 0.0 ? 1 : 0;
          neutral += s.perturbation == 0.0 ? 1 : 0;
          csv.cell(name).cell(c.width).cell(regime_text).cell(std::uint64_t{i});
          csv.cell(s.pre_distance).cell(s.post_distance).cell(s.perturbation);
          csv.end_row();
        }
        RngStream boot = keyed_stream(c.seed, "variation-summary/" + regime_text + "/" + name);
        const auto n = static_cast<double>(samples.size());
        Json entry = Json::object();
        entry["metric"] = name;
        entry["regime"] = regime_text;
        entry["fraction_increase"] = static_cast<double>(up) / n;
        entry["fraction_decrease"] = static_cast<double>(down) / n;
        entry["fraction_neutral"] = static_cast<double>(neutral) / n;
        entry["perturbation"] = summary_json(summarize(perturbations, boot, c.resamples));
        summary["steps"].push_back(entry);
        log_line(c, "variation step " + regime_text + " " + name + ": " +
                        std::to_string(samples.size()) + " samples");
      }
    }
    write_csv(c, "variation_steps.csv", csv, provenance);
  }

  if (run_walks) {
    CsvBuffer walks({"metric", "width", "start_mode", "walk_id", "step", "distance"});
    CsvBuffer aggregates({"metric", "width", "start_mode", "step", "mean", "sd", "ci_lo", "ci_hi"});
    summary["walks"] = Json::array();
    EnsembleOptions eopt;
    eopt.max_attempts = opt.max_attempts;
    eopt.resamples = c.resamples;
    eopt.jobs = c.jobs;
    for (std::size_t m = 0; m < c.metrics.size(); ++m) {
      const std::string name(metric_name(c.metrics[m]));
      for (const std::string& start_text : starts) {
        const StartMode start = *parse_start_mode(start_text);
        const RngStream rng =
            keyed_stream(c.seed, "variation/walk/" + start_text + "/" + name + "/" +
                                     width_label(c));
        const WalkEnsemble ensemble =
            run_walk_ensemble(engines[m].engine, opt.walks, opt.steps, start, rng, eopt);
        for (const WalkTrace& trace : ensemble.traces) {
          for (std::size_t step = 0; step < trace.step_distances.size(); ++step) {
            walks.cell(name).cell(c.width).cell(start_text).cell(std::uint64_t{trace.walk_id});
            walks.cell(std::uint64_t{step}).cell(trace.step_distances[step]);
            walks.end_row();
          }
        }
        for (const StepAggregate& a : ensemble.aggregates) {
          aggregates.cell(name).cell(c.width).cell(start_text).cell(std::uint64_t{a.step});
          aggregates.cell(a.mean).cell(a.sd).cell(a.ci_lo).cell(a.ci_hi);
          aggregates.end_row();
        }
        Json entry = Json::object();
        entry["metric"] = name;
        entry["start_mode"] = start_text;
        entry["walks"] = opt.walks;
        entry["steps"] = opt.steps;
        entry["final_mean"] = ensemble.aggregates.back().mean;
        summary["walks"].push_back(entry);
        log_line(c, "variation walk " + start_text + " " + name + ": " +
                        std::to_string(opt.walks) + " walks");
      }
    }
    write_csv(c, "variation_walks.csv", walks, provenance);
    write_csv(c, "variation_aggregates.csv", aggregates, provenance);
  }
  write_json(output_path(c, "variation_summary.json"), summary);
}

// ---------------------------------------------------------------------------
// evolve

struct EvolveOptions {
  Common common;
  std::size_t nodes = 32;
  std::size_t degree = 1;
  std::string structure = "regular";
  std::size_t population = 500;
  std::size_t generations = 512;
  std::size_t tournament = 7;
  double flips = 0.75;
  std::size_t replicates = 10;
  bool sweep = false;
  std::vector<double> sweep_flips = default_sweep_rates();
  std::size_t sweep_replicates = 2;
  bool full_fitness = false;
};

void run_evolve(const Params& params, EvolveOptions& opt) {
  finish_common(params, opt.common);
  const Common& c = opt.common;
  if (opt.degree != 1 && opt.degree != 2) throw UsageError("--degree must be 1 or 2");
  if (opt.nodes == 0 || opt.nodes % 2 != 0 || opt.nodes / 2 < opt.degree) {
    throw UsageError("--nodes must be even and at least twice --degree");
  }
  const auto structure = parse_structure(opt.structure);
  if (!structure) throw UsageError("--structure must be regular or irregular");
  if (opt.population == 0) throw UsageError("--population must be positive");
  if (opt.generations == 0) throw UsageError("--generations must be positive");
  if (opt.tournament == 0 || opt.tournament > opt.population) {
    throw UsageError("--tournament must lie in [1, population]");
  }
  if (opt.replicates == 0) throw UsageError("--replicates must be positive");
  const double genome_bits = static_cast<double>(opt.nodes * c.width);
  if (!(opt.flips >= 0.0 && opt.flips <= genome_bits)) {
    throw UsageError("--flips must lie in [0, genome bits]");
  }
  if (opt.sweep) {
    if (opt.sweep_flips.empty()) throw UsageError("--sweep-flips needs at least one value");
    if (opt.sweep_replicates == 0) throw UsageError("--sweep-replicates must be positive");
    for (const double f : opt.sweep_flips) {
      if (!(f >= 0.0 && f <= genome_bits)) throw UsageError("--sweep-flips out of range");
    }
  }

  RngStream graph_rng = keyed_stream(c.seed, "graph/" + opt.structure + "/" +
                                                 std::to_string(opt.nodes) + "/" +
                                                 std::to_string(opt.degree));
  const TargetGraph graph = generate_target_graph(opt.nodes, opt.degree, *structure, graph_rng);
  std::ostringstream graph_text;
  write_graph(graph, graph_text);
  write_text(output_path(c, "evolve_graph.txt"), graph_text.str());

  EvolutionConfig base;
  base.population_size = opt.population;
  base.generations = opt.generations;
  base.tournament_size = opt.tournament;
  base.width = c.width;
  base.jobs = c.jobs;
  base.incremental_fitness = !opt.full_fitness;

  Json summary = header("evolve", params);
  summary["graph"] = {{"file", "evolve_graph.txt"},
                      {"gen_seed", graph.gen_seed},
                      {"edges", graph.edges.size()}};
  summary["engines"] = Json::array();
  summary["results"] = Json::array();

  CsvBuffer trajectories({"metric", "width", "structure", "mean_degree", "rate_flips_per_genome",
                          "replicate", "generation", "max_fitness", "mean_fitness"});
  CsvBuffer sweep_csv({"metric", "rate_flips_per_genome", "per_bit_rate", "replicate", "score"});

  for (const MetricKind metric : c.metrics) {
    const std::string name(metric_name(metric));
    const EngineRecord record = make_engine(metric, c);
    summary["engines"].push_back(record.provenance);
    Json entry = Json::object();
    entry["metric"] = name;

    double flips = opt.flips;
    if (opt.sweep) {
      EvolutionConfig sweep_base = base;
      sweep_base.replicate_seed = splitmix64(c.seed ^ stream_key("evolve-sweep"));
      const SweepResult sweep = mutation_rate_sweep(sweep_base, record.engine, graph,
                                                    opt.sweep_flips, opt.sweep_replicates);
      Json rates = Json::array();
      for (const RateSummary& rate : sweep.rates) {
        for (std::size_t r = 0; r < rate.replicate_scores.size(); ++r) {
          sweep_csv.cell(name).cell(rate.flips_per_genome).cell(rate.per_bit_rate);
          sweep_csv.cell(std::uint64_t{r}).cell(rate.replicate_scores[r]);
          sweep_csv.end_row();
        }
        rates.push_back({{"flips_per_genome", rate.flips_per_genome},
                         {"per_bit_rate", rate.per_bit_rate},
                         {"score", rate.score}});
      }
      flips = sweep.best().flips_per_genome;
      entry["sweep"] = {{"replicates", opt.sweep_replicates},
                        {"rates", rates},
                        {"selected_flips_per_genome", flips}};
      log_line(c, "evolve sweep " + name + ": selected " + std::to_string(flips) + " flips");
    }

    std::vector<Trajectory> runs(opt.replicates);
    parallel_for(opt.replicates, c.jobs, [&](std::size_t r) {
      EvolutionConfig config = base;
      config.per_bit_mutation_rate = flips / genome_bits;
      config.replicate_seed = replicate_seed(c.seed, r);
      config.jobs = 1;
      runs[r] = evolve(config, record.engine, graph);
    });

    Json finals = Json::array();
    double final_total = 0.0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const auto& gens = runs[r].generations;
      for (std::size_t g = 0; g < gens.size(); ++g) {
        trajectories.cell(name).cell(c.width).cell(opt.structure).cell(opt.degree).cell(flips);
        trajectories.cell(std::uint64_t{r}).cell(std::uint64_t{g});
        trajectories.cell(gens[g].max_fitness).cell(gens[g].mean_fitness);
        trajectories.end_row();
      }
      finals.push_back(gens.back().max_fitness);
      final_total += gens.back().max_fitness;
    }
    entry["flips_per_genome"] = flips;
    entry["per_bit_rate"] = flips / genome_bits;
    entry["replicates"] = opt.replicates;
    entry["final_max_fitness"] = finals;
    entry["final_mean_max_fitness"] = final_total / static_cast<double>(runs.size());
    summary["results"].push_back(entry);
    log_line(c, "evolve " + name + ": final mean max fitness " +
                    std::to_string(final_total / static_cast<double>(runs.size())));
  }

  Json provenance = header("evolve", params);
  provenance["graph"] = summary["graph"];
  provenance["engines"] = summary["engines"];
  write_csv(c, "evolve_trajectories.csv", trajectories, provenance);
  if (opt.sweep) write_csv(c, "evolve_sweep.csv", sweep_csv, provenance);
  write_json(output_path(c, "evolve_summary.json"), summary);
}

}  // namespace

void register_normalize(CLI::App& app, std::function<void()>& run) {
  auto* sub = app.add_subcommand("normalize", "Build normalization tables and check uniformity");
  auto opt = std::make_shared<NormalizeOptions>();
  auto params = std::make_shared<Params>(*sub);
  add_common(*params, opt->common, false);
  params->add("validation-samples", opt->validation_samples,
              "Fresh random pairs used for the KS check");
  sub->callback([&run, opt, params] { run = [opt, params] { run_normalize(*params, *opt); }; });
}

void register_geometry(CLI::App& app, std::function<void()>& run) {
  auto* sub = app.add_subcommand("geometry", "Similarity, dissimilarity and detour statistics");
  auto opt = std::make_shared<GeometryCliOptions>();
  auto params = std::make_shared<Params>(*sub);
  add_common(*params, opt->common, true);
  params->add("stat", opt->stat, "similarity, dissimilarity, detour or all");
  params->add("samples", opt->samples, "Samples per metric and statistic");
  params->add("radius", opt->radius, "Similarity radius");
  params->add("inner", opt->inner, "Dissimilarity inner radius");
  params->add("outer", opt->outer, "Dissimilarity outer radius");
  params->flag("swap-pair-order", opt->swap_pair_order,
               "Report d(S2, S1) instead of d(S1, S2)");
  params->add("max-attempts", opt->max_attempts, "Rejection-sampling draws allowed per tag");
  sub->callback([&run, opt, params] { run = [opt, params] { run_geometry(*params, *opt); }; });
}

void register_variation(CLI::App& app, std::function<void()>& run) {
  auto* sub = app.add_subcommand("variation", "Single-step mutation and mutational-walk analyses");
  auto opt = std::make_shared<VariationOptions>();
  auto params = std::make_shared<Params>(*sub);
  add_common(*params, opt->common, true);
  params->add("mode", opt->mode, "step, walk or all");
  params->add("regime", opt->regime, "loose, tight or all");
  params->add("start", opt->start, "identical, sampled-close or all");
  params->add("samples", opt->samples, "Single-step samples per metric and regime");
  params->add("walks", opt->walks, "Walks per metric and start mode");
  params->add("steps", opt->steps, "Mutations per walk");
  params->add("max-attempts", opt->max_attempts, "Rejection-sampling draws allowed per tag");
  sub->callback([&run, opt, params] { run = [opt, params] { run_variation(*params, *opt); }; });
}

void register_evolve(CLI::App& app, std::function<void()>& run) {
  auto* sub = app.add_subcommand("evolve", "Evolve genomes to match a target bipartite graph");
  auto opt = std::make_shared<EvolveOptions>();
  auto params = std::make_shared<Params>(*sub);
  add_common(*params, opt->common, true);
  params->add("nodes", opt->nodes, "Graph nodes, split evenly into queries and operands");
  params->add("degree", opt->degree, "Mean degree, 1 or 2");
  params->add("structure", opt->structure, "regular or irregular");
  params->add("population", opt->population, "Population size");
  params->add("generations", opt->generations, "Generations per run");
  params->add("tournament", opt->tournament, "Tournament size");
  params->add("flips", opt->flips, "Expected bit flips per genome per generation");
  params->add("replicates", opt->replicates, "Runs per metric");
  params->flag("sweep", opt->sweep, "Pick the mutation rate per metric by a sweep first");
  params->add("sweep-flips", opt->sweep_flips, "Expected flips per genome to try in the sweep");
  params->add("sweep-replicates", opt->sweep_replicates, "Runs per swept rate");
  params->flag("full-fitness", opt->full_fitness,
               "Re-evaluate every distance each generation instead of updating mutated tags only",
               false);
  sub->callback([&run, opt, params] { run = [opt, params] { run_evolve(*params, *opt); }; });
}

}  // namespace tagmatch::cli
