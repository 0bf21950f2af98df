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

#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "tagmatch/geometry.hpp"
#include "tagmatch/graph_evolve.hpp"
#include "tagmatch/match_engine.hpp"
#include "tagmatch/metrics.hpp"
#include "tagmatch/mutation.hpp"
#include "tagmatch/normalizer.hpp"
#include "tagmatch/stats.hpp"

namespace py = pybind11;
using namespace tagmatch;

namespace {

MetricKind metric_arg(const std::string& name) {
  const auto kind = parse_metric(name);
  if (!kind) throw py::value_error("unknown metric '" + name + "'");
  return *kind;
}

Regime regime_arg(const std::string& name) {
  const auto regime = parse_regime(name);
  if (!regime) throw py::value_error("unknown regime '" + name + "'");
  return *regime;
}

StartMode start_arg(const std::string& name) {
  const auto mode = parse_start_mode(name);
  if (!mode) throw py::value_error("unknown start mode '" + name + "'");
  return *mode;
}

GraphStructure structure_arg(const std::string& name) {
  const auto structure = parse_structure(name);
  if (!structure) throw py::value_error("unknown structure '" + name + "'");
  return *structure;
}

std::vector<double> statistics(const std::vector<GeometrySample>& samples) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.statistic);
  return out;
}

}  // namespace

PYBIND11_MODULE(_tagmatch, m) {
  m.doc() = "Bitstring tag-matching metrics, normalization and analyses";

  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<SamplingBudgetExceeded>(m, "SamplingBudgetExceeded", PyExc_RuntimeError);

  m.attr("METRICS") = [] {
    std::vector<std::string> names;
    for (const auto kind : kAllMetrics) names.emplace_back(metric_name(kind));
    return names;
  }();

  // Random streams and tags.
  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("root_seed"), py::arg("stream_id") = 0)
      .def_property_readonly("root_seed", &RngStream::root_seed)
      .def_property_readonly("stream_id", &RngStream::stream_id)
      .def("child", &RngStream::child, py::arg("index"))
      .def("next", [](RngStream& r) { return r(); })
      .def("uniform01", &RngStream::uniform01)
      .def("below", &RngStream::below, py::arg("n"));
  m.def("derive_stream", &derive_stream, py::arg("root_seed"), py::arg("stream_id"));
  m.def("stream_key", [](const std::string& label) { return stream_key(label); }, py::arg("label"));
  m.def("splitmix64", &splitmix64, py::arg("x"));

  py::class_<Tag>(m, "Tag")
      .def(py::init<std::size_t>(), py::arg("width"))
      .def_static("from_bits",
                  [](const std::vector<std::uint8_t>& bits) { return Tag::from_bits(bits); },
                  py::arg("bits"))
      .def_static("from_unsigned", &Tag::from_unsigned, py::arg("value"), py::arg("width"))
      .def_static("from_hex", &Tag::from_hex, py::arg("hex"), py::arg("width"))
      .def_static("random", &new_random_tag, py::arg("width"), py::arg("rng"))
      .def_property_readonly("width", &Tag::width)
      .def("bit", &Tag::bit, py::arg("index"))
      .def("set_bit", &Tag::set_bit, py::arg("index"), py::arg("value"))
      .def("flip", &Tag::flip, py::arg("index"))
      .def("flipped", [](const Tag& t, std::size_t i) { return flip_bit(t, i); }, py::arg("index"))
      .def("mutated", &mutate_per_bit, py::arg("rate"), py::arg("rng"))
      .def("complement", &Tag::complement)
      .def("popcount", &Tag::popcount)
      .def("to_hex", &Tag::to_hex)
      .def("to_bytes",
           [](const Tag& t) {
             const auto bytes = t.to_bytes();
             return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
           })
      .def("bits",
           [](const Tag& t) {
             std::vector<int> out(t.width());
             for (std::size_t i = 0; i < t.width(); ++i) out[i] = t.bit(i) ? 1 : 0;
             return out;
           })
      .def("__len__", &Tag::width)
      .def(py::self == py::self)
      .def("__hash__", [](const Tag& t) { return py::hash(py::str(t.to_hex())); })
      .def("__repr__", [](const Tag& t) {
        return "Tag(width=" + std::to_string(t.width()) + ", hex='" + t.to_hex() + "')";
      });

  // Metrics.
  m.def("raw_distance",
        [](const std::string& metric, const Tag& t, const Tag& u) {
          return raw_distance(metric_arg(metric), t, u);
        },
        py::arg("metric"), py::arg("t"), py::arg("u"));
  m.def("is_commutative", [](const std::string& metric) { return is_commutative(metric_arg(metric)); },
        py::arg("metric"));
  m.def("longest_match_streak", &longest_match_streak, py::arg("t"), py::arg("u"));
  m.def("longest_mismatch_streak", &longest_mismatch_streak, py::arg("t"), py::arg("u"));
  m.def("streak_rarity", &streak_rarity, py::arg("k"), py::arg("width"));

  // Normalization tables.
  py::class_<NormalizationTable>(m, "NormalizationTable")
      .def_property_readonly("metric",
                             [](const NormalizationTable& t) { return std::string(metric_name(t.metric())); })
      .def_property_readonly("width", &NormalizationTable::width)
      .def_property_readonly("sample_count", &NormalizationTable::sample_count)
      .def_property_readonly("build_seed", &NormalizationTable::build_seed)
      .def_property_readonly("entries", &NormalizationTable::entries)
      .def("normalize", &NormalizationTable::normalize, py::arg("raw"))
      .def("save", [](const NormalizationTable& t, const std::string& path) { save_table(t, path); },
           py::arg("path"))
      .def_static("load", [](const std::string& path) { return load_table(path); }, py::arg("path"))
      .def("dumps",
           [](const NormalizationTable& t) {
             std::ostringstream out;
             write_table(t, out);
             return out.str();
           })
      .def_static("loads",
                  [](const std::string& text) {
                    std::istringstream in(text);
                    return read_table(in);
                  },
                  py::arg("text"))
      .def(py::self == py::self);
  m.def(
      "build_table",
      [](const std::string& metric, std::size_t width, std::uint64_t seed, std::size_t samples) {
        const MetricKind kind = metric_arg(metric);
        py::gil_scoped_release release;
        RngStream rng = table_stream(kind, width, seed);
        return build_table(kind, width, samples, rng);
      },
      py::arg("metric"), py::arg("width") = 32, py::arg("seed") = 1,
      py::arg("samples") = NormalizationTable::kDefaultSampleCount,
      "Table built from the canonical stream for (metric, width, seed).");

  // Match engine.
  py::class_<MatchEngine>(m, "MatchEngine")
      .def(py::init([](const std::string& metric, std::size_t width, const NormalizationTable& table) {
             return MatchEngine(metric_arg(metric), width, table);
           }),
           py::arg("metric"), py::arg("width"), py::arg("table"))
      .def_static("raw",
                  [](const std::string& metric, std::size_t width) {
                    return MatchEngine::raw(metric_arg(metric), width);
                  },
                  py::arg("metric"), py::arg("width") = 32)
      .def_static(
          "build",
          [](const std::string& metric, std::size_t width, std::uint64_t seed, std::size_t samples) {
            const MetricKind kind = metric_arg(metric);
            py::gil_scoped_release release;
            RngStream rng = table_stream(kind, width, seed);
            return MatchEngine(kind, width, build_table(kind, width, samples, rng));
          },
          py::arg("metric"), py::arg("width") = 32, py::arg("seed") = 1,
          py::arg("samples") = NormalizationTable::kDefaultSampleCount)
      .def_property_readonly("metric",
                             [](const MatchEngine& e) { return std::string(metric_name(e.metric())); })
      .def_property_readonly("width", &MatchEngine::width)
      .def_property_readonly("normalized", &MatchEngine::normalized)
      .def_property_readonly("table",
                             [](const MatchEngine& e) -> py::object {
                               if (!e.table()) return py::none();
                               return py::cast(*e.table());
                             })
      .def("distance", &MatchEngine::distance, py::arg("query"), py::arg("operand"));
  m.def(
      "best_k_matches",
      [](const MatchEngine& engine, const Tag& query, const std::vector<Tag>& operands,
         std::size_t k) { return best_k_matches(engine, query, operands, k); },
      py::arg("engine"), py::arg("query"), py::arg("operands"), py::arg("k"));

  // Statistics.
  py::class_<Summary>(m, "Summary")
      .def_readonly("count", &Summary::count)
      .def_readonly("mean", &Summary::mean)
      .def_readonly("sd", &Summary::sd)
      .def_readonly("min", &Summary::min)
      .def_readonly("max", &Summary::max)
      .def_readonly("ci_lo", &Summary::ci_lo)
      .def_readonly("ci_hi", &Summary::ci_hi);
  m.def(
      "bootstrap_ci",
      [](const std::vector<double>& samples, RngStream& rng, std::size_t resamples, double alpha) {
        const Interval ci = bootstrap_ci(samples, resamples, alpha, rng);
        return py::make_tuple(ci.lo, ci.hi);
      },
      py::arg("samples"), py::arg("rng"), py::arg("resamples") = kDefaultBootstrapResamples,
      py::arg("alpha") = kDefaultAlpha);
  m.def("ks_uniform_statistic",
        [](const std::vector<double>& samples) { return ks_uniform_statistic(samples); },
        py::arg("samples"));
  m.def(
      "summarize",
      [](const std::vector<double>& samples, RngStream& rng, std::size_t resamples, double alpha) {
        return summarize(samples, rng, resamples, alpha);
      },
      py::arg("samples"), py::arg("rng"), py::arg("resamples") = kDefaultBootstrapResamples,
      py::arg("alpha") = kDefaultAlpha);
  m.def("mean_of", [](const std::vector<double>& samples) { return mean_of(samples); },
        py::arg("samples"));

  // Geometry.
  py::class_<GeometrySample>(m, "GeometrySample")
      .def_readonly("target", &GeometrySample::target)
      .def_readonly("first", &GeometrySample::first)
      .def_readonly("second", &GeometrySample::second)
      .def_readonly("statistic", &GeometrySample::statistic)
      .def_readonly("attempts", &GeometrySample::attempts)
      .def_readonly("second_attempts", &GeometrySample::second_attempts)
      .def_readonly("legs", &GeometrySample::legs);
  m.def("geometry_statistics", &statistics, py::arg("samples"));
  m.def(
      "sample_similarity_constraint",
      [](const MatchEngine& engine, double radius, std::size_t count, const RngStream& rng,
         std::uint64_t max_attempts, bool swap_pair_order, std::size_t jobs) {
        py::gil_scoped_release release;
        return sample_similarity_constraint(engine, radius, count, rng,
                                            {max_attempts, swap_pair_order, jobs});
      },
      py::arg("engine"), py::arg("radius"), py::arg("count"), py::arg("rng"),
      py::arg("max_attempts") = kDefaultMaxAttempts, py::arg("swap_pair_order") = false,
      py::arg("jobs") = 1);
  m.def(
      "sample_dissimilarity_constraint",
      [](const MatchEngine& engine, double inner, double outer, std::size_t count,
         const RngStream& rng, std::uint64_t max_attempts, bool swap_pair_order, std::size_t jobs) {
        py::gil_scoped_release release;
        return sample_dissimilarity_constraint(engine, inner, outer, count, rng,
                                               {max_attempts, swap_pair_order, jobs});
      },
      py::arg("engine"), py::arg("inner_radius"), py::arg("outer_radius"), py::arg("count"),
      py::arg("rng"), py::arg("max_attempts") = kDefaultMaxAttempts,
      py::arg("swap_pair_order") = false, py::arg("jobs") = 1);
  m.def(
      "sample_detour_difference",
      [](const MatchEngine& engine, std::size_t count, const RngStream& rng, std::size_t jobs) {
        py::gil_scoped_release release;
        GeometryOptions options;
        options.jobs = jobs;
        return sample_detour_difference(engine, count, rng, options);
      },
      py::arg("engine"), py::arg("count"), py::arg("rng"), py::arg("jobs") = 1);
  m.def("detour_difference", &detour_difference, py::arg("engine"), py::arg("a"), py::arg("b"),
        py::arg("c"));

  // Mutation analysis.
  py::class_<StepSample>(m, "StepSample")
      .def_property_readonly("regime", [](const StepSample& s) { return std::string(regime_name(s.regime)); })
      .def_readonly("target", &StepSample::target)
      .def_readonly("secondary", &StepSample::secondary)
      .def_readonly("flipped_index", &StepSample::flipped_index)
      .def_readonly("pre_distance", &StepSample::pre_distance)
      .def_readonly("post_distance", &StepSample::post_distance)
      .def_readonly("perturbation", &StepSample::perturbation);
  m.def(
      "sample_single_step",
      [](const MatchEngine& engine, const std::string& regime, std::size_t count,
         const RngStream& rng, std::uint64_t max_attempts, std::size_t jobs) {
        const Regime r = regime_arg(regime);
        py::gil_scoped_release release;
        return sample_single_step(engine, r, count, rng, {max_attempts, jobs});
      },
      py::arg("engine"), py::arg("regime"), py::arg("count"), py::arg("rng"),
      py::arg("max_attempts") = kDefaultMaxAttempts, py::arg("jobs") = 1);

  py::class_<WalkTrace>(m, "WalkTrace")
      .def_property_readonly("start_mode",
                             [](const WalkTrace& w) { return std::string(start_mode_name(w.start_mode)); })
      .def_readonly("walk_id", &WalkTrace::walk_id)
      .def_readonly("step_distances", &WalkTrace::step_distances);
  py::class_<StepAggregate>(m, "StepAggregate")
      .def_readonly("step", &StepAggregate::step)
      .def_readonly("mean", &StepAggregate::mean)
      .def_readonly("sd", &StepAggregate::sd)
      .def_readonly("ci_lo", &StepAggregate::ci_lo)
      .def_readonly("ci_hi", &StepAggregate::ci_hi);
  py::class_<WalkEnsemble>(m, "WalkEnsemble")
      .def_readonly("traces", &WalkEnsemble::traces)
      .def_readonly("aggregates", &WalkEnsemble::aggregates);
  m.def(
      "mutational_walk",
      [](const MatchEngine& engine, std::size_t steps, const std::string& start, RngStream& rng,
         std::uint64_t max_attempts) {
        return mutational_walk(engine, steps, start_arg(start), rng, max_attempts);
      },
      py::arg("engine"), py::arg("steps"), py::arg("start"), py::arg("rng"),
      py::arg("max_attempts") = kDefaultMaxAttempts);
  m.def(
      "run_walk_ensemble",
      [](const MatchEngine& engine, std::size_t walks, std::size_t steps, const std::string& start,
         const RngStream& rng, std::size_t resamples, double alpha, std::uint64_t max_attempts,
         std::size_t jobs) {
        const StartMode mode = start_arg(start);
        py::gil_scoped_release release;
        return run_walk_ensemble(engine, walks, steps, mode, rng,
                                 {max_attempts, resamples, alpha, jobs});
      },
      py::arg("engine"), py::arg("walks"), py::arg("steps"), py::arg("start"), py::arg("rng"),
      py::arg("resamples") = kDefaultBootstrapResamples, py::arg("alpha") = kDefaultAlpha,
      py::arg("max_attempts") = kDefaultMaxAttempts, py::arg("jobs") = 1);

  // Graph matching evolution.
  py::class_<TargetGraph>(m, "TargetGraph")
      .def_readonly("query_count", &TargetGraph::query_count)
      .def_readonly("operand_count", &TargetGraph::operand_count)
      .def_readonly("mean_degree", &TargetGraph::mean_degree)
      .def_property_readonly("structure",
                             [](const TargetGraph& g) { return std::string(structure_name(g.structure)); })
      .def_readonly("gen_seed", &TargetGraph::gen_seed)
      .def_readonly("edges", &TargetGraph::edges)
      .def("node_count", &TargetGraph::node_count)
      .def("out_degrees", &TargetGraph::out_degrees)
      .def("in_degrees", &TargetGraph::in_degrees)
      .def("has_edge", &TargetGraph::has_edge, py::arg("query"), py::arg("operand"))
      .def("validate", &TargetGraph::validate)
      .def("dumps",
           [](const TargetGraph& g) {
             std::ostringstream out;
             write_graph(g, out);
             return out.str();
           })
      .def_static("loads",
                  [](const std::string& text) {
                    std::istringstream in(text);
                    return read_graph(in);
                  },
                  py::arg("text"))
      .def(py::self == py::self);
  m.def(
      "generate_target_graph",
      [](std::size_t nodes, std::size_t degree, const std::string& structure, RngStream& rng) {
        return generate_target_graph(nodes, degree, structure_arg(structure), rng);
      },
      py::arg("node_count"), py::arg("mean_degree"), py::arg("structure"), py::arg("rng"));

  py::class_<Genome>(m, "Genome")
      .def(py::init([](std::vector<Tag> tags) { return Genome{std::move(tags)}; }), py::arg("tags"))
      .def_readwrite("tags", &Genome::tags)
      .def(py::self == py::self);
  m.def("random_genome", &random_genome, py::arg("graph"), py::arg("width"), py::arg("rng"));
  m.def("evaluate_fitness", &evaluate_fitness, py::arg("engine"), py::arg("genome"),
        py::arg("graph"));

  py::class_<EvolutionConfig>(m, "EvolutionConfig")
      .def(py::init<>())
      .def_readwrite("population_size", &EvolutionConfig::population_size)
      .def_readwrite("generations", &EvolutionConfig::generations)
      .def_readwrite("tournament_size", &EvolutionConfig::tournament_size)
      .def_readwrite("per_bit_mutation_rate", &EvolutionConfig::per_bit_mutation_rate)
      .def_readwrite("replicate_seed", &EvolutionConfig::replicate_seed)
      .def_readwrite("width", &EvolutionConfig::width)
      .def_readwrite("jobs", &EvolutionConfig::jobs)
      .def_readwrite("incremental_fitness", &EvolutionConfig::incremental_fitness)
      .def("validate", &EvolutionConfig::validate);
  py::class_<GenerationRecord>(m, "GenerationRecord")
      .def_readonly("max_fitness", &GenerationRecord::max_fitness)
      .def_readonly("mean_fitness", &GenerationRecord::mean_fitness);
  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("generations", &Trajectory::generations)
      .def_readonly("best_genome", &Trajectory::best_genome)
      .def_readonly("best_fitness", &Trajectory::best_fitness)
      .def("sum_max_fitness", &Trajectory::sum_max_fitness)
      .def("max_fitness", [](const Trajectory& t) {
        std::vector<double> out;
        for (const auto& g : t.generations) out.push_back(g.max_fitness);
        return out;
      });
  m.def(
      "evolve",
      [](const EvolutionConfig& config, const MatchEngine& engine, const TargetGraph& graph) {
        py::gil_scoped_release release;
        return evolve(config, engine, graph);
      },
      py::arg("config"), py::arg("engine"), py::arg("graph"));
  m.def("replicate_seed", &replicate_seed, py::arg("root_seed"), py::arg("replicate"));
  m.def("default_sweep_rates", &default_sweep_rates, py::arg("count") = 10, py::arg("lo") = 0.75,
        py::arg("hi") = 16.0);

  py::class_<RateSummary>(m, "RateSummary")
      .def_readonly("flips_per_genome", &RateSummary::flips_per_genome)
      .def_readonly("per_bit_rate", &RateSummary::per_bit_rate)
      .def_readonly("replicate_scores", &RateSummary::replicate_scores)
      .def_readonly("score", &RateSummary::score)
      .def_readonly("trajectories", &RateSummary::trajectories);
  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("rates", &SweepResult::rates)
      .def_readonly("selected", &SweepResult::selected)
      .def("best", &SweepResult::best, py::return_value_policy::copy);
  m.def(
      "mutation_rate_sweep",
      [](const EvolutionConfig& base, const MatchEngine& engine, const TargetGraph& graph,
         const std::vector<double>& flips, std::size_t replicates) {
        py::gil_scoped_release release;
        return mutation_rate_sweep(base, engine, graph, flips, replicates);
      },
      py::arg("base"), py::arg("engine"), py::arg("graph"), py::arg("flips_per_genome"),
      py::arg("replicates"));
}
