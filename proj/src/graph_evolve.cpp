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

#include "tagmatch/graph_evolve.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "tagmatch/parallel.hpp"

namespace tagmatch {

namespace {

std::vector<std::size_t> random_permutation(std::size_t n, RngStream& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  return perm;
}

std::size_t genome_bits(const TargetGraph& graph, std::size_t width) {
  return graph.node_count() * width;
}

}  // namespace

std::string_view structure_name(GraphStructure structure) noexcept {
  return structure == GraphStructure::Regular ? "regular" : "irregular";
}

std::optional<GraphStructure> parse_structure(std::string_view name) noexcept {
  if (name == "regular") return GraphStructure::Regular;
  if (name == "irregular") return GraphStructure::Irregular;
  return std::nullopt;
}

std::vector<std::size_t> TargetGraph::out_degrees() const {
  std::vector<std::size_t> degree(query_count, 0);
  for (const auto& [q, o] : edges) ++degree.at(q);
  return degree;
}

std::vector<std::size_t> TargetGraph::in_degrees() const {
  std::vector<std::size_t> degree(operand_count, 0);
  for (const auto& [q, o] : edges) ++degree.at(o);
  return degree;
}

bool TargetGraph::has_edge(std::size_t query, std::size_t operand) const {
  return std::binary_search(edges.begin(), edges.end(), Edge{query, operand});
}

void TargetGraph::validate() const {
  if (query_count == 0 || operand_count == 0) {
    throw std::invalid_argument("graph needs query and operand nodes");
  }
  if (mean_degree != 1 && mean_degree != 2) {
    throw std::invalid_argument("mean degree must be 1 or 2");
  }
  if (edges.size() != query_count * mean_degree) {
    throw std::invalid_argument("graph has " + std::to_string(edges.size()) + " edges, expected " +
                                std::to_string(query_count * mean_degree));
  }
  for (const auto& [q, o] : edges) {
    if (q >= query_count || o >= operand_count) {
      throw std::invalid_argument("edge index out of range");
    }
  }
  if (!std::is_sorted(edges.begin(), edges.end()) ||
      std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw std::invalid_argument("graph edges must be sorted and distinct");
  }
  if (structure == GraphStructure::Regular) {
    const auto outs = out_degrees();
    const auto ins = in_degrees();
    const auto is_degree = [this](std::size_t d) { return d == mean_degree; };
    if (!std::all_of(outs.begin(), outs.end(), is_degree) ||
        !std::all_of(ins.begin(), ins.end(), is_degree)) {
      throw std::invalid_argument("regular graph has a node of the wrong degree");
    }
  }
}

TargetGraph generate_target_graph(std::size_t node_count, std::size_t mean_degree,
                                  GraphStructure structure, RngStream& rng) {
  if (mean_degree != 1 && mean_degree != 2) {
    throw std::invalid_argument("mean degree must be 1 or 2");
  }
  if (node_count == 0 || node_count % 2 != 0 || node_count / 2 < mean_degree) {
    throw std::invalid_argument("node count must be even and at least twice the mean degree");
  }
  TargetGraph graph;
  graph.query_count = graph.operand_count = node_count / 2;
  graph.mean_degree = mean_degree;
  graph.structure = structure;
  graph.gen_seed = rng.root_seed();
  const std::size_t q_count = graph.query_count;

  if (structure == GraphStructure::Regular) {
    const auto first = random_permutation(q_count, rng);
    for (std::size_t q = 0; q < q_count; ++q) graph.edges.emplace_back(q, first[q]);
    if (mean_degree == 2) {
      std::vector<std::size_t> second;
      do {
        second = random_permutation(q_count, rng);
      } while (std::mismatch(first.begin(), first.end(), second.begin(),
                             [](std::size_t a, std::size_t b) { return a != b; })
                   .first != first.end());
      for (std::size_t q = 0; q < q_count; ++q) graph.edges.emplace_back(q, second[q]);
    }
  } else {
    // Partial Fisher-Yates over the flattened Q x O pair indices.
    const std::size_t pairs = q_count * graph.operand_count;
    const std::size_t wanted = q_count * mean_degree;
    std::vector<std::size_t> cells(pairs);
    std::iota(cells.begin(), cells.end(), std::size_t{0});
    for (std::size_t i = 0; i < wanted; ++i) {
      std::swap(cells[i], cells[i + rng.below(pairs - i)]);
      graph.edges.emplace_back(cells[i] / graph.operand_count, cells[i] % graph.operand_count);
    }
  }
  std::sort(graph.edges.begin(), graph.edges.end());
  graph.validate();
  return graph;
}

void write_graph(const TargetGraph& graph, std::ostream& out) {
  out << "query_count " << graph.query_count << '\n'
      << "operand_count " << graph.operand_count << '\n'
      << "mean_degree " << graph.mean_degree << '\n'
      << "structure " << structure_name(graph.structure) << '\n'
      << "gen_seed " << graph.gen_seed << '\n';
  for (const auto& [q, o] : graph.edges) out << q << ',' << o << '\n';
}

TargetGraph read_graph(std::istream& in) {
  TargetGraph graph;
  std::string line;
  const auto header = [&](std::string_view key) {
    if (!std::getline(in, line) || line.rfind(std::string(key) + " ", 0) != 0) {
      throw std::invalid_argument("graph file: expected header '" + std::string(key) + "'");
    }
    return line.substr(key.size() + 1);
  };
  const auto number = [](const std::string& text) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw std::invalid_argument("graph file: not a number: '" + text + "'");
    }
    return value;
  };
  graph.query_count = number(header("query_count"));
  graph.operand_count = number(header("operand_count"));
  graph.mean_degree = number(header("mean_degree"));
  const auto structure = parse_structure(header("structure"));
  if (!structure) throw std::invalid_argument("graph file: unknown structure");
  graph.structure = *structure;
  graph.gen_seed = number(header("gen_seed"));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("graph file: bad edge line");
    graph.edges.emplace_back(number(line.substr(0, comma)), number(line.substr(comma + 1)));
  }
  graph.validate();
  return graph;
}

Genome random_genome(const TargetGraph& graph, std::size_t width, RngStream& rng) {
  Genome genome;
  genome.tags.reserve(graph.node_count());
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    genome.tags.push_back(new_random_tag(width, rng));
  }
  return genome;
}

FitnessEvaluator::FitnessEvaluator(const MatchEngine& engine, const TargetGraph& graph)
    : engine_(&engine), graph_(&graph), degree_(graph.out_degrees()) {
  scratch_.reserve(graph.operand_count);
  chosen_.resize(graph.operand_count);
}

double FitnessEvaluator::operator()(const Genome& genome) {
  const TargetGraph& graph = *graph_;
  if (genome.tags.size() != graph.node_count()) {
    throw std::invalid_argument("genome has " + std::to_string(genome.tags.size()) +
                                " tags, graph has " + std::to_string(graph.node_count()) +
                                " nodes");
  }
  const auto operands = genome.operands(graph);
  std::size_t hits = 0;
  for (std::size_t q = 0; q < graph.query_count; ++q) {
    const std::size_t k = degree_[q];
    if (k == 0) continue;
    best_k_matches_into(*engine_, genome.tags[q], operands, k, scratch_, chosen_);
    for (std::size_t j = 0; j < k; ++j) {
      if (graph.has_edge(q, chosen_[j])) ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(graph.edges.size());
}

double evaluate_fitness(const MatchEngine& engine, const Genome& genome,
                        const TargetGraph& graph) {
  FitnessEvaluator evaluator(engine, graph);
  return evaluator(genome);
}

void EvolutionConfig::validate() const {
  if (population_size == 0) throw std::invalid_argument("population size must be positive");
  if (generations == 0) throw std::invalid_argument("generations must be positive");
  if (tournament_size == 0 || tournament_size > population_size) {
    throw std::invalid_argument("tournament size must lie in [1, population size]");
  }
  if (!(per_bit_mutation_rate >= 0.0 && per_bit_mutation_rate <= 1.0)) {
    throw std::invalid_argument("per-bit mutation rate must lie in [0, 1]");
  }
  if (width == 0) throw std::invalid_argument("tag width must be positive");
}

double Trajectory::sum_max_fitness() const {
  double total = 0.0;
  for (const auto& g : generations) total += g.max_fitness;
  return total;
}

double fitness_from_distances(std::span<const double> distances, const TargetGraph& graph,
                              std::span<const std::size_t> out_degrees,
                              std::vector<std::pair<double, std::size_t>>& scratch,
                              std::vector<std::size_t>& chosen) {
  const std::size_t operands = graph.operand_count;
  chosen.resize(operands);
  std::size_t hits = 0;
  for (std::size_t q = 0; q < graph.query_count; ++q) {
    const std::size_t k = out_degrees[q];
    if (k == 0) continue;
    select_best_k(distances.subspan(q * operands, operands), k, scratch, chosen);
    for (std::size_t j = 0; j < k; ++j) {
      if (graph.has_edge(q, chosen[j])) ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(graph.edges.size());
}

namespace {

struct Individual {
  Genome genome;
  std::vector<double> distances;  // row-major query x operand; empty if unused
  double fitness = 0.0;
  bool stale = true;
  std::vector<std::size_t> touched;  // tag indices mutated since last evaluation
};

// Per-worker evaluation state.
class Evaluator {
 public:
  Evaluator(const MatchEngine& engine, const TargetGraph& graph, bool incremental)
      : engine_(&engine),
        graph_(&graph),
        incremental_(incremental),
        degrees_(graph.out_degrees()),
        full_(engine, graph) {}

  void evaluate(Individual& ind) {
    if (!ind.stale) return;
    if (!incremental_) {
      ind.fitness = full_(ind.genome);
    } else {
      refresh_distances(ind);
      ind.fitness = fitness_from_distances(ind.distances, *graph_, degrees_, scratch_, chosen_);
    }
    ind.stale = false;
    ind.touched.clear();
  }

 private:
  void refresh_distances(Individual& ind) {
    const TargetGraph& graph = *graph_;
    const std::size_t q_count = graph.query_count;
    const std::size_t o_count = graph.operand_count;
    const auto& tags = ind.genome.tags;
    const auto fill = [&](std::size_t q, std::size_t o) {
      ind.distances[q * o_count + o] = engine_->distance(tags[q], tags[q_count + o]);
    };
    if (ind.distances.empty()) {
      ind.distances.resize(q_count * o_count);
      for (std::size_t q = 0; q < q_count; ++q) {
        for (std::size_t o = 0; o < o_count; ++o) fill(q, o);
      }
      return;
    }
    dirty_.assign(graph.node_count(), false);
    for (const std::size_t t : ind.touched) dirty_[t] = true;
    for (std::size_t q = 0; q < q_count; ++q) {
      if (dirty_[q]) {
        for (std::size_t o = 0; o < o_count; ++o) fill(q, o);
      } else {
        for (std::size_t o = 0; o < o_count; ++o) {
          if (dirty_[q_count + o]) fill(q, o);
        }
      }
    }
  }

  const MatchEngine* engine_;
  const TargetGraph* graph_;
  bool incremental_;
  std::vector<std::size_t> degrees_;
  FitnessEvaluator full_;
  std::vector<std::pair<double, std::size_t>> scratch_;
  std::vector<std::size_t> chosen_;
  std::vector<bool> dirty_;
};

}  // namespace

Trajectory evolve(const EvolutionConfig& config, const MatchEngine& engine,
                  const TargetGraph& graph) {
  config.validate();
  if (engine.width() != config.width) {
    throw std::invalid_argument("engine width does not match config width");
  }
  RngStream rng = derive_stream(config.replicate_seed, stream_key("evolve"));
  const std::size_t pop = config.population_size;
  const std::size_t jobs = std::clamp<std::size_t>(config.jobs, 1, pop);

  std::vector<Individual> population(pop);
  for (auto& ind : population) ind.genome = random_genome(graph, config.width, rng);

  std::vector<Evaluator> evaluators(jobs,
                                    Evaluator(engine, graph, config.incremental_fitness));
  Trajectory trajectory;
  trajectory.generations.reserve(config.generations);
  std::vector<Individual> next(pop);
  for (std::size_t gen = 0;; ++gen) {
    const std::size_t chunk = (pop + jobs - 1) / jobs;
    parallel_for(jobs, jobs, [&](std::size_t worker) {
      const std::size_t end = std::min(pop, (worker + 1) * chunk);
      for (std::size_t i = worker * chunk; i < end; ++i) evaluators[worker].evaluate(population[i]);
    });

    std::size_t best = 0;
    double total = 0.0;
    for (std::size_t i = 0; i < pop; ++i) {
      total += population[i].fitness;
      if (population[i].fitness > population[best].fitness) best = i;
    }
    trajectory.generations.push_back({population[best].fitness, total / static_cast<double>(pop)});
    if (gen + 1 == config.generations) {
      trajectory.best_genome = population[best].genome;
      trajectory.best_fitness = population[best].fitness;
      break;
    }

    // Offspring that receive no flips are clones and keep the parent's
    // fitness; the rest are re-evaluated next iteration.
    for (std::size_t i = 0; i < pop; ++i) {
      std::size_t winner = rng.below(pop);
      for (std::size_t t = 1; t < config.tournament_size; ++t) {
        const std::size_t challenger = rng.below(pop);
        const double cf = population[challenger].fitness;
        const double wf = population[winner].fitness;
        if (cf > wf || (cf == wf && challenger < winner)) winner = challenger;
      }
      Individual& child = next[i];
      const Individual& parent = population[winner];
      child.genome = parent.genome;
      child.distances = parent.distances;
      child.fitness = parent.fitness;
      child.touched.clear();
      const std::size_t flips = mutate_per_bit_inplace(
          child.genome.tags, config.per_bit_mutation_rate, rng, &child.touched);
      child.stale = flips > 0;
    }
    population.swap(next);
  }
  return trajectory;
}

std::uint64_t replicate_seed(std::uint64_t root_seed, std::size_t replicate) {
  return splitmix64(root_seed ^ splitmix64(0xA5A5A5A5ULL + replicate));
}

std::vector<double> default_sweep_rates(std::size_t count, double lo, double hi) {
  if (count == 0 || !(lo > 0.0) || !(hi >= lo)) {
    throw std::invalid_argument("sweep needs count >= 1 and 0 < lo <= hi");
  }
  if (count == 1) return {lo};
  std::vector<double> rates(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    rates[i] = lo * std::pow(hi / lo, t);
  }
  rates.front() = lo;
  rates.back() = hi;
  return rates;
}

SweepResult mutation_rate_sweep(const EvolutionConfig& base, const MatchEngine& engine,
                                const TargetGraph& graph, std::span<const double> flips_per_genome,
                                std::size_t replicates) {
  base.validate();
  if (flips_per_genome.empty()) throw std::invalid_argument("sweep needs at least one rate");
  if (replicates == 0) throw std::invalid_argument("sweep needs at least one replicate");
  const auto bits = static_cast<double>(genome_bits(graph, base.width));

  SweepResult result;
  for (const double flips : flips_per_genome) {
    if (!(flips >= 0.0 && flips <= bits)) {
      throw std::invalid_argument("expected flips per genome must lie in [0, genome bits]");
    }
    RateSummary summary;
    summary.flips_per_genome = flips;
    summary.per_bit_rate = flips / bits;
    summary.replicate_scores.resize(replicates);
    summary.trajectories.resize(replicates);
    result.rates.push_back(std::move(summary));
  }

  const std::size_t runs = result.rates.size() * replicates;
  parallel_for(runs, base.jobs, [&](std::size_t run) {
    RateSummary& summary = result.rates[run / replicates];
    const std::size_t r = run % replicates;
    EvolutionConfig config = base;
    config.per_bit_mutation_rate = summary.per_bit_rate;
    config.replicate_seed = replicate_seed(base.replicate_seed, r);
    config.jobs = 1;
    summary.trajectories[r] = evolve(config, engine, graph);
    summary.replicate_scores[r] = summary.trajectories[r].sum_max_fitness();
  });

  for (std::size_t i = 0; i < result.rates.size(); ++i) {
    RateSummary& summary = result.rates[i];
    summary.score = std::accumulate(summary.replicate_scores.begin(),
                                    summary.replicate_scores.end(), 0.0) /
                    static_cast<double>(replicates);
    const RateSummary& current = result.rates[result.selected];
    if (summary.score > current.score ||
        (summary.score == current.score && summary.flips_per_genome < current.flips_per_genome)) {
      result.selected = i;
    }
  }
  return result;
}

}  // namespace tagmatch
