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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "tagmatch/match_engine.hpp"
#include "tagmatch/rng.hpp"
#include "tagmatch/tag.hpp"

namespace tagmatch {

enum class GraphStructure { Regular, Irregular };

std::string_view structure_name(GraphStructure structure) noexcept;
std::optional<GraphStructure> parse_structure(std::string_view name) noexcept;

/// Bipartite target graph from query nodes to operand nodes.
struct TargetGraph {
  using Edge = std::pair<std::size_t, std::size_t>;  // (query, operand)

  std::size_t query_count = 0;
  std::size_t operand_count = 0;
  std::size_t mean_degree = 0;
  GraphStructure structure = GraphStructure::Regular;
  std::uint64_t gen_seed = 0;
  std::vector<Edge> edges;  // sorted, distinct

  std::size_t node_count() const noexcept { return query_count + operand_count; }
  std::vector<std::size_t> out_degrees() const;
  std::vector<std::size_t> in_degrees() const;
  bool has_edge(std::size_t query, std::size_t operand) const;

  /// Throws std::invalid_argument if an invariant (index range, distinct
  /// edges, edge count, regular degrees) is violated.
  void validate() const;

  friend bool operator==(const TargetGraph&, const TargetGraph&) = default;
};

/// node_count must be even with node_count / 2 >= mean_degree, and
/// mean_degree must be 1 or 2; throws std::invalid_argument otherwise.
/// Regular graphs are one random perfect matching (degree 1) or the union of
/// two edge-disjoint ones (degree 2). Irregular graphs draw
/// query_count * mean_degree distinct pairs uniformly from all query/operand
/// pairs, so some queries may have no edges.
TargetGraph generate_target_graph(std::size_t node_count, std::size_t mean_degree,
                                  GraphStructure structure, RngStream& rng);

/// Graph file: `key value` header lines then one `q,o` edge per line.
void write_graph(const TargetGraph& graph, std::ostream& out);
TargetGraph read_graph(std::istream& in);

/// tags[0, Q) name the query nodes, tags[Q, Q + O) the operand nodes.
struct Genome {
  std::vector<Tag> tags;

  std::span<const Tag> queries(const TargetGraph& graph) const {
    return std::span<const Tag>(tags).first(graph.query_count);
  }
  std::span<const Tag> operands(const TargetGraph& graph) const {
    return std::span<const Tag>(tags).subspan(graph.query_count, graph.operand_count);
  }

  friend bool operator==(const Genome&, const Genome&) = default;
};

Genome random_genome(const TargetGraph& graph, std::size_t width, RngStream& rng);

/// Fraction of graph edges reproduced by best-match lookup: each query with
/// out-degree k contributes its k best-matching operands, and every produced
/// (query, operand) pair that is an edge counts once.
double evaluate_fitness(const MatchEngine& engine, const Genome& genome, const TargetGraph& graph);

/// Reusable evaluator that precomputes per-query degrees and keeps scratch
/// buffers; results equal evaluate_fitness(). Not thread-safe; use one per
/// thread.
class FitnessEvaluator {
 public:
  FitnessEvaluator(const MatchEngine& engine, const TargetGraph& graph);
  double operator()(const Genome& genome);

 private:
  const MatchEngine* engine_;
  const TargetGraph* graph_;
  std::vector<std::size_t> degree_;
  std::vector<std::pair<double, std::size_t>> scratch_;
  std::vector<std::size_t> chosen_;
};

struct EvolutionConfig {
  std::size_t population_size = 500;
  std::size_t generations = 512;
  std::size_t tournament_size = 7;
  double per_bit_mutation_rate = 0.75 / 1024.0;
  std::uint64_t replicate_seed = 0;
  std::size_t width = 32;
  std::size_t jobs = 1;  // fitness evaluation workers; never affects results
  /// Keep each individual's query x operand distance matrix and recompute
  /// only the rows and columns of mutated tags. Results are identical to
  /// full re-evaluation, which runs when this is false.
  bool incremental_fitness = true;

  /// Throws std::invalid_argument for an unusable configuration.
  void validate() const;
};

struct GenerationRecord {
  double max_fitness = 0.0;
  double mean_fitness = 0.0;
};

struct Trajectory {
  std::vector<GenerationRecord> generations;  // one per evaluated generation
  Genome best_genome;                         // fittest of the last generation
  double best_fitness = 0.0;

  double sum_max_fitness() const;
};

/// Fitness from a precomputed row-major query x operand distance matrix;
/// equals evaluate_fitness() on the genome the matrix was built from.
double fitness_from_distances(std::span<const double> distances, const TargetGraph& graph,
                              std::span<const std::size_t> out_degrees,
                              std::vector<std::pair<double, std::size_t>>& scratch,
                              std::vector<std::size_t>& chosen);

/// Generational GA without elitism. Generation 0 is uniformly random; each
/// later generation is population_size tournament winners (sampled with
/// replacement, ties to the lower index), each mutated per bit. Deterministic
/// in config.replicate_seed.
Trajectory evolve(const EvolutionConfig& config, const MatchEngine& engine,
                  const TargetGraph& graph);

/// Seed for replicate `replicate` of a run family rooted at `root_seed`.
std::uint64_t replicate_seed(std::uint64_t root_seed, std::size_t replicate);

/// Ten log-spaced expected-flips-per-genome values from 0.75 to 16.
std::vector<double> default_sweep_rates(std::size_t count = 10, double lo = 0.75,
                                        double hi = 16.0);

struct RateSummary {
  double flips_per_genome = 0.0;
  double per_bit_rate = 0.0;
  std::vector<double> replicate_scores;  // sum over generations of max fitness
  double score = 0.0;                    // mean of replicate_scores
  std::vector<Trajectory> trajectories;
};

struct SweepResult {
  std::vector<RateSummary> rates;
  std::size_t selected = 0;  // argmax score, ties to the lower rate

  const RateSummary& best() const { return rates.at(selected); }
};

/// Runs `replicates` evolutions per rate. Replicate r of every rate uses
/// replicate_seed(base.replicate_seed, r). Replicates run on base.jobs
/// workers.
SweepResult mutation_rate_sweep(const EvolutionConfig& base, const MatchEngine& engine,
                                const TargetGraph& graph, std::span<const double> flips_per_genome,
                                std::size_t replicates);

}  // namespace tagmatch
