# Copyright 2026 The tagmatch Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import pytest

import tagmatch as tm


def test_tag_round_trip():
    t = tm.Tag.from_bits([1, 0, 1, 0])
    assert t.width == 4
    assert t.bits() == [1, 0, 1, 0]
    assert tm.Tag.from_unsigned(5, 4) == t
    assert tm.Tag.from_hex(t.to_hex(), 4) == t
    assert t.to_bytes() == b"\x05"
    assert t.flipped(1) == tm.Tag.from_unsigned(7, 4)


def test_raw_metrics():
    t = tm.Tag.from_unsigned(0, 8)
    u = tm.Tag.from_unsigned(0xFF, 8)
    assert tm.raw_distance("hamming", t, u) == 1.0
    assert tm.raw_distance("integer", t, tm.Tag.from_unsigned(64, 8)) == 0.25
    assert tm.raw_distance("integer-bi", t, tm.Tag.from_unsigned(192, 8)) == 0.25
    assert 0.0 <= tm.raw_distance("hash", t, u) < 1.0
    assert not tm.is_commutative("integer")
    assert sorted(tm.METRICS) == ["hamming", "hash", "integer", "integer-bi", "streak"]
    with pytest.raises(ValueError):
        tm.raw_distance("cosine", t, u)
    with pytest.raises(ValueError):
        tm.raw_distance("hamming", t, tm.Tag(4))


def test_table_and_engine():
    table = tm.build_table("hamming", 32, seed=3, samples=2000)
    assert table.sample_count == 2000
    assert table.entries[0] == 0.0 and table.entries[-1] == 1.0
    assert tm.NormalizationTable.loads(table.dumps()) == table
    engine = tm.MatchEngine("hamming", 32, table)
    rng = tm.RngStream(9)
    t = tm.Tag.random(32, rng)
    assert engine.distance(t, t) == table.normalize(0.0)
    ops = [tm.Tag.random(32, rng) for _ in range(6)]
    best = tm.best_k_matches(engine, t, ops, 3)
    dists = [engine.distance(t, o) for o in ops]
    assert [dists[i] for i in best] == sorted(dists)[:3]
    with pytest.raises(tm.FormatError):
        tm.NormalizationTable.loads("not a table")


def test_geometry_and_stats():
    engine = tm.MatchEngine.build("integer-bi", 32, seed=1, samples=2000)
    samples = tm.sample_similarity_constraint(engine, 0.01, 200, tm.RngStream(1, 2))
    stats = tm.geometry_statistics(samples)
    assert len(stats) == 200
    assert all(s.second is not None for s in samples)
    assert 0.0 <= tm.mean_of(stats) < 0.05
    summary = tm.summarize(stats, tm.RngStream(4), resamples=500)
    assert summary.ci_lo <= summary.mean <= summary.ci_hi
    assert tm.ks_uniform_statistic([0.5]) == 0.5
    with pytest.raises(tm.SamplingBudgetExceeded):
        tm.sample_similarity_constraint(engine, 0.0001, 1, tm.RngStream(1), max_attempts=3)


def test_mutation_analysis():
    engine = tm.MatchEngine.build("hash", 32, seed=1, samples=2000)
    steps = tm.sample_single_step(engine, "tight", 50, tm.RngStream(5))
    assert all(s.pre_distance < 0.01 for s in steps)
    hamming = tm.MatchEngine.build("hamming", 32, seed=1, samples=2000)
    ensemble = tm.run_walk_ensemble(hamming, 20, 8, "identical", tm.RngStream(6), resamples=200)
    assert len(ensemble.aggregates) == 9
    assert ensemble.aggregates[0].mean == hamming.table.normalize(0.0)
    assert ensemble.aggregates[0].sd == 0.0
    again = tm.run_walk_ensemble(hamming, 20, 8, "identical", tm.RngStream(6), resamples=200, jobs=2)
    assert [a.mean for a in again.aggregates] == [a.mean for a in ensemble.aggregates]


def test_graph_evolution():
    graph = tm.generate_target_graph(8, 1, "regular", tm.RngStream(2))
    graph.validate()
    assert len(graph.edges) == 4
    assert tm.TargetGraph.loads(graph.dumps()) == graph
    engine = tm.MatchEngine.build("hamming", 32, seed=1, samples=2000)
    config = tm.EvolutionConfig()
    config.population_size = 20
    config.generations = 15
    config.replicate_seed = tm.replicate_seed(1, 0)
    run = tm.evolve(config, engine, graph)
    assert len(run.generations) == 15
    assert run.best_fitness == tm.evaluate_fitness(engine, run.best_genome, graph)
    assert tm.evolve(config, engine, graph).max_fitness() == run.max_fitness()
    sweep = tm.mutation_rate_sweep(config, engine, graph, [0.75, 4.0], 1)
    assert sweep.best().score == max(r.score for r in sweep.rates)
