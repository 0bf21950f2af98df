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

#include "tagmatch/mutation.hpp"

#include <stdexcept>

#include "tagmatch/format.hpp"
#include "tagmatch/parallel.hpp"

namespace tagmatch {

std::string_view regime_name(Regime regime) noexcept {
  return regime == Regime::Loose ? "loose" : "tight";
}

std::optional<Regime> parse_regime(std::string_view name) noexcept {
  if (name == "loose") return Regime::Loose;
  if (name == "tight") return Regime::Tight;
  return std::nullopt;
}

std::string_view start_mode_name(StartMode mode) noexcept {
  return mode == StartMode::Identical ? "identical" : "sampled-close";
}

std::optional<StartMode> parse_start_mode(std::string_view name) noexcept {
  if (name == "identical") return StartMode::Identical;
  if (name == "sampled-close") return StartMode::SampledClose;
  return std::nullopt;
}

std::vector<StepSample> sample_single_step(const MatchEngine& engine, Regime regime,
                                           std::size_t count, const RngStream& rng,
                                           const MutationOptions& options) {
  if (count == 0) throw std::invalid_argument("sample count must be positive");
  const bool loose = regime == Regime::Loose;
  const std::string constraint =
      loose ? "d(R,S) > " + format_double(kLooseThreshold)
            : "d(R,S) < " + format_double(kTightThreshold);
  const auto accept = [loose](double d) {
    return loose ? d > kLooseThreshold : d < kTightThreshold;
  };

  std::vector<std::optional<StepSample>> slots(count);
  parallel_for(count, options.jobs, [&](std::size_t i) {
    RngStream stream = rng.child(i);
    Tag target = new_random_tag(engine.width(), stream);
    SampledTag secondary =
        rejection_sample(engine, target, accept, constraint, stream, options.max_attempts);
    const std::size_t index = stream.below(engine.width());
    const double post = engine.distance(target, flip_bit(secondary.tag, index));
    slots[i] = StepSample{regime,   std::move(target),  std::move(secondary.tag),
                          index,    secondary.distance, post,
                          post - secondary.distance};
  });
  std::vector<StepSample> out;
  out.reserve(count);
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

WalkTrace mutational_walk(const MatchEngine& engine, std::size_t steps, StartMode start_mode,
                          RngStream& rng, std::uint64_t max_attempts) {
  if (steps == 0) throw std::invalid_argument("walk needs at least one step");
  const Tag anchor = new_random_tag(engine.width(), rng);
  Tag walker = anchor;
  if (start_mode == StartMode::SampledClose) {
    walker = rejection_sample(
                 engine, anchor, [](double d) { return d < kTightThreshold; },
                 "d(anchor,walker) < " + format_double(kTightThreshold), rng, max_attempts)
                 .tag;
  }
  WalkTrace trace{start_mode, 0, {}};
  trace.step_distances.reserve(steps + 1);
  trace.step_distances.push_back(engine.distance(anchor, walker));
  for (std::size_t s = 0; s < steps; ++s) {
    walker.flip(rng.below(engine.width()));
    trace.step_distances.push_back(engine.distance(anchor, walker));
  }
  return trace;
}

WalkEnsemble run_walk_ensemble(const MatchEngine& engine, std::size_t walks, std::size_t steps,
                               StartMode start_mode, const RngStream& rng,
                               const EnsembleOptions& options) {
  if (walks < 2) throw std::invalid_argument("walk ensemble needs at least two walks");
  if (steps == 0) throw std::invalid_argument("walk needs at least one step");

  WalkEnsemble ensemble;
  ensemble.traces.resize(walks);
  parallel_for(walks, options.jobs, [&](std::size_t i) {
    RngStream stream = rng.child(i);
    ensemble.traces[i] = mutational_walk(engine, steps, start_mode, stream, options.max_attempts);
    ensemble.traces[i].walk_id = i;
  });

  const RngStream bootstrap_root = rng.child(stream_key("walk-ensemble/bootstrap"));
  ensemble.aggregates.resize(steps + 1);
  parallel_for(steps + 1, options.jobs, [&](std::size_t step) {
    std::vector<double> column(walks);
    for (std::size_t w = 0; w < walks; ++w) column[w] = ensemble.traces[w].step_distances[step];
    RngStream stream = bootstrap_root.child(step);
    const Summary s = summarize(column, stream, options.resamples, options.alpha);
    ensemble.aggregates[step] = StepAggregate{step, s.mean, s.sd, s.ci_lo, s.ci_hi};
  });
  return ensemble;
}

}  // namespace tagmatch
