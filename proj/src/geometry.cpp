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

#include "tagmatch/geometry.hpp"

#include <stdexcept>

#include "tagmatch/format.hpp"
#include "tagmatch/parallel.hpp"

namespace tagmatch {

namespace {

template <typename Draw>
std::vector<GeometrySample> collect(std::size_t count, const RngStream& rng, std::size_t jobs,
                                    Draw draw) {
  if (count == 0) throw std::invalid_argument("sample count must be positive");
  std::vector<std::optional<GeometrySample>> slots(count);
  parallel_for(count, jobs, [&](std::size_t i) {
    RngStream stream = rng.child(i);
    slots[i] = draw(stream);
  });
  std::vector<GeometrySample> out;
  out.reserve(count);
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

}  // namespace

std::vector<GeometrySample> sample_similarity_constraint(const MatchEngine& engine, double radius,
                                                         std::size_t count, const RngStream& rng,
                                                         const GeometryOptions& options) {
  if (!(radius > 0.0 && radius < 1.0)) throw std::invalid_argument("radius must lie in (0, 1)");
  const std::string constraint = "d(R,S) <= " + format_double(radius);
  const auto within = [radius](double d) { return d <= radius; };
  return collect(count, rng, options.jobs, [&](RngStream& stream) {
    Tag target = new_random_tag(engine.width(), stream);
    SampledTag s1 =
        rejection_sample(engine, target, within, constraint, stream, options.max_attempts);
    SampledTag s2 =
        rejection_sample(engine, target, within, constraint, stream, options.max_attempts);
    const double statistic = options.swap_pair_order ? engine.distance(s2.tag, s1.tag)
                                                     : engine.distance(s1.tag, s2.tag);
    return GeometrySample{std::move(target), std::move(s1.tag), std::move(s2.tag),
                          statistic,         s1.attempts,       s2.attempts};
  });
}

std::vector<GeometrySample> sample_dissimilarity_constraint(const MatchEngine& engine,
                                                            double inner_radius,
                                                            double outer_radius, std::size_t count,
                                                            const RngStream& rng,
                                                            const GeometryOptions& options) {
  if (!(inner_radius > 0.0 && inner_radius < outer_radius && outer_radius < 1.0)) {
    throw std::invalid_argument("radii must satisfy 0 < inner < outer < 1");
  }
  const std::string inner_constraint = "d(R,S1) <= " + format_double(inner_radius);
  const std::string outer_constraint = "d(R,S2) >= " + format_double(outer_radius);
  return collect(count, rng, options.jobs, [&](RngStream& stream) {
    Tag target = new_random_tag(engine.width(), stream);
    SampledTag s1 = rejection_sample(
        engine, target, [inner_radius](double d) { return d <= inner_radius; }, inner_constraint,
        stream, options.max_attempts);
    SampledTag s2 = rejection_sample(
        engine, target, [outer_radius](double d) { return d >= outer_radius; }, outer_constraint,
        stream, options.max_attempts);
    const double statistic = options.swap_pair_order ? engine.distance(s2.tag, s1.tag)
                                                     : engine.distance(s1.tag, s2.tag);
    return GeometrySample{std::move(target), std::move(s1.tag), std::move(s2.tag),
                          statistic,         s1.attempts,       s2.attempts};
  });
}

double detour_difference(const MatchEngine& engine, const Tag& a, const Tag& b, const Tag& c) {
  return engine.distance(a, b) + engine.distance(b, c) - engine.distance(a, c);
}

std::vector<GeometrySample> sample_detour_difference(const MatchEngine& engine, std::size_t count,
                                                     const RngStream& rng,
                                                     const GeometryOptions& options) {
  return collect(count, rng, options.jobs, [&](RngStream& stream) {
    Tag a = new_random_tag(engine.width(), stream);
    Tag b = new_random_tag(engine.width(), stream);
    Tag c = new_random_tag(engine.width(), stream);
    const std::array<double, 3> legs{engine.distance(a, b), engine.distance(b, c),
                                     engine.distance(a, c)};
    GeometrySample sample{std::move(a), std::move(b), std::move(c), legs[0] + legs[1] - legs[2],
                          1, 1};
    sample.legs = legs;
    return sample;
  });
}

}  // namespace tagmatch
