/*
 * Copyright 2026 The coalition-bench Authors
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

#ifndef COALITION_GENERATOR_HPP
#define COALITION_GENERATOR_HPP

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "matching.hpp"
#include "model.hpp"
#include "random.hpp"
#include "rational.hpp"

namespace coalition {

class config_error : public std::invalid_argument
{
public:
	using std::invalid_argument::invalid_argument;
};

struct GeneratorConfig
{
	std::size_t n = 25;                 // collective size
	Rational percent_tasks{10};         // tasks as a percentage of n, in (0, 100]
	std::size_t service_types = 1;
	std::size_t services_per_robot = 1;
	std::int64_t utility_lo = 1;
	std::int64_t utility_hi = 50;
	std::uint64_t seed = 0;
};

/// max(1, round_half_up(n * percent / 100)).
inline std::size_t task_count(std::size_t n, const Rational& percent)
{
	if (percent <= Rational(0) || percent > Rational(100))
		throw config_error("percent_tasks must be in (0, 100]");
	const Rational exact = Rational(static_cast<std::int64_t>(n)) * percent / Rational(100);
	const std::int64_t rounded = (exact + Rational(1, 2)).floor();
	return static_cast<std::size_t>(std::max<std::int64_t>(1, rounded));
}

inline void validate_config(const GeneratorConfig& cfg)
{
	if (cfg.n == 0)
		throw config_error("collective size must be positive");
	if (cfg.service_types == 0)
		throw config_error("service_types must be positive");
	if (cfg.services_per_robot == 0 || cfg.services_per_robot > cfg.service_types)
		throw config_error("services_per_robot must be in [1, service_types]");
	if (cfg.utility_lo < 1 || cfg.utility_hi < cfg.utility_lo)
		throw config_error("utility range must satisfy 1 <= lo <= hi");
	if (task_count(cfg.n, cfg.percent_tasks) > cfg.n)
		throw config_error("more tasks than robots: every task needs at least one robot");
}

/// Splits n slots over m tasks. Every task receives more than half the average
/// coalition size (at least one robot); the remainder is spread by a uniform
/// random composition (m-1 sorted cut points among remainder+m-1 positions).
inline std::vector<std::size_t> coalition_sizes(std::size_t n, std::size_t m, CounterRng& rng)
{
	if (m == 0 || m > n)
		throw config_error("coalition_sizes: need 1 <= m <= n");
	const std::size_t floor_size = n / (2 * m) + 1;
	const std::size_t remainder = n - m * floor_size;
	// Sample m-1 distinct cut points from [0, remainder + m - 1) (Floyd's method).
	const std::size_t positions = remainder + m - 1;
	std::set<std::size_t> cuts;
	for (std::size_t j = positions - (m - 1); j < positions; ++j)
	{
		const std::size_t t = rng.below(j + 1);
		if (!cuts.insert(t).second)
			cuts.insert(j);
	}
	std::vector<std::size_t> sizes;
	sizes.reserve(m);
	std::size_t previous = 0;  // position after the previous cut
	for (const std::size_t c : cuts)
	{
		sizes.push_back(floor_size + (c - previous));
		previous = c + 1;
	}
	sizes.push_back(floor_size + (positions - previous));
	return sizes;
}

inline std::string describe_config(const GeneratorConfig& cfg)
{
	std::ostringstream os;
	os << "n=" << cfg.n << " percent_tasks=" << cfg.percent_tasks << " service_types=" << cfg.service_types
	   << " services_per_robot=" << cfg.services_per_robot << " utility=" << cfg.utility_lo << ".." << cfg.utility_hi
	   << " seed=" << cfg.seed;
	return os.str();
}

/// True iff every required slot of every task can be staffed at the same time
/// and the slots use up exactly the whole collective.
inline bool verify_achievable(const ProblemInstance& instance)
{
	std::vector<ServiceId> slots;
	for (const Task& t : instance.tasks)
	{
		const auto s = expand_slots(t);
		slots.insert(slots.end(), s.begin(), s.end());
	}
	if (slots.size() != instance.robots.size())
		return false;
	std::vector<std::vector<std::size_t>> adjacency(instance.robots.size());
	for (std::size_t r = 0; r < instance.robots.size(); ++r)
		for (std::size_t k = 0; k < slots.size(); ++k)
			if (instance.robots[r].offers(slots[k]))
				adjacency[r].push_back(k);
	return max_bipartite_matching(adjacency, slots.size()).size() == instance.robots.size();
}

/// Deterministic minimal achievable instance: one robot per required slot,
/// each offering its slot's service plus further distinct random services.
inline ProblemInstance generate_instance(const GeneratorConfig& cfg)
{
	validate_config(cfg);
	const std::size_t m = task_count(cfg.n, cfg.percent_tasks);

	CounterRng composition_rng(cfg.seed, "composition");
	CounterRng slot_rng(cfg.seed, "slot-services");
	CounterRng utility_rng(cfg.seed, "utilities");
	CounterRng robot_rng(cfg.seed, "robot-services");
	CounterRng order_rng(cfg.seed, "robot-order");

	ProblemInstance instance;
	instance.seed = cfg.seed;
	instance.service_type_count = cfg.service_types;

	const auto sizes = coalition_sizes(cfg.n, m, composition_rng);
	std::vector<ServiceId> slot_services;
	slot_services.reserve(cfg.n);
	std::set<std::size_t> used_services;
	for (std::size_t j = 0; j < m; ++j)
	{
		Task t;
		t.id = j;
		for (std::size_t k = 0; k < sizes[j]; ++k)
		{
			const ServiceId s(slot_rng.below(cfg.service_types));
			++t.requirements[s];
			slot_services.push_back(s);
			used_services.insert(s.index);
		}
		instance.tasks.push_back(std::move(t));
	}
	for (Task& t : instance.tasks)
		t.utility = utility_rng.between(cfg.utility_lo, cfg.utility_hi);

	std::vector<std::size_t> others(cfg.service_types);
	for (const ServiceId s : slot_services)
	{
		Robot r;
		r.services.push_back(s);
		// Partial Fisher-Yates over the remaining service types.
		others.clear();
		for (std::size_t x = 0; x < cfg.service_types; ++x)
			if (x != s.index)
				others.push_back(x);
		for (std::size_t k = 0; k + 1 < cfg.services_per_robot; ++k)
		{
			const std::size_t pick = k + robot_rng.below(others.size() - k);
			std::swap(others[k], others[pick]);
			r.services.emplace_back(others[k]);
		}
		std::sort(r.services.begin(), r.services.end());
		instance.robots.push_back(std::move(r));
	}
	shuffle(instance.robots.begin(), instance.robots.end(), order_rng);
	for (std::size_t i = 0; i < instance.robots.size(); ++i)
		instance.robots[i].id = i;

	instance.label = describe_config(cfg) + " services_used=" + std::to_string(used_services.size());
	return instance;
}

} // namespace coalition

#endif // COALITION_GENERATOR_HPP
