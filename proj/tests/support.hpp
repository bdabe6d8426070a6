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

// Hand-rolled generators and brute-force oracles shared by the suites. The
// oracles deliberately avoid the library's own matching code.

#ifndef COALITION_TESTS_SUPPORT_HPP
#define COALITION_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include <coalition/coalition.hpp>

namespace testing_support {

using namespace coalition;

/// Arbitrary small instance: not necessarily achievable or minimal.
inline ProblemInstance random_instance(CounterRng& rng, std::size_t n, std::size_t m, std::size_t types,
                                       std::size_t max_services, std::size_t max_slots = 3)
{
	ProblemInstance inst;
	inst.service_type_count = types;
	for (RobotId r = 0; r < n; ++r)
	{
		Robot robot;
		robot.id = r;
		const std::size_t k = 1 + rng.below(std::min(max_services, types));
		std::vector<std::size_t> all(types);
		std::iota(all.begin(), all.end(), 0);
		shuffle(all.begin(), all.end(), rng);
		for (std::size_t i = 0; i < k; ++i)
			robot.services.push_back(ServiceId(all[i]));
		std::sort(robot.services.begin(), robot.services.end());
		inst.robots.push_back(robot);
	}
	for (TaskId t = 0; t < m; ++t)
	{
		Task task;
		task.id = t;
		task.utility = static_cast<std::int64_t>(rng.between(1, 50));
		const std::size_t slots = 1 + rng.below(max_slots);
		for (std::size_t i = 0; i < slots; ++i)
			++task.requirements[ServiceId(rng.below(types))];
		inst.tasks.push_back(task);
	}
	return inst;
}

/// Simple augmenting-path (Kuhn) matching size.
inline std::size_t kuhn_matching(const std::vector<std::vector<std::size_t>>& adj, std::size_t cols)
{
	std::vector<std::optional<std::size_t>> owner(cols);
	std::size_t size = 0;
	for (std::size_t r = 0; r < adj.size(); ++r)
	{
		std::vector<char> seen(cols, 0);
		const std::function<bool(std::size_t)> try_row = [&](std::size_t x) {
			for (const std::size_t c : adj[x])
			{
				if (seen[c])
					continue;
				seen[c] = 1;
				if (!owner[c] || try_row(*owner[c]))
				{
					owner[c] = x;
					return true;
				}
			}
			return false;
		};
		size += try_row(r) ? 1 : 0;
	}
	return size;
}

/// Best achievable utility: the most valuable subset of tasks whose slots
/// can all be staffed at once by distinct robots.
inline std::int64_t subset_optimum(const ProblemInstance& inst)
{
	const std::size_t m = inst.tasks.size();
	std::int64_t best = 0;
	for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask)
	{
		std::vector<ServiceId> slots;
		std::int64_t value = 0;
		for (TaskId t = 0; t < m; ++t)
		{
			if (!(mask >> t & 1))
				continue;
			value += inst.tasks[t].utility;
			for (const auto& [s, c] : inst.tasks[t].requirements)
				slots.insert(slots.end(), c, s);
		}
		if (value <= best || slots.size() > inst.robots.size())
			continue;
		std::vector<std::vector<std::size_t>> adj(inst.robots.size());
		for (std::size_t r = 0; r < inst.robots.size(); ++r)
			for (std::size_t k = 0; k < slots.size(); ++k)
				if (std::binary_search(inst.robots[r].services.begin(), inst.robots[r].services.end(), slots[k]))
					adj[r].push_back(k);
		if (kuhn_matching(adj, slots.size()) == slots.size())
			best = value;
	}
	return best;
}

/// Every way to give each robot one offered service or nothing; true if some
/// choice meets the requirement counts exactly.
inline bool roles_exist(const Task& task, const std::vector<Robot>& robots)
{
	std::map<ServiceId, std::size_t> have;
	const std::function<bool(std::size_t)> go = [&](std::size_t i) {
		if (i == robots.size())
		{
			for (const auto& [s, c] : task.requirements)
			{
				const auto it = have.find(s);
				if (it == have.end() || it->second != c)
					return false;
			}
			for (const auto& [s, c] : have)
				if (c > 0 && !task.requirements.contains(s))
					return false;
			return true;
		}
		if (go(i + 1))
			return true;
		for (const ServiceId s : robots[i].services)
		{
			++have[s];
			const bool ok = go(i + 1);
			--have[s];
			if (ok)
				return true;
		}
		return false;
	};
	return go(0);
}

/// Minimum cost over every injective column -> row map, with the
/// lexicographically smallest row-sorted pair list among the minima.
template <typename Cost>
std::optional<Assignment<Cost>> brute_min_cost(const CostMatrix<Cost>& m,
                                               coalition::TieBreak tie_break = coalition::TieBreak::pair_list)
{
	const auto rows_of = [](const Assignment<Cost>& a) {
		std::vector<std::size_t> rows;
		for (const auto& [r, c] : a.pairs)
			rows.push_back(r);
		return rows;
	};
	std::optional<Assignment<Cost>> best;
	if (m.cols() > m.rows())
		return best;
	std::vector<std::size_t> row_of(m.cols());
	std::vector<char> used(m.rows(), 0);
	const std::function<void(std::size_t, Cost)> go = [&](std::size_t c, Cost cost) {
		if (c == m.cols())
		{
			Assignment<Cost> a;
			for (std::size_t k = 0; k < m.cols(); ++k)
				a.pairs.emplace_back(row_of[k], k);
			std::sort(a.pairs.begin(), a.pairs.end());
			a.total_cost = cost;
			bool better = !best || a.total_cost < best->total_cost;
			if (best && a.total_cost == best->total_cost)
			{
				if (tie_break == coalition::TieBreak::row_set && rows_of(a) != rows_of(*best))
					better = rows_of(a) < rows_of(*best);
				else
					better = a.pairs < best->pairs;
			}
			if (better)
				best = a;
			return;
		}
		for (std::size_t r = 0; r < m.rows(); ++r)
		{
			if (used[r] || !m.allowed(r, c))
				continue;
			used[r] = 1;
			row_of[c] = r;
			go(c + 1, cost + m.at(r, c));
			used[r] = 0;
		}
	};
	go(0, Cost{});
	return best;
}

/// Smallest vertex cover of a bipartite graph by subset enumeration.
inline std::size_t min_vertex_cover(const std::vector<std::vector<std::size_t>>& adj, std::size_t cols)
{
	const std::size_t rows = adj.size();
	const std::size_t total = rows + cols;
	std::size_t best = total;
	for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << total); ++mask)
	{
		const auto size = static_cast<std::size_t>(__builtin_popcountll(mask));
		if (size >= best)
			continue;
		bool covers = true;
		for (std::size_t r = 0; r < rows && covers; ++r)
			for (const std::size_t c : adj[r])
				if (!(mask >> r & 1) && !(mask >> (rows + c) & 1))
				{
					covers = false;
					break;
				}
		if (covers)
			best = size;
	}
	return best;
}

inline Robot robot(RobotId id, std::vector<std::size_t> services)
{
	Robot r;
	r.id = id;
	for (const auto s : services)
		r.services.push_back(ServiceId(s));
	std::sort(r.services.begin(), r.services.end());
	return r;
}

inline Task task(TaskId id, std::int64_t utility, std::map<std::size_t, std::size_t> req)
{
	Task t;
	t.id = id;
	t.utility = utility;
	for (const auto& [s, c] : req)
		t.requirements[ServiceId(s)] = c;
	return t;
}

inline ProblemInstance instance(std::size_t types, std::vector<Robot> robots, std::vector<Task> tasks)
{
	ProblemInstance inst;
	inst.service_type_count = types;
	inst.robots = std::move(robots);
	inst.tasks = std::move(tasks);
	return inst;
}

inline GeneratorConfig config(std::size_t n, std::int64_t percent, std::size_t types, std::size_t spr,
                              std::uint64_t seed)
{
	GeneratorConfig cfg;
	cfg.n = n;
	cfg.percent_tasks = Rational(percent);
	cfg.service_types = types;
	cfg.services_per_robot = spr;
	cfg.seed = seed;
	return cfg;
}

} // namespace testing_support

#endif // COALITION_TESTS_SUPPORT_HPP
