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

#ifndef COALITION_MODEL_HPP
#define COALITION_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "matching.hpp"

namespace coalition {

/// A service type: a high-level behavior a robot can perform.
struct ServiceId
{
	std::uint16_t index = 0;

	constexpr ServiceId() noexcept = default;
	constexpr explicit ServiceId(std::size_t i) : index(static_cast<std::uint16_t>(i))
	{
		if (i > UINT16_MAX)
			throw std::out_of_range("ServiceId: index too large");
	}

	friend constexpr auto operator<=>(ServiceId, ServiceId) noexcept = default;
};

using RobotId = std::size_t;
using TaskId = std::size_t;

struct Robot
{
	RobotId id = 0;
	std::vector<ServiceId> services;  // sorted, distinct

	bool offers(ServiceId s) const noexcept { return std::binary_search(services.begin(), services.end(), s); }
};

struct Task
{
	TaskId id = 0;
	std::int64_t utility = 0;
	std::map<ServiceId, std::size_t> requirements;  // service -> robots needed
};

struct ProblemInstance
{
	std::vector<Robot> robots;
	std::vector<Task> tasks;
	std::size_t service_type_count = 1;
	std::uint64_t seed = 0;
	std::string label;

	std::size_t robot_count() const noexcept { return robots.size(); }
	std::size_t task_count() const noexcept { return tasks.size(); }
};

/// Which single service each assigned robot performs.
using RoleAssignment = std::map<RobotId, ServiceId>;

struct CoalitionStructure
{
	std::map<TaskId, std::vector<RobotId>> assignment;  // coalitions, robot ids sorted
	RoleAssignment roles;
	std::vector<RobotId> unassigned;                    // sorted

	const std::vector<RobotId>& coalition(TaskId t) const
	{
		static const std::vector<RobotId> empty;
		const auto it = assignment.find(t);
		return it == assignment.end() ? empty : it->second;
	}
};

class invalid_instance : public std::invalid_argument
{
public:
	using std::invalid_argument::invalid_argument;
};

class invalid_structure : public std::invalid_argument
{
public:
	using std::invalid_argument::invalid_argument;
};

inline std::size_t required_size(const Task& task) noexcept
{
	std::size_t total = 0;
	for (const auto& [service, count] : task.requirements)
		total += count;
	return total;
}

inline std::int64_t total_task_utility(const ProblemInstance& instance) noexcept
{
	std::int64_t total = 0;
	for (const auto& t : instance.tasks)
		total += t.utility;
	return total;
}

inline std::int64_t max_task_utility(const ProblemInstance& instance) noexcept
{
	std::int64_t best = 0;
	for (const auto& t : instance.tasks)
		best = std::max(best, t.utility);
	return best;
}

inline std::size_t total_required_slots(const ProblemInstance& instance) noexcept
{
	std::size_t total = 0;
	for (const auto& t : instance.tasks)
		total += required_size(t);
	return total;
}

/// Required service slots of a task, in ascending service order.
inline std::vector<ServiceId> expand_slots(const Task& task)
{
	std::vector<ServiceId> slots;
	slots.reserve(required_size(task));
	for (const auto& [service, count] : task.requirements)
		slots.insert(slots.end(), count, service);
	return slots;
}

/// Structural checks: dense ids, sorted distinct services within range,
/// non-empty requirements with positive counts, positive utilities.
inline void validate_instance(const ProblemInstance& instance)
{
	if (instance.service_type_count == 0)
		throw invalid_instance("instance: service_type_count must be positive");
	for (std::size_t i = 0; i < instance.robots.size(); ++i)
	{
		const Robot& r = instance.robots[i];
		if (r.id != i)
			throw invalid_instance("instance: robot ids must be dense 0..n-1");
		if (r.services.empty())
			throw invalid_instance("instance: robot " + std::to_string(i) + " offers no service");
		for (std::size_t k = 0; k < r.services.size(); ++k)
		{
			if (r.services[k].index >= instance.service_type_count)
				throw invalid_instance("instance: robot " + std::to_string(i) + " offers unknown service");
			if (k > 0 && !(r.services[k - 1] < r.services[k]))
				throw invalid_instance("instance: robot " + std::to_string(i) + " services not sorted/distinct");
		}
	}
	for (std::size_t j = 0; j < instance.tasks.size(); ++j)
	{
		const Task& t = instance.tasks[j];
		if (t.id != j)
			throw invalid_instance("instance: task ids must be dense 0..m-1");
		if (t.utility <= 0)
			throw invalid_instance("instance: task " + std::to_string(j) + " has non-positive utility");
		if (t.requirements.empty())
			throw invalid_instance("instance: task " + std::to_string(j) + " has no requirements");
		for (const auto& [service, count] : t.requirements)
		{
			if (service.index >= instance.service_type_count)
				throw invalid_instance("instance: task " + std::to_string(j) + " requires unknown service");
			if (count == 0)
				throw invalid_instance("instance: task " + std::to_string(j) + " has a zero requirement");
		}
	}
}

namespace detail {

template <typename RobotAt>
std::optional<RoleAssignment> feasible_impl(const Task& task, std::size_t count, RobotAt robot_at)
{
	const std::size_t slots_needed = required_size(task);
	if (count < slots_needed)
		return std::nullopt;

	// Counting pre-check; exact when every robot offers a single service.
	for (const auto& [service, needed] : task.requirements)
	{
		std::size_t offering = 0;
		for (std::size_t i = 0; i < count; ++i)
			offering += robot_at(i).offers(service) ? 1 : 0;
		if (offering < needed)
			return std::nullopt;
	}
	bool single_service = true;
	for (std::size_t i = 0; i < count && single_service; ++i)
		single_service = robot_at(i).services.size() == 1;

	RoleAssignment roles;
	if (single_service)
	{
		std::map<ServiceId, std::size_t> remaining(task.requirements.begin(), task.requirements.end());
		for (std::size_t i = 0; i < count; ++i)
		{
			const Robot& r = robot_at(i);
			const auto it = remaining.find(r.services.front());
			if (it != remaining.end() && it->second > 0)
			{
				--it->second;
				roles.emplace(r.id, r.services.front());
			}
		}
		return roles;
	}

	const std::vector<ServiceId> slots = expand_slots(task);
	std::vector<std::vector<std::size_t>> adjacency(count);
	for (std::size_t i = 0; i < count; ++i)
		for (std::size_t k = 0; k < slots.size(); ++k)
			if (robot_at(i).offers(slots[k]))
				adjacency[i].push_back(k);
	const auto matching = max_bipartite_matching(adjacency, slots.size());
	if (matching.size() != slots_needed)
		return std::nullopt;
	for (const auto& [row, col] : matching.pairs)
		roles.emplace(robot_at(row).id, slots[col]);
	return roles;
}

} // namespace detail

/// Finds roles for `coalition` that fill every required slot of `task`
/// exactly once (maximum bipartite matching of robots to slots), or nullopt
/// if no such roles exist. Robots beyond the slot count receive no role.
inline std::optional<RoleAssignment> feasible(const Task& task, std::span<const Robot> coalition)
{
	return detail::feasible_impl(task, coalition.size(), [&](std::size_t i) -> const Robot& { return coalition[i]; });
}

inline std::optional<RoleAssignment> feasible(const Task& task, std::span<const Robot* const> coalition)
{
	return detail::feasible_impl(task, coalition.size(), [&](std::size_t i) -> const Robot& { return *coalition[i]; });
}

/// Throws invalid_structure unless `cs` is a valid coalition structure for
/// `instance`: known task ids, disjoint coalitions, coalitions plus the
/// unassigned set partition the robots, and roles exist exactly for assigned
/// robots and name services those robots offer.
inline void validate_structure(const ProblemInstance& instance, const CoalitionStructure& cs)
{
	const std::size_t n = instance.robots.size();
	std::vector<int> seen(n, 0);
	std::size_t assigned = 0;
	for (const auto& [task, members] : cs.assignment)
	{
		if (task >= instance.tasks.size())
			throw invalid_structure("structure: unknown task " + std::to_string(task));
		for (const RobotId r : members)
		{
			if (r >= n)
				throw invalid_structure("structure: unknown robot " + std::to_string(r));
			if (seen[r]++)
				throw invalid_structure("structure: robot " + std::to_string(r) + " appears twice");
			const auto role = cs.roles.find(r);
			if (role == cs.roles.end())
				throw invalid_structure("structure: assigned robot " + std::to_string(r) + " has no role");
			if (!instance.robots[r].offers(role->second))
				throw invalid_structure("structure: robot " + std::to_string(r) + " cannot perform its role");
			++assigned;
		}
	}
	if (cs.roles.size() != assigned)
		throw invalid_structure("structure: roles given for unassigned robots");
	for (const RobotId r : cs.unassigned)
	{
		if (r >= n)
			throw invalid_structure("structure: unknown robot " + std::to_string(r));
		if (seen[r]++)
			throw invalid_structure("structure: robot " + std::to_string(r) + " both assigned and unassigned");
	}
	for (std::size_t r = 0; r < n; ++r)
		if (!seen[r])
			throw invalid_structure("structure: robot " + std::to_string(r) + " missing");
}

/// True when the roles held inside task t's coalition fill all its slots.
inline bool task_satisfied(const Task& task, const CoalitionStructure& cs)
{
	std::map<ServiceId, std::size_t> filled;
	for (const RobotId r : cs.coalition(task.id))
		if (const auto it = cs.roles.find(r); it != cs.roles.end())
			++filled[it->second];
	for (const auto& [service, count] : task.requirements)
	{
		const auto it = filled.find(service);
		if (it == filled.end() || it->second < count)
			return false;
	}
	return true;
}

/// Sum of utilities of tasks whose slots are all filled (all-or-nothing).
inline std::int64_t mission_utility(const ProblemInstance& instance, const CoalitionStructure& cs)
{
	validate_structure(instance, cs);
	std::int64_t total = 0;
	for (const Task& t : instance.tasks)
		if (task_satisfied(t, cs))
			total += t.utility;
	return total;
}

/// Per-member share of a task's reward for a coalition of `size` robots; it
/// peaks in total value at size == desired_size and strictly decreases per
/// member as the coalition grows.
inline double peaked_reward(std::int64_t utility, std::size_t desired_size, std::size_t size)
{
	if (desired_size == 0)
		throw std::invalid_argument("peaked_reward: desired size must be positive");
	const double nj = static_cast<double>(desired_size);
	return static_cast<double>(utility) / nj * std::exp(-static_cast<double>(size) / nj + 1.0);
}

/// Builds a structure from per-task robot lists and their roles; every robot
/// not listed becomes unassigned.
inline CoalitionStructure make_structure(std::size_t robot_count,
                                         const std::map<TaskId, std::vector<std::pair<RobotId, ServiceId>>>& bundles)
{
	CoalitionStructure cs;
	std::vector<char> used(robot_count, 0);
	for (const auto& [task, members] : bundles)
	{
		if (members.empty())
			continue;
		auto& list = cs.assignment[task];
		for (const auto& [robot, service] : members)
		{
			list.push_back(robot);
			cs.roles[robot] = service;
			used.at(robot) = 1;
		}
		std::sort(list.begin(), list.end());
	}
	for (RobotId r = 0; r < robot_count; ++r)
		if (!used[r])
			cs.unassigned.push_back(r);
	return cs;
}

} // namespace coalition

#endif // COALITION_MODEL_HPP
