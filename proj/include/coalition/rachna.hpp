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

#ifndef COALITION_RACHNA_HPP
#define COALITION_RACHNA_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "model.hpp"
#include "netsim.hpp"
#include "outcome.hpp"
#include "rational.hpp"

namespace coalition::rachna {

enum class Variant
{
	fixed,
	dynamic  // increment 1/n
};

struct RachnaParams
{
	Variant variant = Variant::fixed;
	Rational epsilon_inc{1};
	std::uint64_t round_cap = 0;  // 0 selects ceil(n * u_max / epsilon)
	SizeModel sizes;
};

/// Sells one service type; roster holds the robots offering it, ascending id.
struct ServiceAgent
{
	ServiceId service;
	std::vector<RobotId> roster;
};

/// A complete set of robots, with roles, that satisfies one task.
template <typename Money>
struct Bundle
{
	std::vector<std::pair<RobotId, ServiceId>> members;
	Money cost{};
};

template <typename Money>
struct TaskAgentState
{
	TaskId task = 0;
	std::optional<Bundle<Money>> bundle;
	Money last_bid{};
};

/// Salaries and holdings shared by every agent of one auction.
template <typename Money>
struct AuctionState
{
	std::vector<Money> salary;               // per robot
	std::vector<std::optional<TaskId>> holder;  // per robot
	std::vector<TaskAgentState<Money>> tasks;

	AuctionState(std::size_t robots, std::size_t task_count) : salary(robots), holder(robots), tasks(task_count)
	{
		for (TaskId t = 0; t < task_count; ++t)
			tasks[t].task = t;
	}
};

inline Rational epsilon_for(Variant variant, std::size_t n, const Rational& base)
{
	if (n == 0)
		throw std::invalid_argument("epsilon_for: n must be positive");
	if (variant == Variant::dynamic)
		return Rational(1, static_cast<std::int64_t>(n));
	if (base <= Rational(0))
		throw std::invalid_argument("epsilon_for: increment must be positive");
	return base;
}

inline std::vector<ServiceAgent> make_service_agents(const ProblemInstance& instance)
{
	std::vector<ServiceAgent> agents(instance.service_type_count);
	for (std::size_t s = 0; s < agents.size(); ++s)
		agents[s].service = ServiceId(s);
	for (const Robot& r : instance.robots)
		for (const ServiceId s : r.services)
			agents.at(s.index).roster.push_back(r.id);
	for (auto& a : agents)
		std::sort(a.roster.begin(), a.roster.end());
	return agents;
}

/// Rosters reordered by (salary, robot id), the order cheapest_bundle scans.
template <typename Money>
std::vector<std::vector<RobotId>> order_by_salary(const std::vector<ServiceAgent>& agents,
                                                  std::span<const Money> salaries)
{
	std::vector<std::vector<RobotId>> ordered(agents.size());
	for (std::size_t s = 0; s < agents.size(); ++s)
	{
		ordered[s] = agents[s].roster;
		std::sort(ordered[s].begin(), ordered[s].end(), [&](RobotId a, RobotId b) {
			return salaries[a] < salaries[b] || (salaries[a] == salaries[b] && a < b);
		});
	}
	return ordered;
}

/// Greedy fill in ascending service order. When a service runs out of free
/// robots, an alternating chain of role swaps inside the bundle is tried
/// before giving up, so a robot taken early for one service can move to
/// another it also offers.
template <typename Money>
std::optional<Bundle<Money>> cheapest_bundle(const ProblemInstance& instance, const Task& task,
                                             std::span<const Money> salaries,
                                             const std::vector<std::vector<RobotId>>& ordered)
{
	const std::size_t n = instance.robots.size();
	std::vector<char> taken(n, 0);
	std::vector<std::pair<RobotId, ServiceId>> members;
	std::vector<std::size_t> cursor(ordered.size(), 0);

	const auto peek = [&](ServiceId s) -> std::optional<RobotId> {
		if (s.index >= ordered.size())
			return std::nullopt;
		const auto& list = ordered[s.index];
		std::size_t& c = cursor[s.index];
		while (c < list.size() && taken[list[c]])
			++c;
		if (c == list.size())
			return std::nullopt;
		return list[c];
	};

	for (const auto& [service, count] : task.requirements)
	{
		for (std::size_t k = 0; k < count; ++k)
		{
			if (const auto free = peek(service))
			{
				taken[*free] = 1;
				members.emplace_back(*free, service);
				continue;
			}
			// parent[z] = (service the mover leaves z for, index of the mover)
			std::map<ServiceId, std::pair<ServiceId, std::size_t>> parent;
			std::deque<ServiceId> queue{service};
			parent.emplace(service, std::pair{service, SIZE_MAX});
			std::optional<std::pair<ServiceId, RobotId>> end;
			while (!queue.empty() && !end)
			{
				const ServiceId x = queue.front();
				queue.pop_front();
				for (std::size_t i = 0; i < members.size() && !end; ++i)
				{
					const auto [robot, role] = members[i];
					if (parent.contains(role) || !instance.robots[robot].offers(x))
						continue;
					parent.emplace(role, std::pair{x, i});
					if (const auto free = peek(role))
						end = std::pair{role, *free};
					else
						queue.push_back(role);
				}
			}
			if (!end)
				return std::nullopt;
			taken[end->second] = 1;
			members.emplace_back(end->second, end->first);
			for (ServiceId z = end->first; z != service;)
			{
				const auto [prev, mover] = parent.at(z);
				members[mover].second = prev;
				z = prev;
			}
		}
	}

	Bundle<Money> bundle;
	std::sort(members.begin(), members.end());
	for (const auto& [robot, role] : members)
		bundle.cost += salaries[robot];
	bundle.members = std::move(members);
	return bundle;
}

/// Threshold bid: salaries plus one increment per required slot, valid only
/// while it does not exceed the task's utility.
template <typename Money>
std::optional<Money> place_bid(const Money& cost, std::size_t n_slots, const Money& epsilon, const Money& utility)
{
	Money bid = cost;
	for (std::size_t i = 0; i < n_slots; ++i)
		bid += epsilon;
	if (bid > utility)
		return std::nullopt;
	return bid;
}

/// Hands `bundle` to `task`. Every member's salary rises by epsilon; a task
/// losing any robot gives up its whole bundle. Returns the released robots.
template <typename Money>
std::vector<RobotId> award(AuctionState<Money>& state, TaskId task, const Bundle<Money>& bundle, const Money& epsilon,
                           const Money& bid)
{
	std::vector<RobotId> released;
	std::vector<TaskId> losers;
	for (const auto& [robot, role] : bundle.members)
	{
		const auto previous = state.holder.at(robot);
		if (previous && *previous != task && std::find(losers.begin(), losers.end(), *previous) == losers.end())
			losers.push_back(*previous);
	}
	for (const TaskId loser : losers)
	{
		auto& held = state.tasks.at(loser).bundle;
		for (const auto& [robot, role] : held->members)
		{
			state.holder[robot].reset();
			released.push_back(robot);
		}
		held.reset();
	}
	for (const auto& [robot, role] : bundle.members)
	{
		state.salary.at(robot) += epsilon;
		state.holder[robot] = task;
	}
	state.tasks.at(task).bundle = bundle;
	state.tasks.at(task).last_bid = bid;
	std::sort(released.begin(), released.end());
	return released;
}

/// Overflow-checked a * b for tick arithmetic.
inline std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
	std::int64_t out = 0;
	if (__builtin_mul_overflow(a, b, &out))
		throw std::overflow_error("rachna: money out of range");
	return out;
}

/// Runs the ascending auction. Money is held as integer ticks of the
/// increment's denominator, so every amount is exact.
inline RunOutcome run_rachna(const ProblemInstance& instance, const RachnaParams& params,
                             const Deadline& deadline = Deadline::none())
{
	validate_instance(instance);
	RunOutcome out;
	const std::size_t n = instance.robots.size();
	const std::size_t m = instance.tasks.size();
	if (n == 0 || m == 0)
	{
		out.structure = make_structure(n, {});
		return out;
	}

	const Rational epsilon = epsilon_for(params.variant, n, params.epsilon_inc);
	const std::int64_t scale = epsilon.den();
	const std::int64_t eps = epsilon.num();
	const std::int64_t u_max = max_task_utility(instance);
	const std::uint64_t cap =
	    params.round_cap != 0
	        ? params.round_cap
	        : static_cast<std::uint64_t>((Rational(checked_mul(static_cast<std::int64_t>(n), u_max)) / epsilon).ceil());

	std::vector<std::int64_t> utility(m);
	for (TaskId t = 0; t < m; ++t)
		utility[t] = checked_mul(instance.tasks[t].utility, scale);

	const auto agents = make_service_agents(instance);
	AuctionState<std::int64_t> state(n, m);

	struct Offer
	{
		TaskId task;
		Bundle<std::int64_t> bundle;
		std::int64_t bid;
	};

	std::uint64_t rounds = 0;
	while (true)
	{
		if (rounds >= cap)
		{
			out.note = "round cap reached";
			break;
		}
		if (deadline.expired())
		{
			out.status = TrialStatus::timeout;
			break;
		}
		++rounds;
		out.comm.begin_round();

		const auto ordered = order_by_salary<std::int64_t>(agents, state.salary);
		std::vector<Offer> offers;
		for (TaskId t = 0; t < m; ++t)
		{
			if (state.tasks[t].bundle)
				continue;
			const Task& task = instance.tasks[t];
			// Salary tables from every service agent the task needs.
			for (const auto& [service, count] : task.requirements)
				out.comm.record(params.sizes.table_bytes(agents[service.index].roster.size()));
			auto bundle = cheapest_bundle<std::int64_t>(instance, task, state.salary, ordered);
			if (!bundle)
				continue;
			const auto bid = place_bid<std::int64_t>(bundle->cost, required_size(task), eps, utility[t]);
			if (!bid)
				continue;
			for (const auto& [service, count] : task.requirements)
				out.comm.record(params.sizes.table_bytes(count));
			offers.push_back({t, std::move(*bundle), *bid});
		}
		if (offers.empty())
			break;

		std::stable_sort(offers.begin(), offers.end(), [](const Offer& a, const Offer& b) {
			return a.bid > b.bid || (a.bid == b.bid && a.task < b.task);
		});
		std::vector<char> moved(n, 0);
		for (const Offer& offer : offers)
		{
			const bool stale = std::any_of(offer.bundle.members.begin(), offer.bundle.members.end(),
			                               [&](const auto& member) { return moved[member.first] != 0; });
			if (stale)
				continue;
			const auto released = award<std::int64_t>(state, offer.task, offer.bundle, eps, offer.bid);
			for (const auto& [robot, role] : offer.bundle.members)
				moved[robot] = 1;
			out.comm.record(params.sizes.header_bytes, offer.bundle.members.size() + released.size());
		}
	}

	std::map<TaskId, std::vector<std::pair<RobotId, ServiceId>>> bundles;
	for (const auto& agent : state.tasks)
		if (agent.bundle)
			bundles.emplace(agent.task, agent.bundle->members);
	out.structure = make_structure(n, bundles);
	out.iterations = rounds;
	return out;
}

} // namespace coalition::rachna

#endif // COALITION_RACHNA_HPP
