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

#ifndef COALITION_SDA_HPP
#define COALITION_SDA_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "matching.hpp"
#include "model.hpp"
#include "netsim.hpp"
#include "outcome.hpp"
#include "rational.hpp"

namespace coalition::sda {

enum class Strategy
{
	enumeration,
	matching
};

struct SdaParams
{
	Strategy strategy = Strategy::matching;
	Rational epsilon_dec{1};
	std::uint64_t enumeration_budget = 10'000'000;  // coalitions examined per task per round
	SizeModel sizes;
};

class budget_exceeded : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

template <typename Money>
struct Bid
{
	std::vector<std::pair<RobotId, ServiceId>> members;  // sorted by robot
	Money cost{};
};

struct Sale
{
	TaskId task;
	Rational price;
	std::size_t round;
};

/// One salary for every unsold robot; sold robots keep their price.
struct SalaryBoard
{
	Rational current_salary;
	std::map<RobotId, Sale> sold;
};

namespace detail {

template <typename Money>
Money times(const Money& salary, std::size_t k)
{
	Money total{};
	for (std::size_t i = 0; i < k; ++i)
		total += salary;
	return total;
}

} // namespace detail

/// First feasible coalition of size required_size(task), in lexicographic
/// robot-id order over `unsold` (ascending). Robots offering none of the
/// required services never appear in a feasible coalition and are skipped.
/// Throws budget_exceeded after `budget` coalitions have been examined.
template <typename Money>
std::optional<Bid<Money>> enumeration_bid(const ProblemInstance& instance, const Task& task,
                                          std::span<const RobotId> unsold, const Money& salary,
                                          std::uint64_t budget)
{
	const std::size_t k = required_size(task);
	std::vector<const Robot*> pool;
	for (const RobotId r : unsold)
	{
		const Robot& robot = instance.robots.at(r);
		const bool useful = std::any_of(task.requirements.begin(), task.requirements.end(),
		                                [&](const auto& req) { return robot.offers(req.first); });
		if (useful)
			pool.push_back(&robot);
	}
	if (k == 0)
		return Bid<Money>{};
	if (pool.size() < k)
		return std::nullopt;

	std::vector<std::size_t> index(k);
	for (std::size_t i = 0; i < k; ++i)
		index[i] = i;
	std::vector<const Robot*> coalition(k);
	std::uint64_t examined = 0;
	while (true)
	{
		if (++examined > budget)
			throw budget_exceeded("enumeration budget exceeded");
		for (std::size_t i = 0; i < k; ++i)
			coalition[i] = pool[index[i]];
		if (const auto roles = feasible(task, std::span<const Robot* const>(coalition)))
		{
			Bid<Money> bid;
			for (const auto& [robot, role] : *roles)
				bid.members.emplace_back(robot, role);
			bid.cost = detail::times(salary, k);
			return bid;
		}
		// Next combination in lexicographic order.
		std::size_t i = k;
		while (i > 0 && index[i - 1] == pool.size() - k + (i - 1))
			--i;
		if (i == 0)
			return std::nullopt;
		++index[i - 1];
		for (std::size_t j = i; j < k; ++j)
			index[j] = index[j - 1] + 1;
	}
}

/// Min-cost assignment of `unsold` robots (rows) to the task's slots
/// (columns); a robot may only fill a slot for a service it offers. Ties go
/// to the lexicographically first robot set, as in enumeration_bid.
template <typename Money>
std::optional<Bid<Money>> matching_bid(const ProblemInstance& instance, const Task& task,
                                       std::span<const RobotId> unsold, std::span<const Money> salaries)
{
	const std::vector<ServiceId> slots = expand_slots(task);
	CostMatrix<Money> costs(unsold.size(), slots.size());
	for (std::size_t i = 0; i < unsold.size(); ++i)
	{
		const Robot& robot = instance.robots.at(unsold[i]);
		for (std::size_t k = 0; k < slots.size(); ++k)
		{
			if (robot.offers(slots[k]))
				costs.set(i, k, salaries[unsold[i]]);
			else
				costs.forbid(i, k);
		}
	}
	const auto assignment = min_cost_assignment(costs, TieBreak::row_set);
	if (!assignment || assignment->size() != slots.size())
		return std::nullopt;
	Bid<Money> bid;
	for (const auto& [row, col] : assignment->pairs)
		bid.members.emplace_back(unsold[row], slots[col]);
	bid.cost = assignment->total_cost;
	return bid;
}

/// Uniform-salary form used by the auction.
template <typename Money>
std::optional<Bid<Money>> matching_bid(const ProblemInstance& instance, const Task& task,
                                       std::span<const RobotId> unsold, const Money& salary)
{
	const std::vector<Money> salaries(instance.robots.size(), salary);
	return matching_bid<Money>(instance, task, unsold, std::span<const Money>(salaries));
}

/// Runs the descending auction. Money is held as integer ticks of the
/// decrement's denominator.
inline RunOutcome run_sda(const ProblemInstance& instance, const SdaParams& params,
                          const Deadline& deadline = Deadline::none(), SalaryBoard* board = nullptr)
{
	validate_instance(instance);
	if (params.epsilon_dec <= Rational(0))
		throw std::invalid_argument("run_sda: decrement must be positive");
	RunOutcome out;
	const std::size_t n = instance.robots.size();
	const std::size_t m = instance.tasks.size();
	const std::int64_t scale = params.epsilon_dec.den();
	const std::int64_t eps = params.epsilon_dec.num();
	std::int64_t u_max_ticks = 0;
	if (__builtin_mul_overflow(max_task_utility(instance), scale, &u_max_ticks))
		throw std::overflow_error("run_sda: money out of range");
	std::int64_t salary = u_max_ticks + eps;

	std::vector<RobotId> unsold(n);
	for (RobotId r = 0; r < n; ++r)
		unsold[r] = r;
	struct Sold
	{
		TaskId task;
		std::int64_t price;
		std::size_t round;
	};
	std::vector<std::optional<Sold>> sold(n);
	std::map<TaskId, std::vector<std::pair<RobotId, ServiceId>>> bundles;
	std::vector<char> satisfied(m, 0);

	std::vector<std::size_t> offering(instance.service_type_count, 0);
	for (const Robot& r : instance.robots)
		for (const ServiceId s : r.services)
			++offering.at(s.index);

	std::size_t rounds = 0;
	while (!unsold.empty() && m > 0)
	{
		if (deadline.expired())
		{
			out.status = TrialStatus::timeout;
			break;
		}
		++rounds;
		out.comm.begin_round();
		salary = std::max<std::int64_t>(0, salary - eps);

		// Each service agent polls its unsold robots and the active tasks.
		std::size_t active = 0;
		for (TaskId t = 0; t < m; ++t)
			active += satisfied[t] ? 0 : 1;
		for (const std::size_t count : offering)
			out.comm.record(params.sizes.sda_query_bytes, count + active);

		bool aborted = false;
		for (TaskId t = 0; t < m && !unsold.empty(); ++t)
		{
			if (satisfied[t])
				continue;
			const Task& task = instance.tasks[t];
			std::optional<Bid<std::int64_t>> bid;
			if (params.strategy == Strategy::enumeration)
			{
				try
				{
					bid = enumeration_bid<std::int64_t>(instance, task, unsold, salary, params.enumeration_budget);
				}
				catch (const budget_exceeded&)
				{
					aborted = true;
					break;
				}
			}
			else
				bid = matching_bid<std::int64_t>(instance, task, unsold, salary);
			if (!bid || task.utility * scale <= bid->cost)
				continue;

			satisfied[t] = 1;
			bundles[t] = bid->members;
			for (const auto& [robot, role] : bid->members)
				sold[robot] = Sold{t, salary, rounds};
			std::erase_if(unsold, [&](RobotId r) { return sold[r].has_value(); });
			out.comm.record(params.sizes.sda_query_bytes, 2 * bid->members.size());
		}
		if (aborted)
		{
			out.status = TrialStatus::limit_exceeded;
			out.note = "enumeration budget exceeded";
			break;
		}
		if (salary == 0)
			break;
	}

	if (board)
	{
		board->current_salary = Rational(salary, scale);
		board->sold.clear();
		for (RobotId r = 0; r < n; ++r)
			if (sold[r])
				board->sold.emplace(r, Sale{sold[r]->task, Rational(sold[r]->price, scale), sold[r]->round});
	}
	out.structure = make_structure(n, bundles);
	out.iterations = rounds;
	return out;
}

} // namespace coalition::sda

#endif // COALITION_SDA_HPP
