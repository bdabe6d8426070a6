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

#include <gtest/gtest.h>

#include "support.hpp"

using namespace coalition;
using namespace testing_support;

namespace {

using Members = std::vector<std::pair<RobotId, ServiceId>>;

std::vector<RobotId> all_robots(const ProblemInstance& inst)
{
	std::vector<RobotId> ids(inst.robots.size());
	std::iota(ids.begin(), ids.end(), 0);
	return ids;
}

} // namespace

TEST(SdaEnumeration, LexicographicFirstPair)
{
	const auto inst = instance(1, {robot(0, {0}), robot(1, {0}), robot(2, {0})}, {task(0, 5, {{0, 2}})});
	const auto ids = all_robots(inst);
	const auto bid = sda::enumeration_bid<std::int64_t>(inst, inst.tasks[0], ids, 3, 1000);
	ASSERT_TRUE(bid);
	EXPECT_EQ(bid->members, (Members{{0, ServiceId(0)}, {1, ServiceId(0)}}));
	EXPECT_EQ(bid->cost, 6);
}

TEST(SdaEnumeration, UnfillableIsAbsent)
{
	const auto inst = instance(2, {robot(0, {0})}, {task(0, 5, {{0, 1}, {1, 1}})});
	const auto ids = all_robots(inst);
	EXPECT_FALSE(sda::enumeration_bid<std::int64_t>(inst, inst.tasks[0], ids, 3, 1000));
}

TEST(SdaEnumeration, BudgetIsEnforced)
{
	// Only one robot offers s1, so no coalition works and the search is exhaustive.
	std::vector<Robot> robots;
	for (RobotId r = 0; r < 12; ++r)
		robots.push_back(robot(r, {r < 11 ? std::size_t{0} : std::size_t{1}}));
	const auto inst = instance(2, robots, {task(0, 5, {{0, 3}, {1, 2}})});
	const auto ids = all_robots(inst);
	EXPECT_THROW(sda::enumeration_bid<std::int64_t>(inst, inst.tasks[0], ids, 1, 10), sda::budget_exceeded);
	EXPECT_FALSE(sda::enumeration_bid<std::int64_t>(inst, inst.tasks[0], ids, 1, 1'000'000));
}

TEST(SdaMatching, SingleRobotPrice)
{
	const auto inst = instance(1, {robot(0, {0})}, {task(0, 10, {{0, 1}})});
	const auto ids = all_robots(inst);
	const auto bid = sda::matching_bid<std::int64_t>(inst, inst.tasks[0], ids, std::int64_t{7});
	ASSERT_TRUE(bid);
	EXPECT_EQ(bid->cost, 7);
}

TEST(SdaMatching, MultiServiceContentionMatchesFeasible)
{
	const auto inst = instance(2, {robot(0, {0, 1}), robot(1, {0}), robot(2, {0})}, {task(0, 10, {{0, 1}, {1, 1}})});
	const auto ids = all_robots(inst);
	const auto bid = sda::matching_bid<std::int64_t>(inst, inst.tasks[0], ids, std::int64_t{2});
	ASSERT_TRUE(bid);
	EXPECT_EQ(bid->members, (Members{{0, ServiceId(1)}, {1, ServiceId(0)}}));
	std::vector<Robot> chosen;
	for (const auto& [r, s] : bid->members)
		chosen.push_back(inst.robots[r]);
	EXPECT_TRUE(feasible(inst.tasks[0], std::span<const Robot>(chosen)));
}

TEST(SdaMatching, VariedSalariesAgainstEnumeration)
{
	CounterRng rng(51, "varied");
	for (int trial = 0; trial < 400; ++trial)
	{
		const auto inst = random_instance(rng, 1 + rng.below(8), 1, 1 + rng.below(3), 3, 4);
		std::vector<std::int64_t> salary(inst.robots.size());
		for (auto& s : salary)
			s = rng.between(0, 6);
		const auto ids = all_robots(inst);
		const auto bid = sda::matching_bid<std::int64_t>(inst, inst.tasks[0], ids, std::span<const std::int64_t>(salary));
		// Exhaustive cheapest coalition.
		std::optional<std::int64_t> best;
		const std::size_t k = required_size(inst.tasks[0]);
		for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inst.robots.size()); ++mask)
		{
			if (static_cast<std::size_t>(__builtin_popcountll(mask)) != k)
				continue;
			std::vector<Robot> c;
			std::int64_t cost = 0;
			for (RobotId r = 0; r < inst.robots.size(); ++r)
				if (mask >> r & 1)
				{
					c.push_back(inst.robots[r]);
					cost += salary[r];
				}
			if (roles_exist(inst.tasks[0], c) && (!best || cost < *best))
				best = cost;
		}
		ASSERT_EQ(bid.has_value(), best.has_value());
		if (bid)
		{
			EXPECT_EQ(bid->cost, *best);
		}
	}
}

TEST(SdaStrategies, UniformSalaryBidsAreIdentical)
{
	CounterRng rng(52, "uniform");
	for (int trial = 0; trial < 600; ++trial)
	{
		const auto inst = random_instance(rng, 1 + rng.below(12), 1, 1 + rng.below(4), 3, 4);
		auto ids = all_robots(inst);
		// Random unsold subset.
		std::erase_if(ids, [&](RobotId) { return rng.below(4) == 0; });
		const std::int64_t salary = rng.between(0, 9);
		const auto e = sda::enumeration_bid<std::int64_t>(inst, inst.tasks[0], ids, salary, 10'000'000);
		const auto m = sda::matching_bid<std::int64_t>(inst, inst.tasks[0], ids, salary);
		ASSERT_EQ(e.has_value(), m.has_value()) << "trial " << trial;
		if (!e)
			continue;
		EXPECT_EQ(e->cost, static_cast<std::int64_t>(required_size(inst.tasks[0])) * salary);
		EXPECT_EQ(e->cost, m->cost);
		std::vector<RobotId> er, mr;
		for (const auto& [r, s] : e->members)
			er.push_back(r);
		for (const auto& [r, s] : m->members)
		{
			EXPECT_TRUE(inst.robots[r].offers(s));
			mr.push_back(r);
		}
		EXPECT_EQ(er, mr) << "trial " << trial;
	}
}

TEST(SdaRun, DescentHandTrace)
{
	const auto inst = instance(1, {robot(0, {0}), robot(1, {0})}, {task(0, 10, {{0, 2}})});
	sda::SalaryBoard board;
	const auto out = sda::run_sda(inst, {}, Deadline::none(), &board);
	EXPECT_EQ(mission_utility(inst, out.structure), 10);
	ASSERT_EQ(board.sold.size(), 2u);
	EXPECT_EQ(board.sold.at(0).price + board.sold.at(1).price, Rational(8));
	EXPECT_EQ(out.iterations, 7u);  // salaries 10, 9, ..., 4
}

TEST(SdaRun, UnfillableTasksStopAtZeroSalary)
{
	const auto inst = instance(2, {robot(0, {0}), robot(1, {0})}, {task(0, 4, {{0, 1}}), task(1, 9, {{1, 1}})});
	for (const auto strategy : {sda::Strategy::enumeration, sda::Strategy::matching})
	{
		sda::SdaParams params;
		params.strategy = strategy;
		sda::SalaryBoard board;
		const auto out = sda::run_sda(inst, params, Deadline::none(), &board);
		EXPECT_EQ(mission_utility(inst, out.structure), 4);
		EXPECT_EQ(board.current_salary, Rational(0));
		EXPECT_EQ(out.iterations, 10u);
	}
}

TEST(SdaRun, FractionalDecrement)
{
	const auto inst = instance(1, {robot(0, {0}), robot(1, {0})}, {task(0, 3, {{0, 2}})});
	sda::SdaParams params;
	params.epsilon_dec = Rational(1, 2);
	sda::SalaryBoard board;
	sda::run_sda(inst, params, Deadline::none(), &board);
	ASSERT_EQ(board.sold.size(), 2u);
	EXPECT_EQ(board.sold.at(0).price, Rational(1));  // 2 * 1 < 3, 2 * 3/2 is not
	params.epsilon_dec = Rational(0);
	EXPECT_THROW(sda::run_sda(inst, params), std::invalid_argument);
}

TEST(SdaRun, PurchasesAreAffordableAndPricesFall)
{
	std::uint64_t seed = 500;
	for (const std::size_t n : {10, 25, 40})
		for (const std::int64_t p : {10, 50})
			for (const auto& [types, spr] : std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}, {5, 1}, {5, 5}})
			{
				const auto inst = generate_instance(config(n, p, types, spr, ++seed));
				sda::SalaryBoard board;
				const auto out = sda::run_sda(inst, {}, Deadline::none(), &board);
				EXPECT_NO_THROW(validate_structure(inst, out.structure));
				std::map<TaskId, Rational> paid;
				for (const auto& [r, sale] : board.sold)
					paid[sale.task] += sale.price;
				for (const auto& [t, total] : paid)
					EXPECT_LT(total, Rational(inst.tasks[t].utility));
				std::vector<std::pair<std::size_t, Rational>> history;
				for (const auto& [r, sale] : board.sold)
					history.emplace_back(sale.round, sale.price);
				std::sort(history.begin(), history.end());
				for (std::size_t i = 1; i < history.size(); ++i)
					EXPECT_LE(history[i].second, history[i - 1].second);
				EXPECT_EQ(paid.size(), out.structure.assignment.size());
			}
}

TEST(SdaRun, SingleServiceInstancesAreSolvedOptimally)
{
	for (std::uint64_t seed = 0; seed < 20; ++seed)
	{
		const auto inst = generate_instance(config(25 + seed, seed % 2 ? 10 : 50, 1 + 4 * (seed % 3 == 0), 1, seed));
		const auto out = sda::run_sda(inst, {});
		EXPECT_EQ(mission_utility(inst, out.structure), total_task_utility(inst));
	}
}

TEST(SdaRun, StrategiesAgreeOnSmallInstances)
{
	std::uint64_t seed = 900;
	int compared = 0;
	for (int i = 0; i < 60; ++i)
	{
		const auto inst = generate_instance(config(5 + i % 16, i % 2 ? 10 : 50, 1 + i % 5, i % 5 == 0 ? 1 : 1 + i % 2, ++seed));
		sda::SdaParams e;
		e.strategy = sda::Strategy::enumeration;
		e.enumeration_budget = 2'000'000;
		const auto a = sda::run_sda(inst, e);
		if (a.status != TrialStatus::success)
			continue;
		const auto b = sda::run_sda(inst, {});
		EXPECT_EQ(mission_utility(inst, a.structure), mission_utility(inst, b.structure));
		EXPECT_EQ(a.structure.assignment, b.structure.assignment);
		++compared;
	}
	EXPECT_GT(compared, 40);
}

TEST(SdaRun, EnumerationBudgetEndsTheTrial)
{
	const auto inst = generate_instance(config(40, 10, 5, 1, 3));
	sda::SdaParams params;
	params.strategy = sda::Strategy::enumeration;
	params.enumeration_budget = 5;
	const auto out = sda::run_sda(inst, params);
	EXPECT_EQ(out.status, TrialStatus::limit_exceeded);
	EXPECT_NO_THROW(validate_structure(inst, out.structure));
}
