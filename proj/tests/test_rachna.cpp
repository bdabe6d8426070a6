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
using rachna::Bundle;

namespace {

using Members = std::vector<std::pair<RobotId, ServiceId>>;

std::optional<Bundle<Rational>> cheapest(const ProblemInstance& inst, const Task& t, const std::vector<Rational>& salary)
{
	const auto agents = rachna::make_service_agents(inst);
	const auto ordered = rachna::order_by_salary<Rational>(agents, salary);
	return rachna::cheapest_bundle<Rational>(inst, t, salary, ordered);
}

/// Smallest salary total over every feasible coalition (exhaustive).
std::optional<Rational> cheapest_by_enumeration(const ProblemInstance& inst, const Task& t,
                                                const std::vector<Rational>& salary)
{
	std::optional<Rational> best;
	const std::size_t n = inst.robots.size();
	for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
	{
		if (static_cast<std::size_t>(__builtin_popcountll(mask)) != required_size(t))
			continue;
		std::vector<Robot> c;
		Rational cost(0);
		for (RobotId r = 0; r < n; ++r)
			if (mask >> r & 1)
			{
				c.push_back(inst.robots[r]);
				cost += salary[r];
			}
		if (roles_exist(t, c) && (!best || cost < *best))
			best = cost;
	}
	return best;
}

} // namespace

TEST(RachnaEpsilon, FixedAndDynamic)
{
	EXPECT_EQ(rachna::epsilon_for(rachna::Variant::fixed, 1000, Rational(1)), Rational(1));
	EXPECT_EQ(rachna::epsilon_for(rachna::Variant::dynamic, 1000, Rational(1)), Rational(1, 1000));
	EXPECT_EQ(rachna::epsilon_for(rachna::Variant::dynamic, 1, Rational(5)), Rational(1));
	EXPECT_THROW(rachna::epsilon_for(rachna::Variant::fixed, 0, Rational(1)), std::invalid_argument);
	EXPECT_THROW(rachna::epsilon_for(rachna::Variant::fixed, 3, Rational(0)), std::invalid_argument);
}

TEST(RachnaBundle, ZeroSalaryPicks)
{
	const auto inst = instance(1, {robot(0, {0}), robot(1, {0}), robot(2, {0})}, {task(0, 9, {{0, 2}})});
	const auto b = cheapest(inst, inst.tasks[0], {Rational(0), Rational(0), Rational(5)});
	ASSERT_TRUE(b);
	EXPECT_EQ(b->members, (Members{{0, ServiceId(0)}, {1, ServiceId(0)}}));
	EXPECT_EQ(b->cost, Rational(0));
}

TEST(RachnaBundle, ConflictIsRepaired)
{
	// r0 is cheapest for s0 but is also the only s1 robot.
	const auto inst = instance(2, {robot(0, {0, 1}), robot(1, {0})}, {task(0, 9, {{0, 1}, {1, 1}})});
	const auto b = cheapest(inst, inst.tasks[0], {Rational(0), Rational(0)});
	ASSERT_TRUE(b);
	EXPECT_EQ(b->members, (Members{{0, ServiceId(1)}, {1, ServiceId(0)}}));
}

TEST(RachnaBundle, EmptyRosterIsAbsent)
{
	const auto inst = instance(2, {robot(0, {1})}, {task(0, 9, {{0, 1}})});
	EXPECT_FALSE(cheapest(inst, inst.tasks[0], {Rational(0)}));
}

TEST(RachnaBundle, FoundWheneverAnyCoalitionExistsAndRolesAreLegal)
{
	CounterRng rng(41, "bundle");
	int found = 0;
	for (int trial = 0; trial < 1500; ++trial)
	{
		const auto inst = random_instance(rng, 1 + rng.below(8), 1, 1 + rng.below(4), 3, 5);
		std::vector<Rational> salary(inst.robots.size());
		for (auto& s : salary)
			s = Rational(rng.between(0, 3));
		const Task& t = inst.tasks[0];
		const auto b = cheapest(inst, t, salary);
		const auto best = cheapest_by_enumeration(inst, t, salary);
		ASSERT_EQ(b.has_value(), best.has_value()) << "trial " << trial;
		if (!b)
			continue;
		++found;
		std::map<ServiceId, std::size_t> counts;
		Rational cost(0);
		std::set<RobotId> distinct;
		for (const auto& [r, s] : b->members)
		{
			EXPECT_TRUE(inst.robots[r].offers(s));
			EXPECT_TRUE(distinct.insert(r).second);
			++counts[s];
			cost += salary[r];
		}
		EXPECT_EQ(counts, t.requirements);
		EXPECT_EQ(cost, b->cost);
		EXPECT_GE(b->cost, *best);
	}
	EXPECT_GT(found, 200);
}

TEST(RachnaBundle, SingleServiceRobotsGiveTheCheapestBundle)
{
	CounterRng rng(42, "single");
	for (int trial = 0; trial < 500; ++trial)
	{
		const auto inst = random_instance(rng, 1 + rng.below(9), 1, 1 + rng.below(3), 1, 4);
		std::vector<Rational> salary(inst.robots.size());
		for (auto& s : salary)
			s = Rational(rng.between(0, 9), 2);
		const auto b = cheapest(inst, inst.tasks[0], salary);
		const auto best = cheapest_by_enumeration(inst, inst.tasks[0], salary);
		ASSERT_EQ(b.has_value(), best.has_value());
		if (b)
		{
			EXPECT_EQ(b->cost, *best);
		}
	}
}

TEST(RachnaBid, Threshold)
{
	EXPECT_FALSE(rachna::place_bid(Rational(0), 100, Rational(1), Rational(50)));
	const auto dt = rachna::place_bid(Rational(0), 100, Rational(1, 1000), Rational(1));
	ASSERT_TRUE(dt);
	EXPECT_EQ(*dt, Rational(1, 10));
	EXPECT_EQ(rachna::place_bid(Rational(3), 2, Rational(1), Rational(10)), Rational(5));
	EXPECT_EQ(rachna::place_bid(Rational(3), 2, Rational(1), Rational(5)), Rational(5));
}

TEST(RachnaAward, RaisesSalariesOfFreshRobots)
{
	rachna::AuctionState<Rational> state(2, 1);
	Bundle<Rational> b{{{0, ServiceId(0)}, {1, ServiceId(0)}}, Rational(0)};
	const auto released = rachna::award(state, 0, b, Rational(1), Rational(2));
	EXPECT_TRUE(released.empty());
	EXPECT_EQ(state.salary, (std::vector<Rational>{Rational(1), Rational(1)}));
	EXPECT_EQ(state.holder[0], std::optional<TaskId>(0));
	EXPECT_TRUE(state.tasks[0].bundle);
}

TEST(RachnaAward, StealReleasesTheWholeBundle)
{
	rachna::AuctionState<Rational> state(3, 2);
	rachna::award(state, 0, Bundle<Rational>{{{0, ServiceId(0)}, {1, ServiceId(0)}}, Rational(0)}, Rational(1),
	              Rational(2));
	const auto released =
	    rachna::award(state, 1, Bundle<Rational>{{{1, ServiceId(0)}, {2, ServiceId(0)}}, Rational(1)}, Rational(1),
	                  Rational(3));
	EXPECT_EQ(released, (std::vector<RobotId>{0, 1}));
	EXPECT_FALSE(state.tasks[0].bundle);
	EXPECT_FALSE(state.holder[0]);
	EXPECT_EQ(state.holder[1], std::optional<TaskId>(1));
	EXPECT_EQ(state.salary, (std::vector<Rational>{Rational(1), Rational(2), Rational(1)}));
}

TEST(RachnaRun, StealTraceGivesTheRobotsToTheRicherTask)
{
	// Both tasks want the same two robots; the richer task outbids.
	const auto inst = instance(1, {robot(0, {0}), robot(1, {0})}, {task(0, 3, {{0, 2}}), task(1, 9, {{0, 2}})});
	const auto out = rachna::run_rachna(inst, {});
	EXPECT_EQ(out.structure.coalition(1), (std::vector<RobotId>{0, 1}));
	EXPECT_TRUE(out.structure.coalition(0).empty());
	EXPECT_EQ(mission_utility(inst, out.structure), 9);
}

TEST(RachnaRun, LargeCoalitionsFailWithUnitIncrement)
{
	// Every task needs more robots than its utility.
	const auto inst = instance(1, {robot(0, {0}), robot(1, {0}), robot(2, {0}), robot(3, {0}), robot(4, {0})},
	                           {task(0, 2, {{0, 3}}), task(1, 1, {{0, 2}})});
	const auto fixed = rachna::run_rachna(inst, {});
	EXPECT_EQ(mission_utility(inst, fixed.structure), 0);
	rachna::RachnaParams dynamic;
	dynamic.variant = rachna::Variant::dynamic;
	const auto dt = rachna::run_rachna(inst, dynamic);
	EXPECT_EQ(mission_utility(inst, dt.structure), 3);
}

TEST(RachnaRun, UncontestedTaskWinsInRoundOne)
{
	const auto inst = instance(2, {robot(0, {0}), robot(1, {1})}, {task(0, 10, {{0, 1}, {1, 1}})});
	const auto out = rachna::run_rachna(inst, {});
	EXPECT_EQ(mission_utility(inst, out.structure), 10);
	EXPECT_EQ(out.iterations, 2u);  // the win, then a round with no bids
	EXPECT_EQ(out.comm.per_round.size(), 2u);
}

TEST(RachnaRun, PropertiesOnGeneratedInstances)
{
	std::uint64_t seed = 100;
	for (const auto variant : {rachna::Variant::fixed, rachna::Variant::dynamic})
		for (const std::size_t n : {10, 25, 50})
			for (const std::int64_t p : {10, 50})
				for (const auto& [types, spr] : std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}, {5, 1}, {5, 5}})
				{
					const auto inst = generate_instance(config(n, p, types, spr, ++seed));
					rachna::RachnaParams params;
					params.variant = variant;
					const auto out = rachna::run_rachna(inst, params);
					EXPECT_NO_THROW(validate_structure(inst, out.structure));
					const Rational eps = rachna::epsilon_for(variant, n, Rational(1));
					const auto cap = (Rational(static_cast<std::int64_t>(n) * max_task_utility(inst)) / eps).ceil();
					EXPECT_LE(static_cast<std::int64_t>(out.iterations), cap);
					for (const Task& t : inst.tasks)
						if (Rational(static_cast<std::int64_t>(required_size(t))) * eps > Rational(t.utility))
						{
							EXPECT_TRUE(out.structure.coalition(t.id).empty());
						}
					const auto again = rachna::run_rachna(inst, params);
					EXPECT_EQ(again.structure.assignment, out.structure.assignment);
					EXPECT_EQ(again.comm.total_bytes, out.comm.total_bytes);
					if (variant == rachna::Variant::dynamic)
					{
						EXPECT_EQ(mission_utility(inst, out.structure), total_task_utility(inst));
					}
				}
}

TEST(RachnaRun, SalariesNeverFallAndStayBounded)
{
	// Replays the auction rounds with Rational money and checks every award.
	const auto inst = generate_instance(config(30, 50, 5, 2, 8));
	const Rational eps(1);
	rachna::AuctionState<Rational> state(inst.robots.size(), inst.tasks.size());
	const auto agents = rachna::make_service_agents(inst);
	for (int round = 0; round < 200; ++round)
	{
		const auto ordered = rachna::order_by_salary<Rational>(agents, state.salary);
		bool any = false;
		for (const Task& t : inst.tasks)
		{
			if (state.tasks[t.id].bundle)
				continue;
			const auto b = rachna::cheapest_bundle<Rational>(inst, t, state.salary, ordered);
			if (!b)
				continue;
			const auto bid = rachna::place_bid(b->cost, required_size(t), eps, Rational(t.utility));
			if (!bid)
				continue;
			const auto before = state.salary;
			rachna::award(state, t.id, *b, eps, *bid);
			for (std::size_t r = 0; r < before.size(); ++r)
				EXPECT_GE(state.salary[r], before[r]);
			any = true;
			break;
		}
		if (!any)
			break;
	}
	for (const auto& s : state.salary)
		EXPECT_LE(s, Rational(max_task_utility(inst)));
}
