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

#ifndef COALITION_GRAPE_HPP
#define COALITION_GRAPE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "model.hpp"
#include "netsim.hpp"
#include "outcome.hpp"
#include "random.hpp"

namespace coalition::grape {

/// Raised for instances GRAPE has no model for (more than one service type).
class unsupported_instance : public std::invalid_argument
{
public:
	using std::invalid_argument::invalid_argument;
};

inline constexpr std::int32_t unassigned = -1;

/// Who is on which task, with cached coalition sizes.
struct Partition
{
	std::vector<std::int32_t> task_of;  // per robot; `unassigned` or a task id
	std::vector<std::size_t> sizes;     // per task

	Partition() = default;
	Partition(std::size_t robots, std::size_t tasks) : task_of(robots, unassigned), sizes(tasks, 0) {}

	std::optional<TaskId> assignment(RobotId r) const
	{
		const std::int32_t t = task_of.at(r);
		return t == unassigned ? std::nullopt : std::optional<TaskId>(static_cast<TaskId>(t));
	}

	void move(RobotId r, std::optional<TaskId> to)
	{
		if (const auto from = assignment(r))
			--sizes[*from];
		task_of[r] = to ? static_cast<std::int32_t>(*to) : unassigned;
		if (to)
			++sizes.at(*to);
	}
};

/// A robot's view of every robot's assignment. Precedence between beliefs is
/// (update_count, stamp) lexicographic.
struct Belief
{
	Partition partition;
	std::uint64_t update_count = 0;
	double stamp = 0.0;  // uniform in (0, 1), redrawn on every committed change
};

struct GrapeParams
{
	std::optional<Topology> topology;  // fully connected when absent
	std::size_t max_iterations = 0;    // 0 selects 2 n^2
	std::uint64_t seed = 0;
	SizeModel sizes;
	std::function<void(std::size_t, const Belief&)> on_iteration;  // sees the dominating belief after each exchange
};

inline void require_single_service(const ProblemInstance& instance)
{
	if (instance.service_type_count != 1)
		throw unsupported_instance("GRAPE supports only single-service-type instances");
}

/// Per-robot reward for being on `task` (joining it if not already there).
inline double local_utility(const ProblemInstance& instance, RobotId robot, std::optional<TaskId> task,
                            const Partition& partition)
{
	require_single_service(instance);
	if (!task)
		return 0.0;
	const Task& t = instance.tasks.at(*task);
	const bool member = partition.assignment(robot) == task;
	const std::size_t size = partition.sizes.at(*task) + (member ? 0 : 1);
	return peaked_reward(t.utility, required_size(t), size);
}

/// Best option for `robot` under `belief`. The current assignment is kept
/// unless some option is strictly better; ties go to the lowest task id.
inline std::optional<TaskId> select_coalition(const ProblemInstance& instance, RobotId robot, const Belief& belief)
{
	const std::optional<TaskId> current = belief.partition.assignment(robot);
	std::optional<TaskId> choice = current;
	double best = local_utility(instance, robot, current, belief.partition);
	for (TaskId t = 0; t < instance.tasks.size(); ++t)
	{
		if (t == current)
			continue;
		const double value = local_utility(instance, robot, t, belief.partition);
		if (value > best)
		{
			best = value;
			choice = t;
		}
	}
	return choice;
}

/// a takes precedence over b: updated more times, or as often and more recently.
inline bool dominates(const Belief& a, const Belief& b) noexcept
{
	return a.update_count > b.update_count || (a.update_count == b.update_count && a.stamp > b.stamp);
}

/// No robot can raise its own reward by moving alone (to any task or to
/// unassigned).
inline bool is_nash_stable(const ProblemInstance& instance, const Partition& partition)
{
	require_single_service(instance);
	for (RobotId r = 0; r < instance.robots.size(); ++r)
	{
		const auto current = partition.assignment(r);
		const double stay = local_utility(instance, r, current, partition);
		if (stay < 0.0)
			return false;
		for (TaskId t = 0; t < instance.tasks.size(); ++t)
			if (t != current && local_utility(instance, r, t, partition) > stay)
				return false;
	}
	return true;
}

inline CoalitionStructure to_structure(const ProblemInstance& instance, const Partition& partition)
{
	std::map<TaskId, std::vector<std::pair<RobotId, ServiceId>>> bundles;
	for (RobotId r = 0; r < instance.robots.size(); ++r)
		if (const auto t = partition.assignment(r))
			bundles[*t].emplace_back(r, ServiceId(0));
	return make_structure(instance.robots.size(), bundles);
}

/// Summed per-robot rewards: the system value the game optimizes.
inline double system_reward(const ProblemInstance& instance, const Partition& partition)
{
	double total = 0.0;
	for (TaskId t = 0; t < instance.tasks.size(); ++t)
	{
		const std::size_t k = partition.sizes[t];
		if (k > 0)
			total += static_cast<double>(k)
			         * peaked_reward(instance.tasks[t].utility, required_size(instance.tasks[t]), k);
	}
	return total;
}

namespace detail {

// Anonymous game: a robot's decision depends only on the belief and the task it
// is on. The best and second-best joining options (lowest id on ties) answer
// every robot's question in O(1).
class DecisionTable
{
public:
	DecisionTable(const std::vector<std::int64_t>& utility, const std::vector<std::size_t>& desired,
	              const Partition& p)
	{
		for (TaskId t = 0; t < utility.size(); ++t)
		{
			const double join = peaked_reward(utility[t], desired[t], p.sizes[t] + 1);
			if (!first_ || join > first_value_)
			{
				second_ = first_;
				second_value_ = first_value_;
				first_ = t;
				first_value_ = join;
			}
			else if (!second_ || join > second_value_)
			{
				second_ = t;
				second_value_ = join;
			}
		}
	}

	std::optional<TaskId> choose(std::optional<TaskId> current, double stay) const
	{
		const bool on_first = current && first_ && *current == *first_;
		const auto alt = on_first ? second_ : first_;
		const double alt_value = on_first ? second_value_ : first_value_;
		if (alt && alt_value > stay)
			return alt;
		return current;
	}

private:
	std::optional<TaskId> first_;
	std::optional<TaskId> second_;
	double first_value_ = 0.0;
	double second_value_ = 0.0;
};

struct SharedBelief
{
	Belief belief;
	mutable std::unique_ptr<DecisionTable> table;
};

} // namespace detail

/// Runs the hedonic game to a Nash stable partition. Each iteration every
/// robot (in id order) picks its best coalition under its own belief and
/// commits a change as a new belief version; all robots then broadcast to
/// their neighbors and adopt the dominating belief. The run converges once
/// every robot is satisfied for diameter-many consecutive iterations.
inline RunOutcome run_grape(const ProblemInstance& instance, const GrapeParams& params,
                            const Deadline& deadline = Deadline::none())
{
	RunOutcome out;
	try
	{
		require_single_service(instance);
	}
	catch (const unsupported_instance& e)
	{
		out.status = TrialStatus::unsupported;
		out.note = e.what();
		out.structure = make_structure(instance.robots.size(), {});
		return out;
	}

	const std::size_t n = instance.robots.size();
	const std::size_t m = instance.tasks.size();
	const Topology topology = params.topology ? *params.topology : Topology::fully_connected(n);
	if (topology.size() != n)
		throw std::invalid_argument("GRAPE: topology size does not match the collective");
	if (!topology.connected())
		throw std::invalid_argument("GRAPE: topology must be connected");
	const std::size_t settle = std::max<std::size_t>(1, topology.diameter());
	const std::size_t cap = params.max_iterations ? params.max_iterations : std::max<std::size_t>(1, 2 * n * n);

	std::vector<std::int64_t> utility(m);
	std::vector<std::size_t> desired(m);
	for (TaskId t = 0; t < m; ++t)
	{
		utility[t] = instance.tasks[t].utility;
		desired[t] = required_size(instance.tasks[t]);
	}

	using BeliefPtr = std::shared_ptr<const detail::SharedBelief>;
	auto initial = std::make_shared<detail::SharedBelief>();
	initial->belief.partition = Partition(n, m);
	std::vector<BeliefPtr> held(n, initial);
	std::vector<BeliefPtr> sent(n);
	std::vector<BeliefPtr> next(n);

	auto decide = [&](RobotId r, const detail::SharedBelief& sb) {
		if (!sb.table)
			sb.table = std::make_unique<detail::DecisionTable>(utility, desired, sb.belief.partition);
		const auto current = sb.belief.partition.assignment(r);
		const double stay = current ? peaked_reward(utility[*current], desired[*current],
		                                            sb.belief.partition.sizes[*current])
		                            : 0.0;
		return sb.table->choose(current, stay);
	};
	auto precedes = [](const BeliefPtr& a, const BeliefPtr& b) { return dominates(a->belief, b->belief); };

	CounterRng rng(params.seed, "grape-stamps");
	std::size_t streak = 0;
	bool converged = false;
	std::size_t iteration = 0;
	while (iteration < cap)
	{
		if (deadline.expired())
		{
			out.status = TrialStatus::timeout;
			break;
		}
		++iteration;
		out.comm.begin_round();

		std::set<double> stamps;
		for (RobotId r = 0; r < n; ++r)
		{
			const auto& mine = *held[r];
			const auto choice = decide(r, mine);
			if (choice == mine.belief.partition.assignment(r))
			{
				sent[r] = held[r];
				continue;
			}
			auto changed = std::make_shared<detail::SharedBelief>();
			changed->belief = mine.belief;
			changed->belief.partition.move(r, choice);
			++changed->belief.update_count;
			double stamp = rng.unit_open();
			while (stamp == mine.belief.stamp || !stamps.insert(stamp).second)
				stamp = rng.unit_open();
			changed->belief.stamp = stamp;
			sent[r] = std::move(changed);
		}
		out.comm.record(params.sizes.belief_bytes(n), n);

		if (topology.kind() == TopologyKind::fully_connected)
		{
			BeliefPtr best = sent.empty() ? initial : sent[0];
			for (const auto& b : sent)
				if (precedes(b, best))
					best = b;
			std::fill(next.begin(), next.end(), best);
		}
		else
		{
			for (RobotId r = 0; r < n; ++r)
			{
				BeliefPtr best = sent[r];
				topology.for_each_neighbor(r, [&](std::size_t j) {
					if (precedes(sent[j], best))
						best = sent[j];
				});
				next[r] = best;
			}
		}
		held.swap(next);
		if (params.on_iteration && !held.empty())
		{
			BeliefPtr top = held[0];
			for (const auto& b : held)
				if (precedes(b, top))
					top = b;
			params.on_iteration(iteration, top->belief);
		}

		bool all_satisfied = true;
		for (RobotId r = 0; r < n && all_satisfied; ++r)
			all_satisfied = decide(r, *held[r]) == held[r]->belief.partition.assignment(r);
		streak = all_satisfied ? streak + 1 : 0;
		if (streak >= settle)
		{
			converged = true;
			break;
		}
	}

	BeliefPtr final_belief = held.empty() ? initial : held[0];
	for (const auto& b : held)
		if (precedes(b, final_belief))
			final_belief = b;
	const Partition& partition = final_belief->belief.partition;

	out.iterations = iteration;
	out.structure = to_structure(instance, partition);
	out.system_reward = system_reward(instance, partition);
	if (converged)
	{
		if (!is_nash_stable(instance, partition))
		{
			out.status = TrialStatus::nonconvergence;
			out.note = "final partition failed the Nash stability re-check";
		}
	}
	else if (out.status != TrialStatus::timeout)
	{
		out.status = TrialStatus::nonconvergence;
		out.note = "iteration cap reached";
	}
	return out;
}

} // namespace coalition::grape

#endif // COALITION_GRAPE_HPP
