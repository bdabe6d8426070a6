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

#ifndef COALITION_OUTCOME_HPP
#define COALITION_OUTCOME_HPP

#include <chrono>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "model.hpp"
#include "netsim.hpp"

namespace coalition {

enum class TrialStatus
{
	success,
	timeout,
	limit_exceeded,
	zero_utility,
	unsupported,
	nonconvergence
};

inline std::string_view to_string(TrialStatus s) noexcept
{
	switch (s)
	{
	case TrialStatus::success: return "success";
	case TrialStatus::timeout: return "timeout";
	case TrialStatus::limit_exceeded: return "limit_exceeded";
	case TrialStatus::zero_utility: return "zero_utility";
	case TrialStatus::unsupported: return "unsupported";
	case TrialStatus::nonconvergence: return "nonconvergence";
	}
	return "unknown";
}

inline TrialStatus parse_status(std::string_view text)
{
	for (const auto s : {TrialStatus::success, TrialStatus::timeout, TrialStatus::limit_exceeded,
	                     TrialStatus::zero_utility, TrialStatus::unsupported, TrialStatus::nonconvergence})
		if (to_string(s) == text)
			return s;
	throw std::invalid_argument("unknown trial status '" + std::string(text) + "'");
}

/// Cooperative wall-clock limit checked by the algorithms once per round.
class Deadline
{
public:
	using clock = std::chrono::steady_clock;

	Deadline() = default;
	explicit Deadline(clock::duration budget) : at_(clock::now() + budget) {}

	static Deadline none() { return {}; }

	bool expired() const { return at_ && clock::now() >= *at_; }

private:
	std::optional<clock::time_point> at_;
};

/// What one algorithm run produced, before trial-level scoring.
struct RunOutcome
{
	TrialStatus status = TrialStatus::success;
	CoalitionStructure structure;
	std::size_t iterations = 0;  // GRAPE iterations or auction rounds
	CommLedger comm;
	std::optional<double> system_reward;  // GRAPE only: summed per-robot peaked reward
	std::string note;
};

} // namespace coalition

#endif // COALITION_OUTCOME_HPP
