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

#ifndef COALITION_RANDOM_HPP
#define COALITION_RANDOM_HPP

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <utility>

namespace coalition {

__extension__ typedef unsigned __int128 uint128_t;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
	x += 0x9E3779B97F4A7C15ULL;
	x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
	x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
	return x ^ (x >> 31);
}

/// FNV-1a; used to turn stream names into stream keys.
constexpr std::uint64_t hash_name(std::string_view name) noexcept
{
	std::uint64_t h = 1469598103934665603ULL;
	for (const char c : name)
	{
		h ^= static_cast<unsigned char>(c);
		h *= 1099511628211ULL;
	}
	return h;
}

/// Order-sensitive combination of 64-bit words into one seed.
constexpr std::uint64_t mix_seed(std::uint64_t seed) noexcept { return splitmix64(seed); }

template <typename... Rest>
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t next, Rest... rest) noexcept
{
	return mix_seed(splitmix64(seed ^ splitmix64(next + 0x632BE59BD9B4E019ULL)), rest...);
}

/// Counter-based generator: draw i of a stream is a pure function of
/// (seed, stream, i), so independent streams never perturb each other.
/// The draw helpers are implemented here (not with <random> distributions) so
/// that results are identical across standard library implementations.
class CounterRng
{
public:
	CounterRng(std::uint64_t seed, std::string_view stream) noexcept
	    : key_(mix_seed(seed, hash_name(stream)))
	{
	}

	CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept : key_(mix_seed(seed, stream)) {}

	std::uint64_t next() noexcept { return splitmix64(key_ + 0xD1B54A32D192ED03ULL * ++counter_); }

	/// Uniform integer in [0, bound); bound > 0. Lemire's nearly-divisionless method.
	std::uint64_t below(std::uint64_t bound)
	{
		if (bound == 0)
			throw std::invalid_argument("CounterRng::below: empty range");
		uint128_t m = static_cast<uint128_t>(next()) * bound;
		auto low = static_cast<std::uint64_t>(m);
		if (low < bound)
		{
			const std::uint64_t threshold = (0 - bound) % bound;
			while (low < threshold)
			{
				m = static_cast<uint128_t>(next()) * bound;
				low = static_cast<std::uint64_t>(m);
			}
		}
		return static_cast<std::uint64_t>(m >> 64);
	}

	/// Uniform integer in [lo, hi].
	std::int64_t between(std::int64_t lo, std::int64_t hi)
	{
		if (hi < lo)
			throw std::invalid_argument("CounterRng::between: hi < lo");
		return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
	}

	/// Uniform real strictly inside (0, 1).
	double unit_open() noexcept { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

	std::uint64_t draws() const noexcept { return counter_; }

private:
	std::uint64_t key_;
	std::uint64_t counter_ = 0;
};

template <typename RandomIt>
void shuffle(RandomIt first, RandomIt last, CounterRng& rng)
{
	const auto n = last - first;
	for (auto i = n - 1; i > 0; --i)
	{
		const auto j = static_cast<decltype(i)>(rng.below(static_cast<std::uint64_t>(i) + 1));
		using std::swap;
		swap(first[i], first[j]);
	}
}

} // namespace coalition

#endif // COALITION_RANDOM_HPP
