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

#ifndef COALITION_NETSIM_HPP
#define COALITION_NETSIM_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace coalition {

enum class TopologyKind
{
	fully_connected,
	k_nearest_ring,
	explicit_adjacency
};

/// Undirected, connected communication graph over robots 0..n-1.
class Topology
{
public:
	static Topology fully_connected(std::size_t n)
	{
		Topology t;
		t.kind_ = TopologyKind::fully_connected;
		t.n_ = n;
		return t;
	}

	/// Each robot links to the k nearest robots on either side of a ring.
	static Topology k_nearest_ring(std::size_t n, std::size_t k)
	{
		if (k == 0 && n > 1)
			throw std::invalid_argument("ring topology: k must be positive");
		std::vector<std::vector<std::size_t>> adj(n);
		for (std::size_t i = 0; i < n; ++i)
		{
			for (std::size_t d = 1; d <= k && d < n; ++d)
			{
				adj[i].push_back((i + d) % n);
				adj[i].push_back((i + n - d) % n);
			}
		}
		Topology t = from_adjacency(std::move(adj));
		t.kind_ = TopologyKind::k_nearest_ring;
		return t;
	}

	static Topology explicit_graph(std::vector<std::vector<std::size_t>> adjacency)
	{
		Topology t = from_adjacency(std::move(adjacency));
		for (std::size_t i = 0; i < t.n_; ++i)
			for (const std::size_t j : t.adj_[i])
				if (!std::binary_search(t.adj_[j].begin(), t.adj_[j].end(), i))
					throw std::invalid_argument("topology: adjacency is not symmetric");
		if (!t.connected())
			throw std::invalid_argument("topology: graph is not connected");
		return t;
	}

	TopologyKind kind() const noexcept { return kind_; }
	std::size_t size() const noexcept { return n_; }

	std::size_t degree(std::size_t i) const
	{
		if (kind_ == TopologyKind::fully_connected)
			return n_ == 0 ? 0 : n_ - 1;
		return adj_.at(i).size();
	}

	template <typename Fn>
	void for_each_neighbor(std::size_t i, Fn&& fn) const
	{
		if (kind_ == TopologyKind::fully_connected)
		{
			for (std::size_t j = 0; j < n_; ++j)
				if (j != i)
					fn(j);
			return;
		}
		for (const std::size_t j : adj_.at(i))
			fn(j);
	}

	bool connected() const
	{
		if (n_ <= 1 || kind_ == TopologyKind::fully_connected)
			return true;
		return eccentricity(0) != unreachable;
	}

	/// Longest shortest path; 0 for a single robot.
	std::size_t diameter() const
	{
		if (n_ <= 1)
			return 0;
		if (kind_ == TopologyKind::fully_connected)
			return 1;
		std::size_t best = 0;
		for (std::size_t s = 0; s < n_; ++s)
		{
			const std::size_t e = eccentricity(s);
			if (e == unreachable)
				throw std::logic_error("topology: graph is not connected");
			best = std::max(best, e);
		}
		return best;
	}

private:
	static constexpr std::size_t unreachable = std::numeric_limits<std::size_t>::max();

	static Topology from_adjacency(std::vector<std::vector<std::size_t>> adj)
	{
		Topology t;
		t.kind_ = TopologyKind::explicit_adjacency;
		t.n_ = adj.size();
		for (std::size_t i = 0; i < adj.size(); ++i)
		{
			auto& row = adj[i];
			std::sort(row.begin(), row.end());
			row.erase(std::unique(row.begin(), row.end()), row.end());
			for (const std::size_t j : row)
				if (j >= adj.size() || j == i)
					throw std::invalid_argument("topology: bad neighbor index");
		}
		t.adj_ = std::move(adj);
		return t;
	}

	std::size_t eccentricity(std::size_t source) const
	{
		std::vector<std::size_t> dist(n_, unreachable);
		std::queue<std::size_t> queue;
		dist[source] = 0;
		queue.push(source);
		std::size_t reached = 1;
		std::size_t far = 0;
		while (!queue.empty())
		{
			const std::size_t x = queue.front();
			queue.pop();
			for (const std::size_t y : adj_[x])
			{
				if (dist[y] != unreachable)
					continue;
				dist[y] = dist[x] + 1;
				far = std::max(far, dist[y]);
				++reached;
				queue.push(y);
			}
		}
		return reached == n_ ? far : unreachable;
	}

	TopologyKind kind_ = TopologyKind::fully_connected;
	std::size_t n_ = 0;
	std::vector<std::vector<std::size_t>> adj_;
};

enum class BeliefSizeModel
{
	fixed,         // every belief message is grape_belief_bytes
	proportional   // header + one entry per robot
};

/// Message sizes in bytes.
struct SizeModel
{
	std::uint64_t grape_belief_bytes = 3000;
	BeliefSizeModel belief_model = BeliefSizeModel::fixed;
	std::uint64_t header_bytes = 16;
	std::uint64_t entry_bytes = 4;
	std::uint64_t sda_query_bytes = 16;
	double bytes_per_mb = 1e6;

	std::uint64_t belief_bytes(std::size_t robots) const noexcept
	{
		if (belief_model == BeliefSizeModel::fixed)
			return grape_belief_bytes;
		return header_bytes + entry_bytes * robots;
	}

	/// Auction message carrying `entries` table rows.
	std::uint64_t table_bytes(std::size_t entries) const noexcept { return header_bytes + entry_bytes * entries; }
};

/// Running byte and message totals, bucketed per round/iteration.
struct CommLedger
{
	std::uint64_t total_bytes = 0;
	std::uint64_t message_count = 0;
	std::vector<std::uint64_t> per_round;

	void begin_round() { per_round.push_back(0); }

	void record(std::uint64_t size_bytes, std::uint64_t copies = 1)
	{
		if (per_round.empty())
			per_round.push_back(0);
		total_bytes += size_bytes * copies;
		per_round.back() += size_bytes * copies;
		message_count += copies;
	}
};

inline CommLedger record_broadcast(CommLedger ledger, std::uint64_t size_bytes, std::uint64_t copies = 1)
{
	ledger.record(size_bytes, copies);
	return ledger;
}

inline double total_mb(const CommLedger& ledger, const SizeModel& model = {})
{
	return static_cast<double>(ledger.total_bytes) / model.bytes_per_mb;
}

} // namespace coalition

#endif // COALITION_NETSIM_HPP
