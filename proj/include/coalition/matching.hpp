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

#ifndef COALITION_MATCHING_HPP
#define COALITION_MATCHING_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

namespace coalition {

/// A set of (row, col) pairs, sorted by row, with its total cost.
template <typename Cost>
struct Assignment
{
	std::vector<std::pair<std::size_t, std::size_t>> pairs;
	Cost total_cost{};

	std::size_t size() const noexcept { return pairs.size(); }
};

/// Rectangular cost grid in which a cell is either a non-negative cost or
/// FORBIDDEN (the pair may never be used).
template <typename Cost>
class CostMatrix
{
public:
	CostMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * cols) {}

	std::size_t rows() const noexcept { return rows_; }
	std::size_t cols() const noexcept { return cols_; }

	void set(std::size_t row, std::size_t col, Cost cost)
	{
		if (cost < Cost{})
			throw std::invalid_argument("CostMatrix: negative cost");
		cells_.at(index(row, col)) = std::move(cost);
	}

	void forbid(std::size_t row, std::size_t col) { cells_.at(index(row, col)).reset(); }

	bool allowed(std::size_t row, std::size_t col) const { return cells_[index(row, col)].has_value(); }

	const Cost& at(std::size_t row, std::size_t col) const { return cells_[index(row, col)].value(); }

	const std::optional<Cost>& cell(std::size_t row, std::size_t col) const { return cells_[index(row, col)]; }

private:
	std::size_t index(std::size_t row, std::size_t col) const
	{
		if (row >= rows_ || col >= cols_)
			throw std::out_of_range("CostMatrix: index out of range");
		return row * cols_ + col;
	}

	std::size_t rows_;
	std::size_t cols_;
	std::vector<std::optional<Cost>> cells_; // nullopt == FORBIDDEN
};

/// Maximum-cardinality matching (Hopcroft-Karp). adjacency[row] lists the
/// columns the row may take; col_count bounds the column indices. The result
/// has unit costs, so total_cost is the cardinality.
inline Assignment<std::int64_t> max_bipartite_matching(const std::vector<std::vector<std::size_t>>& adjacency,
                                                       std::size_t col_count)
{
	constexpr std::size_t nil = std::numeric_limits<std::size_t>::max();
	constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();
	const std::size_t rows = adjacency.size();

	for (const auto& adj : adjacency)
		for (const std::size_t c : adj)
			if (c >= col_count)
				throw std::out_of_range("max_bipartite_matching: column index out of range");

	std::vector<std::size_t> match_row(rows, nil);
	std::vector<std::size_t> match_col(col_count, nil);
	std::vector<std::size_t> dist(rows, inf);
	std::vector<std::size_t> cursor(rows, 0);

	auto bfs = [&] {
		std::queue<std::size_t> queue;
		for (std::size_t r = 0; r < rows; ++r)
		{
			if (match_row[r] == nil)
			{
				dist[r] = 0;
				queue.push(r);
			}
			else
				dist[r] = inf;
		}
		bool reachable_free = false;
		while (!queue.empty())
		{
			const std::size_t r = queue.front();
			queue.pop();
			for (const std::size_t c : adjacency[r])
			{
				const std::size_t other = match_col[c];
				if (other == nil)
					reachable_free = true;
				else if (dist[other] == inf)
				{
					dist[other] = dist[r] + 1;
					queue.push(other);
				}
			}
		}
		return reachable_free;
	};

	// Iterative DFS along the layered graph.
	auto augment = [&](std::size_t root) {
		std::vector<std::size_t> stack{root};
		while (!stack.empty())
		{
			const std::size_t r = stack.back();
			if (cursor[r] == adjacency[r].size())
			{
				dist[r] = inf;
				stack.pop_back();
				continue;
			}
			const std::size_t c = adjacency[r][cursor[r]];
			const std::size_t other = match_col[c];
			if (other == nil)
			{
				// Flip the path held on the stack.
				for (std::size_t k = stack.size(); k-- > 0;)
				{
					const std::size_t row = stack[k];
					const std::size_t col = adjacency[row][cursor[row]];
					match_row[row] = col;
					match_col[col] = row;
				}
				return true;
			}
			// A failed child marks itself dead (dist = inf), so the parent then skips it.
			if (dist[other] != inf && dist[other] == dist[r] + 1)
				stack.push_back(other);
			else
				++cursor[r];
		}
		return false;
	};

	while (bfs())
	{
		std::fill(cursor.begin(), cursor.end(), 0);
		for (std::size_t r = 0; r < rows; ++r)
			if (match_row[r] == nil)
				augment(r);
	}

	Assignment<std::int64_t> result;
	for (std::size_t r = 0; r < rows; ++r)
		if (match_row[r] != nil)
			result.pairs.emplace_back(r, match_row[r]);
	result.total_cost = static_cast<std::int64_t>(result.pairs.size());
	return result;
}

namespace detail {

// Rectangular Hungarian method in the potentials formulation (columns are
// assigned to rows, cols <= rows). Forbidden cells never enter the search, so
// "no full cover" is detected exactly when the alternating tree cannot grow.
template <typename Cost>
struct HungarianState
{
	std::vector<Cost> col_potential;  // u, one per column
	std::vector<Cost> row_potential;  // v, one per row, always <= 0
	std::vector<std::size_t> row_of_col;
	std::vector<std::size_t> col_of_row;
};

template <typename Cost>
std::optional<HungarianState<Cost>> solve_hungarian(const CostMatrix<Cost>& m)
{
	constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
	const std::size_t n = m.cols();
	const std::size_t k = m.rows();

	// 1-based arrays; index 0 is the virtual root.
	std::vector<Cost> u(n + 1, Cost{});
	std::vector<Cost> v(k + 1, Cost{});
	std::vector<std::size_t> p(k + 1, 0);  // p[row] = column holding it (0 = free)
	std::vector<std::size_t> way(k + 1, 0);

	for (std::size_t i = 1; i <= n; ++i)
	{
		p[0] = i;
		std::size_t j0 = 0;
		std::vector<std::optional<Cost>> minv(k + 1);
		std::vector<char> used(k + 1, 0);
		do
		{
			used[j0] = 1;
			const std::size_t i0 = p[j0];
			std::optional<Cost> delta;
			std::size_t j1 = 0;
			for (std::size_t j = 1; j <= k; ++j)
			{
				if (used[j])
					continue;
				if (const auto& cell = m.cell(j - 1, i0 - 1))
				{
					Cost cur = *cell - u[i0] - v[j];
					if (!minv[j] || cur < *minv[j])
					{
						minv[j] = std::move(cur);
						way[j] = j0;
					}
				}
				if (minv[j] && (!delta || *minv[j] < *delta))
				{
					delta = minv[j];
					j1 = j;
				}
			}
			if (!delta)
				return std::nullopt;
			for (std::size_t j = 0; j <= k; ++j)
			{
				if (used[j])
				{
					u[p[j]] += *delta;
					v[j] -= *delta;
				}
				else if (minv[j])
					*minv[j] -= *delta;
			}
			j0 = j1;
		} while (p[j0] != 0);
		do
		{
			const std::size_t j1 = way[j0];
			p[j0] = p[j1];
			j0 = j1;
		} while (j0 != 0);
	}

	HungarianState<Cost> st;
	st.col_potential.assign(u.begin() + 1, u.end());
	st.row_potential.assign(v.begin() + 1, v.end());
	st.row_of_col.assign(n, none);
	st.col_of_row.assign(k, none);
	for (std::size_t j = 1; j <= k; ++j)
	{
		if (p[j] != 0)
		{
			st.row_of_col[p[j] - 1] = j - 1;
			st.col_of_row[j - 1] = p[j] - 1;
		}
	}
	return st;
}

// Among all optimal assignments, move to the one whose row-sorted pair list is
// lexicographically smallest. The optimal assignments are exactly the
// column-covering matchings on tight edges that keep every row with negative
// potential matched; equivalently, perfect matchings of the square problem in
// which free rows sit on zero-cost dummy columns (tight iff potential == 0).
// Rows are fixed greedily in ascending order; each candidate (col, row) is
// tested by searching for an alternating cycle through it.
template <typename Cost>
void canonicalize_lexicographic(const CostMatrix<Cost>& m, HungarianState<Cost>& st)
{
	constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
	const std::size_t n = m.cols();
	const std::size_t k = m.rows();
	const std::size_t dummy = n;  // node id for the pooled dummy columns

	auto tight = [&](std::size_t col, std::size_t row) {
		const auto& cell = m.cell(row, col);
		return cell && *cell == st.col_potential[col] + st.row_potential[row];
	};
	auto dummy_tight = [&](std::size_t row) { return st.row_potential[row] == Cost{}; };
	auto partner = [&](std::size_t row) { return st.col_of_row[row] == none ? dummy : st.col_of_row[row]; };

	std::vector<char> locked(n, 0);
	std::size_t locked_count = 0;

	std::vector<std::size_t> parent_node(n + 1);
	std::vector<std::size_t> parent_row(n + 1);
	std::vector<char> seen(n + 1);

	for (std::size_t r = 0; r < k && locked_count < n; ++r)
	{
		bool placed = false;
		for (std::size_t c = 0; c < n && !placed; ++c)
		{
			if (locked[c] || !tight(c, r))
				continue;
			if (st.row_of_col[c] == r)
			{
				placed = true;
				break;
			}
			const std::size_t target = st.row_of_col[c];
			const std::size_t start = partner(r);
			std::fill(seen.begin(), seen.end(), 0);
			std::queue<std::size_t> queue;
			seen[start] = 1;
			seen[c] = 1;
			queue.push(start);
			std::size_t hit_node = none;
			while (!queue.empty() && hit_node == none)
			{
				const std::size_t x = queue.front();
				queue.pop();
				for (std::size_t y = r + 1; y < k; ++y)
				{
					if (x == dummy)
					{
						if (!dummy_tight(y) || st.col_of_row[y] == none)
							continue;
					}
					else if (st.row_of_col[x] == y || !tight(x, y))
						continue;
					if (y == target)
					{
						hit_node = x;
						break;
					}
					const std::size_t next = partner(y);
					if (next != dummy && locked[next])
						continue;
					if (seen[next])
						continue;
					seen[next] = 1;
					parent_node[next] = x;
					parent_row[next] = y;
					queue.push(next);
				}
			}
			if (hit_node == none)
				continue;

			// Rotate: every column node on the path takes the row that led out of it.
			std::vector<std::pair<std::size_t, std::size_t>> moves;  // (row, new column node)
			moves.emplace_back(target, hit_node);
			for (std::size_t x = hit_node; x != start;)
			{
				const std::size_t px = parent_node[x];
				moves.emplace_back(parent_row[x], px);
				x = px;
			}
			moves.emplace_back(r, c);
			for (const auto& [row, node] : moves)
			{
				if (node == dummy)
					st.col_of_row[row] = none;
				else
				{
					st.col_of_row[row] = node;
					st.row_of_col[node] = row;
				}
			}
			placed = true;
		}
		if (placed)
		{
			locked[st.col_of_row[r]] = 1;
			++locked_count;
		}
	}
}

// Among all optimal assignments, move to one whose set of matched rows is
// lexicographically smallest. Rows are decided in ascending order: a free row
// enters if an alternating path of tight edges reaches a matched, undecided
// row that may go free (potential 0), which then leaves.
template <typename Cost>
void canonicalize_row_set(const CostMatrix<Cost>& m, HungarianState<Cost>& st)
{
	constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
	const std::size_t n = m.cols();
	const std::size_t k = m.rows();

	auto tight = [&](std::size_t col, std::size_t row) {
		const auto& cell = m.cell(row, col);
		return cell && *cell == st.col_potential[col] + st.row_potential[row];
	};

	std::vector<char> kept(k, 0);
	std::vector<std::size_t> via_col(k);
	std::vector<std::size_t> via_row(k);
	std::vector<char> seen_col(n);
	for (std::size_t i = 0; i < k; ++i)
	{
		if (st.col_of_row[i] != none)
		{
			kept[i] = 1;
			continue;
		}
		std::fill(seen_col.begin(), seen_col.end(), 0);
		std::queue<std::size_t> queue;
		queue.push(i);
		std::size_t leaving = none;
		while (!queue.empty() && leaving == none)
		{
			const std::size_t x = queue.front();
			queue.pop();
			for (std::size_t c = 0; c < n; ++c)
			{
				if (seen_col[c] || st.col_of_row[x] == c || !tight(c, x))
					continue;
				seen_col[c] = 1;
				const std::size_t y = st.row_of_col[c];
				via_col[y] = c;
				via_row[y] = x;
				if (!kept[y] && st.row_potential[y] == Cost{})
				{
					leaving = y;
					break;
				}
				queue.push(y);
			}
		}
		if (leaving == none)
			continue;
		st.col_of_row[leaving] = none;
		for (std::size_t y = leaving; y != i;)
		{
			const std::size_t c = via_col[y];
			const std::size_t x = via_row[y];
			st.row_of_col[c] = x;
			st.col_of_row[x] = c;
			y = x;
		}
		kept[i] = 1;
	}
}

} // namespace detail

/// Tie-break among minimum-cost assignments.
enum class TieBreak
{
	pair_list,  // lexicographically smallest row-sorted pair list
	row_set,    // smallest set of matched rows, then smallest pair list
};

/// Minimum-total-cost assignment covering every column, or nullopt when no
/// full cover exists (including cols > rows). Among minimum-cost solutions the
/// one selected by `tie_break` is returned.
template <typename Cost>
std::optional<Assignment<Cost>> min_cost_assignment(const CostMatrix<Cost>& m,
                                                    TieBreak tie_break = TieBreak::pair_list)
{
	if (m.cols() > m.rows())
		return std::nullopt;
	Assignment<Cost> result;
	if (m.cols() == 0)
		return result;

	auto state = detail::solve_hungarian(m);
	if (!state)
		return std::nullopt;
	if (tie_break == TieBreak::row_set && m.rows() > m.cols())
	{
		detail::canonicalize_row_set(m, *state);
		std::vector<std::size_t> rows;
		for (std::size_t r = 0; r < m.rows(); ++r)
			if (state->col_of_row[r] != std::numeric_limits<std::size_t>::max())
				rows.push_back(r);
		CostMatrix<Cost> square(rows.size(), m.cols());
		for (std::size_t i = 0; i < rows.size(); ++i)
			for (std::size_t c = 0; c < m.cols(); ++c)
				if (const auto& cell = m.cell(rows[i], c))
					square.set(i, c, *cell);
				else
					square.forbid(i, c);
		auto inner = min_cost_assignment(square);
		for (auto& [r, c] : inner->pairs)
			r = rows[r];
		return inner;
	}
	detail::canonicalize_lexicographic(m, *state);

	for (std::size_t r = 0; r < m.rows(); ++r)
	{
		const std::size_t c = state->col_of_row[r];
		if (c != std::numeric_limits<std::size_t>::max())
		{
			result.pairs.emplace_back(r, c);
			result.total_cost += m.at(r, c);
		}
	}
	return result;
}

} // namespace coalition

#endif // COALITION_MATCHING_HPP
