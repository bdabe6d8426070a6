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

#ifndef COALITION_HARNESS_HPP
#define COALITION_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "generator.hpp"
#include "grape.hpp"
#include "model.hpp"
#include "outcome.hpp"
#include "rachna.hpp"
#include "random.hpp"
#include "rational.hpp"
#include "sda.hpp"

namespace coalition {

enum class Algorithm
{
	grape,
	rachna,
	rachna_dt,
	sda_sco,
	sda_m
};

inline constexpr Algorithm all_algorithms[] = {Algorithm::grape, Algorithm::rachna, Algorithm::rachna_dt,
                                               Algorithm::sda_sco, Algorithm::sda_m};

inline std::string_view to_string(Algorithm a) noexcept
{
	switch (a)
	{
	case Algorithm::grape: return "grape";
	case Algorithm::rachna: return "rachna";
	case Algorithm::rachna_dt: return "rachna-dt";
	case Algorithm::sda_sco: return "sda-sco";
	case Algorithm::sda_m: return "sda-m";
	}
	return "unknown";
}

inline Algorithm parse_algorithm(std::string_view text)
{
	for (const Algorithm a : all_algorithms)
		if (to_string(a) == text)
			return a;
	throw std::invalid_argument("unknown algorithm '" + std::string(text) + "'");
}

struct TrialLimits
{
	std::chrono::milliseconds wall_clock = std::chrono::minutes(10);
	std::uint64_t enumeration_budget = 10'000'000;
	std::size_t grape_max_iterations = 0;  // 0 selects the GRAPE default
};

/// One CSV row.
struct TrialResult
{
	std::string trial_id;
	std::string algorithm;
	std::size_t n = 0;
	std::size_t m = 0;
	Rational percent_tasks{0};
	std::size_t service_types = 0;
	std::size_t services_per_robot = 0;
	std::uint64_t seed = 0;
	TrialStatus status = TrialStatus::success;
	double runtime_ms = 0.0;
	std::uint64_t comm_bytes = 0;
	double comm_mb = 0.0;
	std::size_t iterations = 0;
	std::int64_t utility = 0;
	std::int64_t optimal_utility = 0;
	double percent_utility = 0.0;

	// Not written to CSV.
	bool optimal_exact = true;
	std::string note;
	CoalitionStructure structure;
};

class oracle_too_large : public std::invalid_argument
{
public:
	using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t brute_force_limit = 10;

/// Exhaustive optimum: each robot joins an open slot of some task for a
/// service it offers, or stays unassigned. Only needed slots are offered,
/// which loses nothing since surplus members never add utility.
inline std::int64_t brute_force_optimal(const ProblemInstance& instance)
{
	validate_instance(instance);
	const std::size_t n = instance.robots.size();
	if (n > brute_force_limit)
		throw oracle_too_large("brute_force_optimal: more than " + std::to_string(brute_force_limit) + " robots");
	const std::size_t m = instance.tasks.size();
	std::vector<std::map<ServiceId, std::size_t>> open(m);
	std::vector<std::size_t> open_total(m);
	for (TaskId t = 0; t < m; ++t)
	{
		open[t] = instance.tasks[t].requirements;
		open_total[t] = required_size(instance.tasks[t]);
	}
	std::int64_t best = 0;

	const std::function<void(std::size_t)> search = [&](std::size_t r) {
		std::int64_t done = 0;
		std::int64_t reachable = 0;
		for (TaskId t = 0; t < m; ++t)
		{
			if (open_total[t] == 0)
				done += instance.tasks[t].utility;
			else if (open_total[t] <= n - r)
				reachable += instance.tasks[t].utility;
		}
		best = std::max(best, done);
		if (r == n || done + reachable <= best)
			return;
		for (TaskId t = 0; t < m; ++t)
		{
			if (open_total[t] == 0)
				continue;
			for (const ServiceId s : instance.robots[r].services)
			{
				const auto it = open[t].find(s);
				if (it == open[t].end() || it->second == 0)
					continue;
				--it->second;
				--open_total[t];
				search(r + 1);
				++it->second;
				++open_total[t];
			}
		}
		search(r + 1);
	};
	search(0);
	return best;
}

/// Optimal utility and whether it is exact (false: the sum of task
/// utilities stands in as an upper bound).
inline std::pair<std::int64_t, bool> optimal_utility(const ProblemInstance& instance)
{
	if (verify_achievable(instance))
		return {total_task_utility(instance), true};
	if (instance.robots.size() <= brute_force_limit)
		return {brute_force_optimal(instance), true};
	return {total_task_utility(instance), false};
}

inline bool supports(Algorithm algorithm, const ProblemInstance& instance)
{
	return algorithm != Algorithm::grape || instance.service_type_count == 1;
}

inline RunOutcome run_algorithm(const ProblemInstance& instance, Algorithm algorithm, const TrialLimits& limits,
                                const Deadline& deadline)
{
	switch (algorithm)
	{
	case Algorithm::grape:
	{
		grape::GrapeParams p;
		p.seed = mix_seed(instance.seed, hash_name("grape"));
		p.max_iterations = limits.grape_max_iterations;
		return grape::run_grape(instance, p, deadline);
	}
	case Algorithm::rachna:
	case Algorithm::rachna_dt:
	{
		rachna::RachnaParams p;
		p.variant = algorithm == Algorithm::rachna ? rachna::Variant::fixed : rachna::Variant::dynamic;
		return rachna::run_rachna(instance, p, deadline);
	}
	case Algorithm::sda_sco:
	case Algorithm::sda_m:
	{
		sda::SdaParams p;
		p.strategy = algorithm == Algorithm::sda_sco ? sda::Strategy::enumeration : sda::Strategy::matching;
		p.enumeration_budget = limits.enumeration_budget;
		return sda::run_sda(instance, p, deadline);
	}
	}
	throw std::invalid_argument("run_algorithm: unknown algorithm");
}

/// Runs one algorithm on one instance and scores it. Generator metadata
/// (percent, services per robot) is left for the caller to fill.
inline TrialResult run_trial(const ProblemInstance& instance, Algorithm algorithm, const TrialLimits& limits = {})
{
	TrialResult r;
	r.algorithm = std::string(to_string(algorithm));
	r.n = instance.robots.size();
	r.m = instance.tasks.size();
	r.service_types = instance.service_type_count;
	r.seed = instance.seed;
	std::tie(r.optimal_utility, r.optimal_exact) = optimal_utility(instance);

	const auto start = std::chrono::steady_clock::now();
	RunOutcome out = run_algorithm(instance, algorithm, limits, Deadline(limits.wall_clock));
	r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

	r.utility = mission_utility(instance, out.structure);
	r.status = out.status;
	if (r.status == TrialStatus::success && r.utility == 0)
		r.status = TrialStatus::zero_utility;
	r.comm_bytes = out.comm.total_bytes;
	r.comm_mb = total_mb(out.comm);
	r.iterations = out.iterations;
	r.percent_utility = r.optimal_utility > 0 ? 100.0 * static_cast<double>(r.utility) / r.optimal_utility : 0.0;
	r.note = out.note;
	r.structure = std::move(out.structure);
	return r;
}

// CSV ---------------------------------------------------------------------

inline constexpr std::string_view csv_header =
    "trial_id,algorithm,n,m,percent_tasks,service_types,services_per_robot,seed,status,runtime_ms,comm_bytes,"
    "comm_mb,iterations,utility,optimal_utility,percent_utility";

inline std::string format_fixed(double value, int digits)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.*f", digits, value);
	return buf;
}

inline std::string to_csv_row(const TrialResult& r)
{
	std::ostringstream os;
	os << r.trial_id << ',' << r.algorithm << ',' << r.n << ',' << r.m << ',' << r.percent_tasks.to_string() << ','
	   << r.service_types << ',' << r.services_per_robot << ',' << r.seed << ',' << to_string(r.status) << ','
	   << format_fixed(r.runtime_ms, 3) << ',' << r.comm_bytes << ',' << format_fixed(r.comm_mb, 6) << ','
	   << r.iterations << ',' << r.utility << ',' << r.optimal_utility << ','
	   << format_fixed(r.percent_utility, 4);
	return os.str();
}

inline std::vector<std::string> split_csv_line(std::string_view line)
{
	std::vector<std::string> fields;
	std::size_t start = 0;
	while (true)
	{
		const std::size_t comma = line.find(',', start);
		fields.emplace_back(line.substr(start, comma - start));
		if (comma == std::string_view::npos)
			break;
		start = comma + 1;
	}
	return fields;
}

inline TrialResult parse_csv_row(std::string_view line)
{
	const auto f = split_csv_line(line);
	if (f.size() != 16)
		throw std::invalid_argument("csv row: expected 16 fields, got " + std::to_string(f.size()));
	TrialResult r;
	try
	{
		r.trial_id = f[0];
		r.algorithm = f[1];
		r.n = std::stoull(f[2]);
		r.m = std::stoull(f[3]);
		r.percent_tasks = Rational::parse(f[4]);
		r.service_types = std::stoull(f[5]);
		r.services_per_robot = std::stoull(f[6]);
		r.seed = std::stoull(f[7]);
		r.status = parse_status(f[8]);
		r.runtime_ms = std::stod(f[9]);
		r.comm_bytes = std::stoull(f[10]);
		r.comm_mb = std::stod(f[11]);
		r.iterations = std::stoull(f[12]);
		r.utility = std::stoll(f[13]);
		r.optimal_utility = std::stoll(f[14]);
		r.percent_utility = std::stod(f[15]);
	}
	catch (const std::logic_error& e)
	{
		throw std::invalid_argument("csv row: " + std::string(e.what()));
	}
	return r;
}

inline std::vector<TrialResult> read_csv(std::istream& in)
{
	std::vector<TrialResult> rows;
	std::string line;
	bool first = true;
	while (std::getline(in, line))
	{
		if (!line.empty() && line.back() == '\r')
			line.pop_back();
		if (line.empty())
			continue;
		if (first)
		{
			first = false;
			if (line != csv_header)
				throw std::invalid_argument("csv: unexpected header");
			continue;
		}
		rows.push_back(parse_csv_row(line));
	}
	return rows;
}

// Sweeps ------------------------------------------------------------------

struct SweepConfig
{
	std::vector<std::size_t> sizes{25, 50, 100, 500, 1000};
	std::vector<Rational> percents{Rational(1), Rational(10), Rational(50)};
	std::vector<std::size_t> service_types{1, 5, 10};
	std::vector<std::size_t> services_per_robot{1, 5};
	std::vector<Algorithm> algorithms{std::begin(all_algorithms), std::end(all_algorithms)};
	std::size_t repetitions = 25;
	std::uint64_t base_seed = 0;
	TrialLimits limits;
	bool record_runtime = true;  // false writes 0 so output is byte-stable
	std::size_t jobs = 1;
};

inline Rational json_rational(const nlohmann::json& j)
{
	if (j.is_string())
		return Rational::parse(j.get<std::string>());
	if (j.is_number_integer())
		return Rational(j.get<std::int64_t>());
	if (j.is_number())
		return Rational::parse(j.dump());
	throw std::invalid_argument("expected a number");
}

inline SweepConfig sweep_config_from_json(const nlohmann::json& j)
{
	SweepConfig cfg;
	try
	{
		for (const auto& [key, value] : j.items())
		{
			if (key == "sizes")
				cfg.sizes = value.get<std::vector<std::size_t>>();
			else if (key == "percents")
			{
				cfg.percents.clear();
				for (const auto& p : value)
					cfg.percents.push_back(json_rational(p));
			}
			else if (key == "service_types")
				cfg.service_types = value.get<std::vector<std::size_t>>();
			else if (key == "services_per_robot")
				cfg.services_per_robot = value.get<std::vector<std::size_t>>();
			else if (key == "algorithms")
			{
				cfg.algorithms.clear();
				for (const auto& a : value)
					cfg.algorithms.push_back(parse_algorithm(a.get<std::string>()));
			}
			else if (key == "repetitions")
				cfg.repetitions = value.get<std::size_t>();
			else if (key == "base_seed")
				cfg.base_seed = value.get<std::uint64_t>();
			else if (key == "wall_clock_secs")
				cfg.limits.wall_clock = std::chrono::milliseconds(
				    static_cast<std::int64_t>(value.get<double>() * 1000.0));
			else if (key == "enumeration_budget")
				cfg.limits.enumeration_budget = value.get<std::uint64_t>();
			else if (key == "record_runtime")
				cfg.record_runtime = value.get<bool>();
			else if (key == "jobs")
				cfg.jobs = value.get<std::size_t>();
			else
				throw std::invalid_argument("unknown key '" + key + "'");
		}
	}
	catch (const nlohmann::json::exception& e)
	{
		throw std::invalid_argument(std::string("sweep config: ") + e.what());
	}
	if (cfg.repetitions == 0 || cfg.limits.wall_clock.count() <= 0 || cfg.limits.enumeration_budget == 0)
		throw std::invalid_argument("sweep config: repetitions, wall_clock_secs and enumeration_budget must be positive");
	return cfg;
}

/// Why a grid cell is not run, or nullopt if it is valid.
inline std::optional<std::string> skip_reason(Algorithm algorithm, std::size_t n, const Rational& percent,
                                              std::size_t types, std::size_t per_robot)
{
	if (per_robot > types)
		return "services per robot exceeds service types";
	if (percent == Rational(1) && n <= 100)
		return "1% tasks only used with more than 100 robots";
	if (algorithm == Algorithm::grape && types != 1)
		return "GRAPE handles a single service type only";
	if (algorithm == Algorithm::sda_sco && n > 50)
		return "SDA_SCO only run with at most 50 robots";
	return std::nullopt;
}

struct TrialSpec
{
	std::string trial_id;
	Algorithm algorithm;
	GeneratorConfig generator;
};

inline std::string cell_id(std::size_t n, const Rational& percent, std::size_t types, std::size_t per_robot)
{
	std::string p = percent.to_string();
	std::replace(p.begin(), p.end(), '/', '_');
	return "n" + std::to_string(n) + "-p" + p + "-t" + std::to_string(types) + "-s" + std::to_string(per_robot);
}

/// Every valid trial in canonical order; invalid cells go to `skipped`.
inline std::vector<TrialSpec> plan_sweep(const SweepConfig& cfg, std::vector<std::string>* skipped = nullptr)
{
	std::vector<TrialSpec> plan;
	for (const std::size_t n : cfg.sizes)
		for (const Rational& p : cfg.percents)
			for (const std::size_t types : cfg.service_types)
				for (const std::size_t spr : cfg.services_per_robot)
					for (const Algorithm a : cfg.algorithms)
					{
						const std::string cell = cell_id(n, p, types, spr);
						if (const auto why = skip_reason(a, n, p, types, spr))
						{
							if (skipped)
								skipped->push_back(cell + " " + std::string(to_string(a)) + ": " + *why);
							continue;
						}
						for (std::size_t rep = 0; rep < cfg.repetitions; ++rep)
						{
							TrialSpec spec;
							spec.algorithm = a;
							spec.generator.n = n;
							spec.generator.percent_tasks = p;
							spec.generator.service_types = types;
							spec.generator.services_per_robot = spr;
							spec.generator.seed = mix_seed(cfg.base_seed, n, static_cast<std::uint64_t>(p.num()),
							                               static_cast<std::uint64_t>(p.den()), types, spr, rep);
							char rep_text[16];
							std::snprintf(rep_text, sizeof rep_text, "r%03zu", rep);
							spec.trial_id = cell + "-" + rep_text + "-" + std::string(to_string(a));
							plan.push_back(std::move(spec));
						}
					}
	return plan;
}

inline TrialResult run_spec(const TrialSpec& spec, const SweepConfig& cfg)
{
	const ProblemInstance instance = generate_instance(spec.generator);
	TrialResult r = run_trial(instance, spec.algorithm, cfg.limits);
	r.trial_id = spec.trial_id;
	r.percent_tasks = spec.generator.percent_tasks;
	r.services_per_robot = spec.generator.services_per_robot;
	if (!cfg.record_runtime)
		r.runtime_ms = 0.0;
	r.structure = {};
	return r;
}

struct SweepReport
{
	std::vector<std::string> rows;  // CSV lines in canonical order, header excluded
	std::vector<std::string> skipped;
	std::size_t executed = 0;
	std::size_t resumed = 0;
};

/// Runs every planned trial not already present in `existing` (CSV lines
/// keyed by trial id) on up to cfg.jobs threads. Output order is canonical
/// whatever the thread interleaving.
inline SweepReport run_sweep(const SweepConfig& cfg, const std::map<std::string, std::string>& existing = {},
                             const std::function<void(const TrialResult&)>& progress = {})
{
	SweepReport report;
	const auto plan = plan_sweep(cfg, &report.skipped);
	report.rows.resize(plan.size());
	std::vector<std::size_t> pending;
	for (std::size_t i = 0; i < plan.size(); ++i)
	{
		const auto it = existing.find(plan[i].trial_id);
		if (it != existing.end())
		{
			report.rows[i] = it->second;
			++report.resumed;
		}
		else
			pending.push_back(i);
	}

	std::atomic<std::size_t> next{0};
	std::mutex progress_mutex;
	std::exception_ptr failure;
	const auto worker = [&] {
		while (true)
		{
			const std::size_t k = next.fetch_add(1);
			if (k >= pending.size())
				return;
			const std::size_t i = pending[k];
			try
			{
				const TrialResult r = run_spec(plan[i], cfg);
				report.rows[i] = to_csv_row(r);
				if (progress)
				{
					std::lock_guard lock(progress_mutex);
					progress(r);
				}
			}
			catch (...)
			{
				std::lock_guard lock(progress_mutex);
				if (!failure)
					failure = std::current_exception();
				next = pending.size();
				return;
			}
		}
	};
	const std::size_t threads = std::max<std::size_t>(1, std::min(cfg.jobs, pending.size()));
	if (threads == 1)
		worker();
	else
	{
		std::vector<std::thread> pool;
		for (std::size_t t = 0; t < threads; ++t)
			pool.emplace_back(worker);
		for (auto& th : pool)
			th.join();
	}
	if (failure)
		std::rethrow_exception(failure);
	report.executed = pending.size();
	return report;
}

/// Loads CSV lines of a previous run, keyed by trial id.
inline std::map<std::string, std::string> load_existing_rows(const std::filesystem::path& csv)
{
	std::map<std::string, std::string> rows;
	std::ifstream in(csv);
	if (!in)
		return rows;
	std::string line;
	bool first = true;
	while (std::getline(in, line))
	{
		if (first)
		{
			first = false;
			if (line != csv_header)
				throw std::invalid_argument("resume: " + csv.string() + " has an unexpected header");
			continue;
		}
		if (line.empty())
			continue;
		parse_csv_row(line);  // rejects damaged rows
		rows.emplace(split_csv_line(line).front(), line);
	}
	return rows;
}

inline void write_sweep(const std::filesystem::path& dir, const SweepReport& report)
{
	std::filesystem::create_directories(dir);
	{
		std::ofstream out(dir / "results.csv", std::ios::binary);
		out << csv_header << '\n';
		for (const auto& row : report.rows)
			out << row << '\n';
	}
	std::ofstream log(dir / "skipped.log", std::ios::binary);
	for (const auto& line : report.skipped)
		log << line << '\n';
}

// Summaries ---------------------------------------------------------------

struct Spread
{
	double median = 0.0;
	double min = 0.0;
	double max = 0.0;
};

inline std::optional<Spread> spread(std::vector<double> values)
{
	if (values.empty())
		return std::nullopt;
	std::sort(values.begin(), values.end());
	const std::size_t k = values.size();
	const double median = k % 2 == 1 ? values[k / 2] : (values[k / 2 - 1] + values[k / 2]) / 2.0;
	return Spread{median, values.front(), values.back()};
}

struct CellSummary
{
	std::string algorithm;
	std::size_t n = 0;
	Rational percent_tasks{0};
	std::size_t service_types = 0;
	std::size_t services_per_robot = 0;
	std::size_t trials = 0;
	std::size_t successes = 0;
	std::optional<Spread> runtime_ms;
	std::optional<Spread> comm_mb;
	std::optional<Spread> percent_utility;

	double success_rate() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / trials; }
};

/// Groups rows by (algorithm, n, percent, types, services per robot); the
/// spreads cover successful trials only.
inline std::vector<CellSummary> summarize(const std::vector<TrialResult>& rows)
{
	using Key = std::tuple<std::string, std::size_t, Rational, std::size_t, std::size_t>;
	std::map<Key, std::vector<const TrialResult*>> groups;
	for (const auto& r : rows)
		groups[Key{r.algorithm, r.n, r.percent_tasks, r.service_types, r.services_per_robot}].push_back(&r);

	std::vector<CellSummary> out;
	for (const auto& [key, members] : groups)
	{
		CellSummary s;
		std::tie(s.algorithm, s.n, s.percent_tasks, s.service_types, s.services_per_robot) = key;
		s.trials = members.size();
		std::vector<double> runtime, comm, percent;
		for (const TrialResult* r : members)
		{
			if (r->status != TrialStatus::success)
				continue;
			++s.successes;
			runtime.push_back(r->runtime_ms);
			comm.push_back(r->comm_mb);
			percent.push_back(r->percent_utility);
		}
		s.runtime_ms = spread(runtime);
		s.comm_mb = spread(comm);
		s.percent_utility = spread(percent);
		out.push_back(std::move(s));
	}
	return out;
}

inline std::string summary_csv(const std::vector<CellSummary>& cells)
{
	std::ostringstream os;
	os << "algorithm,n,percent_tasks,service_types,services_per_robot,trials,successes,success_rate,"
	      "runtime_ms_median,runtime_ms_min,runtime_ms_max,comm_mb_median,comm_mb_min,comm_mb_max,"
	      "percent_utility_median,percent_utility_min,percent_utility_max\n";
	const auto put = [&](const std::optional<Spread>& s, int digits) {
		if (s)
			os << ',' << format_fixed(s->median, digits) << ',' << format_fixed(s->min, digits) << ','
			   << format_fixed(s->max, digits);
		else
			os << ",,,";
	};
	for (const auto& c : cells)
	{
		os << c.algorithm << ',' << c.n << ',' << c.percent_tasks.to_string() << ',' << c.service_types << ','
		   << c.services_per_robot << ',' << c.trials << ',' << c.successes << ','
		   << format_fixed(c.success_rate(), 4);
		put(c.runtime_ms, 3);
		put(c.comm_mb, 6);
		put(c.percent_utility, 4);
		os << '\n';
	}
	return os.str();
}

inline nlohmann::json summary_json(const std::vector<CellSummary>& cells)
{
	const auto put = [](const std::optional<Spread>& s) -> nlohmann::json {
		if (!s)
			return nullptr;
		return {{"median", s->median}, {"min", s->min}, {"max", s->max}};
	};
	nlohmann::json out = nlohmann::json::array();
	for (const auto& c : cells)
		out.push_back({{"algorithm", c.algorithm},
		               {"n", c.n},
		               {"percent_tasks", c.percent_tasks.to_string()},
		               {"service_types", c.service_types},
		               {"services_per_robot", c.services_per_robot},
		               {"trials", c.trials},
		               {"successes", c.successes},
		               {"success_rate", c.success_rate()},
		               {"runtime_ms", put(c.runtime_ms)},
		               {"comm_mb", put(c.comm_mb)},
		               {"percent_utility", put(c.percent_utility)}});
	return out;
}

} // namespace coalition

#endif // COALITION_HARNESS_HPP
