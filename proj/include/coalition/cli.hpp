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

#ifndef COALITION_CLI_HPP
#define COALITION_CLI_HPP

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "generator.hpp"
#include "harness.hpp"
#include "instance_io.hpp"

namespace coalition::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_trial_failure = 2;

inline constexpr const char* seed_env = "COALITION_BENCH_SEED";

/// --seed if given, else the environment variable, else `fallback`.
inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback)
{
	if (flag)
		return *flag;
	if (const char* env = std::getenv(seed_env); env && *env)
	{
		std::size_t used = 0;
		const unsigned long long v = std::stoull(env, &used);
		if (used != std::string_view(env).size())
			throw std::invalid_argument(std::string(seed_env) + " is not an unsigned integer");
		return v;
	}
	return fallback;
}

inline nlohmann::json result_json(const TrialResult& r)
{
	nlohmann::json coalitions = nlohmann::json::object();
	for (const auto& [task, robots] : r.structure.assignment)
	{
		nlohmann::json members = nlohmann::json::array();
		for (const RobotId robot : robots)
			members.push_back({{"robot", robot}, {"service", r.structure.roles.at(robot).index}});
		coalitions[std::to_string(task)] = members;
	}
	return {{"algorithm", r.algorithm},
	        {"n", r.n},
	        {"m", r.m},
	        {"service_types", r.service_types},
	        {"seed", r.seed},
	        {"status", std::string(to_string(r.status))},
	        {"comm_bytes", r.comm_bytes},
	        {"comm_mb", r.comm_mb},
	        {"iterations", r.iterations},
	        {"utility", r.utility},
	        {"optimal_utility", r.optimal_utility},
	        {"optimal_exact", r.optimal_exact},
	        {"percent_utility", r.percent_utility},
	        {"note", r.note},
	        {"coalitions", coalitions},
	        {"unassigned", r.structure.unassigned}};
}

inline void write_text(const std::string& path, const std::string& text)
{
	std::ofstream out(path, std::ios::binary);
	if (!out)
		throw std::runtime_error("cannot write " + path);
	out << text;
}

inline std::string read_text(const std::string& path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw std::runtime_error("cannot read " + path);
	std::ostringstream os;
	os << in.rdbuf();
	return os.str();
}

/// Parses argv and runs one subcommand. Exit codes: 0 success, 1 usage or
/// input error, 2 failed trials under --strict.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
	CLI::App app{"Coalition formation benchmark: instance generation, algorithm runs and sweeps"};
	app.require_subcommand(1);

	// generate
	GeneratorConfig gen;
	std::string gen_percent = "10";
	std::optional<std::uint64_t> gen_seed;
	std::string gen_out;
	auto* generate = app.add_subcommand("generate", "Write a random minimal achievable instance as JSON");
	generate->add_option("--n", gen.n, "Robots")->required();
	generate->add_option("--percent-tasks", gen_percent, "Tasks as a percentage of robots")->required();
	generate->add_option("--service-types", gen.service_types, "Distinct service types")->required();
	generate->add_option("--services-per-robot", gen.services_per_robot, "Services each robot offers")->required();
	generate->add_option("--seed", gen_seed, "Seed (default: $COALITION_BENCH_SEED, else 0)");
	generate->add_option("--out", gen_out, "Output file (default: stdout)");

	// run
	std::string run_algorithm_name, run_instance, run_out;
	double run_limit = 600.0;
	std::uint64_t run_budget = TrialLimits{}.enumeration_budget;
	bool run_strict = false;
	auto* run = app.add_subcommand("run", "Run one algorithm on one instance");
	run->add_option("--algorithm", run_algorithm_name, "grape, rachna, rachna-dt, sda-sco or sda-m")
	    ->required()
	    ->check(CLI::IsMember({"grape", "rachna", "rachna-dt", "sda-sco", "sda-m"}));
	run->add_option("--instance", run_instance, "Instance JSON")->required()->check(CLI::ExistingFile);
	run->add_option("--time-limit-secs", run_limit, "Wall-clock limit")->check(CLI::PositiveNumber);
	run->add_option("--enumeration-budget", run_budget, "Coalitions examined per task per round (sda-sco)")
	    ->check(CLI::PositiveNumber);
	run->add_option("--out", run_out, "Result JSON file (default: stdout)");
	run->add_flag("--strict", run_strict, "Exit 2 unless the trial succeeds");

	// sweep
	std::string sweep_config, sweep_out;
	std::size_t sweep_jobs = 0;
	std::optional<std::uint64_t> sweep_seed;
	bool sweep_resume = false, sweep_strict = false, sweep_quiet = false;
	auto* sweep = app.add_subcommand("sweep", "Run a grid of trials and write results.csv");
	sweep->add_option("--config", sweep_config, "SweepConfig JSON")->required()->check(CLI::ExistingFile);
	sweep->add_option("--out", sweep_out, "Output directory")->required();
	sweep->add_option("--jobs", sweep_jobs, "Parallel trials (default: config value)");
	sweep->add_option("--seed", sweep_seed, "Base seed (default: $COALITION_BENCH_SEED, else config)");
	sweep->add_flag("--resume", sweep_resume, "Keep rows already in results.csv");
	sweep->add_flag("--strict", sweep_strict, "Exit 2 if any trial is unsuccessful");
	sweep->add_flag("--quiet", sweep_quiet, "No per-trial progress");

	// verify
	std::string verify_instance;
	bool verify_strict = false;
	auto* verify = app.add_subcommand("verify", "Compare every supported algorithm with the exhaustive optimum");
	verify->add_option("--instance", verify_instance, "Instance JSON with at most 10 robots")
	    ->required()
	    ->check(CLI::ExistingFile);
	verify->add_flag("--strict", verify_strict, "Exit 2 unless every algorithm reaches the optimum");

	// summarize
	std::string sum_in, sum_out, sum_json;
	auto* summarize_cmd = app.add_subcommand("summarize", "Per-cell success rate and median (min, max)");
	summarize_cmd->add_option("--in", sum_in, "results.csv")->required()->check(CLI::ExistingFile);
	summarize_cmd->add_option("--out", sum_out, "Summary file; .json selects JSON, anything else CSV")->required();
	summarize_cmd->add_option("--json", sum_json, "Also write the JSON summary here");

	try
	{
		app.parse(argc, argv);
	}
	catch (const CLI::CallForHelp& e)
	{
		out << app.help();
		return exit_ok;
	}
	catch (const CLI::CallForAllHelp& e)
	{
		out << app.help("", CLI::AppFormatMode::All);
		return exit_ok;
	}
	catch (const CLI::ParseError& e)
	{
		err << "error: " << e.what() << "\n" << app.help();
		return exit_usage;
	}

	try
	{
		if (*generate)
		{
			gen.percent_tasks = Rational::parse(gen_percent);
			gen.seed = resolve_seed(gen_seed, 0);
			const std::string text = to_canonical_json(generate_instance(gen));
			if (gen_out.empty())
				out << text;
			else
				write_text(gen_out, text);
			return exit_ok;
		}
		if (*run)
		{
			const ProblemInstance instance = load_instance(run_instance);
			TrialLimits limits;
			limits.wall_clock = std::chrono::milliseconds(static_cast<std::int64_t>(run_limit * 1000.0));
			limits.enumeration_budget = run_budget;
			const TrialResult r = run_trial(instance, parse_algorithm(run_algorithm_name), limits);
			const std::string text = result_json(r).dump(2) + "\n";
			if (run_out.empty())
				out << text;
			else
			{
				write_text(run_out, text);
				out << r.algorithm << ' ' << to_string(r.status) << " utility " << r.utility << '/'
				    << r.optimal_utility << '\n';
			}
			return run_strict && r.status != TrialStatus::success ? exit_trial_failure : exit_ok;
		}
		if (*sweep)
		{
			SweepConfig cfg = sweep_config_from_json(nlohmann::json::parse(read_text(sweep_config)));
			cfg.base_seed = resolve_seed(sweep_seed, cfg.base_seed);
			if (sweep_jobs > 0)
				cfg.jobs = sweep_jobs;
			const std::filesystem::path dir(sweep_out);
			std::map<std::string, std::string> existing;
			if (sweep_resume)
				existing = load_existing_rows(dir / "results.csv");
			const auto report = run_sweep(cfg, existing, [&](const TrialResult& r) {
				if (!sweep_quiet)
					err << r.trial_id << ' ' << to_string(r.status) << '\n';
			});
			write_sweep(dir, report);
			out << report.executed << " trials run, " << report.resumed << " resumed, " << report.skipped.size()
			    << " cells skipped\n";
			if (sweep_strict)
				for (const auto& row : report.rows)
					if (parse_csv_row(row).status != TrialStatus::success)
						return exit_trial_failure;
			return exit_ok;
		}
		if (*verify)
		{
			const ProblemInstance instance = load_instance(verify_instance);
			const std::int64_t best = brute_force_optimal(instance);
			out << "optimal " << best << '\n';
			bool all_optimal = true;
			for (const Algorithm a : all_algorithms)
			{
				if (!supports(a, instance))
				{
					out << to_string(a) << " unsupported\n";
					continue;
				}
				const TrialResult r = run_trial(instance, a);
				const double percent = best > 0 ? 100.0 * static_cast<double>(r.utility) / best : 100.0;
				out << to_string(a) << ' ' << to_string(r.status) << " utility " << r.utility << " percent "
				    << format_fixed(percent, 2) << '\n';
				all_optimal = all_optimal && r.utility == best;
			}
			return verify_strict && !all_optimal ? exit_trial_failure : exit_ok;
		}
		if (*summarize_cmd)
		{
			std::ifstream in(sum_in, std::ios::binary);
			const auto cells = summarize(read_csv(in));
			const bool as_json = std::filesystem::path(sum_out).extension() == ".json";
			write_text(sum_out, as_json ? summary_json(cells).dump(2) + "\n" : summary_csv(cells));
			if (!sum_json.empty())
				write_text(sum_json, summary_json(cells).dump(2) + "\n");
			return exit_ok;
		}
	}
	catch (const std::exception& e)
	{
		err << "error: " << e.what() << '\n';
		return exit_usage;
	}
	return exit_usage;
}

} // namespace coalition::cli

#endif // COALITION_CLI_HPP
