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

#ifndef COALITION_INSTANCE_IO_HPP
#define COALITION_INSTANCE_IO_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "model.hpp"

namespace coalition {

/// Canonical text form of an instance: fixed field order
/// (seed, service_type_count, robots, tasks, label), one robot or task per
/// line, requirement keys in ascending service order. Parsing and
/// re-serializing canonical text reproduces it byte for byte.
inline std::string to_canonical_json(const ProblemInstance& instance)
{
	std::ostringstream os;
	os << "{\n";
	os << "  \"seed\": " << instance.seed << ",\n";
	os << "  \"service_type_count\": " << instance.service_type_count << ",\n";
	os << "  \"robots\": [";
	for (std::size_t i = 0; i < instance.robots.size(); ++i)
	{
		os << (i == 0 ? "\n    [" : ",\n    [");
		const auto& services = instance.robots[i].services;
		for (std::size_t k = 0; k < services.size(); ++k)
			os << (k == 0 ? "" : ", ") << services[k].index;
		os << "]";
	}
	os << (instance.robots.empty() ? "],\n" : "\n  ],\n");
	os << "  \"tasks\": [";
	for (std::size_t j = 0; j < instance.tasks.size(); ++j)
	{
		const Task& t = instance.tasks[j];
		os << (j == 0 ? "\n    " : ",\n    ");
		os << "{\"utility\": " << t.utility << ", \"requirements\": {";
		bool first = true;
		for (const auto& [service, count] : t.requirements)
		{
			os << (first ? "" : ", ") << '"' << service.index << "\": " << count;
			first = false;
		}
		os << "}}";
	}
	os << (instance.tasks.empty() ? "],\n" : "\n  ],\n");
	os << "  \"label\": " << nlohmann::json(instance.label).dump() << "\n";
	os << "}\n";
	return os.str();
}

inline ProblemInstance instance_from_json(const nlohmann::json& j)
{
	try
	{
		ProblemInstance instance;
		instance.seed = j.at("seed").get<std::uint64_t>();
		instance.service_type_count = j.at("service_type_count").get<std::size_t>();
		instance.label = j.contains("label") ? j.at("label").get<std::string>() : std::string{};
		const auto& robots = j.at("robots");
		for (std::size_t i = 0; i < robots.size(); ++i)
		{
			Robot r;
			r.id = i;
			for (const auto& s : robots[i])
				r.services.emplace_back(s.get<std::size_t>());
			std::sort(r.services.begin(), r.services.end());
			instance.robots.push_back(std::move(r));
		}
		const auto& tasks = j.at("tasks");
		for (std::size_t k = 0; k < tasks.size(); ++k)
		{
			Task t;
			t.id = k;
			t.utility = tasks[k].at("utility").get<std::int64_t>();
			for (const auto& [key, count] : tasks[k].at("requirements").items())
				t.requirements[ServiceId(std::stoul(key))] += count.get<std::size_t>();
			instance.tasks.push_back(std::move(t));
		}
		validate_instance(instance);
		return instance;
	}
	catch (const nlohmann::json::exception& e)
	{
		throw invalid_instance(std::string("instance json: ") + e.what());
	}
}

inline ProblemInstance parse_instance(const std::string& text)
{
	nlohmann::json j;
	try
	{
		j = nlohmann::json::parse(text);
	}
	catch (const nlohmann::json::parse_error& e)
	{
		throw invalid_instance(std::string("instance json: ") + e.what());
	}
	return instance_from_json(j);
}

inline ProblemInstance load_instance(const std::string& path)
{
	std::ifstream in(path);
	if (!in)
		throw std::runtime_error("cannot open instance file '" + path + "'");
	std::stringstream buffer;
	buffer << in.rdbuf();
	return parse_instance(buffer.str());
}

inline void save_instance(const ProblemInstance& instance, const std::string& path)
{
	std::ofstream out(path, std::ios::binary);
	if (!out)
		throw std::runtime_error("cannot write instance file '" + path + "'");
	out << to_canonical_json(instance);
}

} // namespace coalition

#endif // COALITION_INSTANCE_IO_HPP
