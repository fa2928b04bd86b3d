/**
 * \file src/scenario.cpp
 *
 * \brief JSON scenario configuration.
 *
 * <hr/>
 *
 * Copyright 2026 The coaltx Authors
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

#include <coaltx/errors.hpp>
#include <coaltx/scenario.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace coaltx { namespace scenario {

using nlohmann::json;

channel::channel_model channel_params::model() const
{
	try
	{
		return channel::channel_model::from_db(exponent, noise_dbm, snr_target_db, p_max_dbm, reference_gain);
	}
	catch (std::invalid_argument const& e)
	{
		throw config_error(std::string("channel: ") + e.what());
	}
}

std::vector<double> linear_range(double first, double last, double step)
{
	std::vector<double> out;
	if (!(step > 0))
	{
		return out;
	}
	// Index-based so the grid carries no accumulated rounding.
	auto const count = static_cast<std::size_t>(std::floor((last - first) / step + 1e-9)) + 1;
	for (std::size_t k = 0; k < count; ++k)
	{
		out.push_back(first + static_cast<double>(k) * step);
	}
	return out;
}

namespace {

[[noreturn]] void fail(std::string_view where, std::string_view what)
{
	std::ostringstream oss;
	oss << where << ": " << what;
	throw config_error(oss.str());
}

template <typename T>
void read(json const& obj, char const* key, T& dst, std::string_view where)
{
	if (!obj.contains(key))
	{
		return;
	}
	try
	{
		dst = obj.at(key).get<T>();
	}
	catch (json::exception const& e)
	{
		fail(std::string(where) + "." + key, e.what());
	}
}

template <typename T>
void read_nonempty(json const& obj, char const* key, std::vector<T>& dst, std::string_view where)
{
	read(obj, key, dst, where);
	if (dst.empty())
	{
		fail(std::string(where) + "." + key, "sweep must not be empty");
	}
}

void require_object(json const& j, std::string_view where)
{
	if (!j.is_object())
	{
		fail(where, "expected an object");
	}
}

void require_positive_all(std::vector<double> const& xs, std::string_view where)
{
	for (double x : xs)
	{
		if (!(x > 0) || !std::isfinite(x))
		{
			fail(where, "values must be finite and positive");
		}
	}
}

} // namespace

position parse_position(json const& j, std::string_view where)
{
	try
	{
		if (j.is_array() && j.size() == 2)
		{
			return position{j[0].get<double>(), j[1].get<double>()};
		}
		if (j.is_object())
		{
			return position{j.at("x").get<double>(), j.at("y").get<double>()};
		}
	}
	catch (json::exception const& e)
	{
		fail(where, e.what());
	}
	fail(where, "expected [x, y] or {\"x\": .., \"y\": ..}");
}

scenario_config parse_config(json const& j)
{
	require_object(j, "config");
	scenario_config cfg;

	if (j.contains("channel"))
	{
		auto const& c = j.at("channel");
		require_object(c, "channel");
		read(c, "exponent", cfg.channel.exponent, "channel");
		read(c, "noise_dbm", cfg.channel.noise_dbm, "channel");
		read(c, "p_max_dbm", cfg.channel.p_max_dbm, "channel");
		read(c, "snr_target_db", cfg.channel.snr_target_db, "channel");
		read(c, "reference_gain", cfg.channel.reference_gain, "channel");
	}
	(void)cfg.channel.model();

	std::string fairness(coalition::to_string(cfg.fairness));
	read(j, "fairness", fairness, "config");
	try
	{
		cfg.fairness = coalition::parse_fairness(fairness);
	}
	catch (std::invalid_argument const& e)
	{
		fail("config.fairness", e.what());
	}
	read(j, "seed", cfg.seed, "config");
	read(j, "out", cfg.out, "config");

	if (j.contains("arc"))
	{
		auto const& a = j.at("arc");
		require_object(a, "arc");
		read_nonempty(a, "destinations", cfg.arc.destinations, "arc");
		read_nonempty(a, "relay_counts", cfg.arc.relay_counts, "arc");
		read_nonempty(a, "distances", cfg.arc.distances, "arc");
		read(a, "iterations", cfg.arc.iterations, "arc");
		read(a, "angle_min", cfg.arc.angle_min, "arc");
		read(a, "angle_max", cfg.arc.angle_max, "arc");
		require_positive_all(cfg.arc.destinations, "arc.destinations");
		require_positive_all(cfg.arc.distances, "arc.distances");
		if (cfg.arc.iterations < 1)
		{
			fail("arc.iterations", "must be at least 1");
		}
		for (auto n : cfg.arc.relay_counts)
		{
			if (n < 1 || n > coalition::max_shapley_relays)
			{
				fail("arc.relay_counts", "relay counts must lie in 1..20");
			}
		}
		if (!(cfg.arc.angle_min <= cfg.arc.angle_max))
		{
			fail("arc", "angle_min must not exceed angle_max");
		}
	}

	if (j.contains("line"))
	{
		auto const& l = j.at("line");
		require_object(l, "line");
		if (l.contains("backbone"))
		{
			cfg.line.backbone = parse_position(l.at("backbone"), "line.backbone");
		}
		if (l.contains("destination"))
		{
			cfg.line.destination = parse_position(l.at("destination"), "line.destination");
		}
		read_nonempty(l, "node1_x", cfg.line.node1_x, "line");
		read_nonempty(l, "node2_x", cfg.line.node2_x, "line");
	}

	if (j.contains("connectivity"))
	{
		auto const& c = j.at("connectivity");
		require_object(c, "connectivity");
		read_nonempty(c, "nodes", cfg.connectivity.nodes, "connectivity");
		read_nonempty(c, "areas", cfg.connectivity.areas, "connectivity");
		read(c, "trials", cfg.connectivity.trials, "connectivity");
		require_positive_all(cfg.connectivity.areas, "connectivity.areas");
		if (cfg.connectivity.trials < 1)
		{
			fail("connectivity.trials", "must be at least 1");
		}
		for (auto n : cfg.connectivity.nodes)
		{
			if (n < 1)
			{
				fail("connectivity.nodes", "node counts must be positive");
			}
		}
		auto& o = cfg.connectivity.options;
		std::string flow(protocol::to_string(o.flow));
		read(c, "flow", flow, "connectivity");
		try
		{
			o.flow = protocol::parse_flow_policy(flow);
		}
		catch (std::invalid_argument const& e)
		{
			fail("connectivity.flow", e.what());
		}
		read(c, "max_coalition_size", o.max_coalition_size, "connectivity");
		read(c, "backbone_margin", o.backbone_margin, "connectivity");
		if (c.contains("destinations_per_node") && !c.at("destinations_per_node").is_null())
		{
			std::size_t k = 0;
			read(c, "destinations_per_node", k, "connectivity");
			o.destinations_per_node = k;
		}
		if (o.max_coalition_size < 1 || o.max_coalition_size > coalition::max_shapley_relays)
		{
			fail("connectivity.max_coalition_size", "must lie in 1..20");
		}
		if (!(o.backbone_margin >= 0))
		{
			fail("connectivity.backbone_margin", "must be non-negative");
		}
	}

	if (j.contains("solve"))
	{
		cfg.solve = j.at("solve");
	}
	if (j.contains("network"))
	{
		cfg.network = j.at("network");
	}
	return cfg;
}

json parse_json_text(std::string_view text, std::string_view origin)
{
	try
	{
		return json::parse(text.begin(), text.end());
	}
	catch (json::parse_error const& e)
	{
		// e.what() carries "at line L, column C".
		throw config_error(std::string(origin) + ": " + e.what());
	}
}

json load_json_file(std::string const& path)
{
	std::ifstream in(path);
	if (!in)
	{
		throw config_error("cannot open '" + path + "'");
	}
	std::ostringstream oss;
	oss << in.rdbuf();
	return parse_json_text(oss.str(), path);
}

scenario_config load_config(std::string const& path)
{
	return parse_config(load_json_file(path));
}

}} // namespace coaltx::scenario
