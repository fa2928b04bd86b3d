/**
 * \file src/experiments.cpp
 *
 * \brief Experiment drivers and output formatting.
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
#include <coaltx/experiments.hpp>

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace coaltx { namespace experiments {

using nlohmann::json;

namespace {

std::mt19937_64 point_engine(std::uint64_t seed, std::size_t a, std::size_t b, std::size_t c)
{
	// Tag 3 keeps arc-sweep streams apart from connectivity trial streams.
	std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 3u,
	                  static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(c)};
	return std::mt19937_64(seq);
}

void accumulate(double x, double& sum, double& sum_sq)
{
	sum += x;
	sum_sq += x * x;
}

void finish(double sum, double sum_sq, std::size_t k, double& mean, double& se)
{
	double const n = static_cast<double>(k);
	mean = sum / n;
	se = 0;
	if (k > 1)
	{
		double const var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1));
		se = std::sqrt(var / n);
	}
}

} // namespace

std::vector<arc_point> run_arc_sweep(channel::channel_model const& model,
                                     scenario::arc_sweep_config const& cfg,
                                     coalition::fairness_kind fairness,
                                     std::uint64_t seed)
{
	std::vector<arc_point> out;
	channel::position const source{0, 0};
	for (std::size_t di = 0; di < cfg.destinations.size(); ++di)
	{
		channel::position const dest{cfg.destinations[di], 0};
		for (std::size_t n : cfg.relay_counts)
		{
			for (std::size_t ri = 0; ri < cfg.distances.size(); ++ri)
			{
				double const r = cfg.distances[ri];
				auto rng = point_engine(seed, di, n, ri);
				std::uniform_real_distribution<double> angle(cfg.angle_min, cfg.angle_max);
				std::vector<channel::position> relays(n);
				double a_sum = 0, a_sq = 0, p_sum = 0, p_sq = 0;
				for (std::size_t it = 0; it < cfg.iterations; ++it)
				{
					for (auto& p : relays)
					{
						double const th = angle(rng);
						p = channel::position{r * std::cos(th), r * std::sin(th)};
					}
					auto const ctx = cooptx::coalition_context::from_positions(model, source, dest, relays);
					auto const alloc = coalition::allocate(ctx, fairness);
					accumulate(alloc.alpha_sum() / static_cast<double>(n), a_sum, a_sq);
					accumulate(alloc.p0_mw, p_sum, p_sq);
				}
				arc_point pt;
				pt.dest_distance = cfg.destinations[di];
				pt.relays = n;
				pt.relay_distance = r;
				finish(a_sum, a_sq, cfg.iterations, pt.mean_alpha, pt.stderr_alpha);
				finish(p_sum, p_sq, cfg.iterations, pt.mean_p0, pt.stderr_p0);
				out.push_back(pt);
			}
		}
	}
	return out;
}

std::vector<line_point> run_line_sweep(channel::channel_model const& model,
                                       scenario::line_sweep_config const& cfg)
{
	std::vector<line_point> out;
	for (double x1 : cfg.node1_x)
	{
		for (double x2 : cfg.node2_x)
		{
			std::vector<channel::position> const relays{{x1, cfg.backbone.y}, {x2, cfg.backbone.y}};
			if (relays[0] == cfg.backbone || relays[1] == cfg.backbone)
			{
				continue;
			}
			auto const ctx = cooptx::coalition_context::from_positions(model, cfg.backbone, cfg.destination, relays);
			auto const alloc = coalition::alpha_shapley(ctx);
			out.push_back({x1, x2, alloc.alpha[0], alloc.alpha[1], alloc.p0_mw});
		}
	}
	return out;
}

std::vector<protocol::connectivity_report> run_connectivity(channel::channel_model const& model,
                                                            scenario::connectivity_config const& cfg,
                                                            coalition::fairness_kind fairness,
                                                            std::uint64_t seed)
{
	protocol::protocol_options opts = cfg.options;
	opts.fairness = fairness;
	std::vector<protocol::connectivity_report> out;
	for (std::size_t n : cfg.nodes)
	{
		out.push_back(protocol::monte_carlo_connectivity(n, cfg.areas, cfg.trials, seed, model, opts));
	}
	return out;
}

std::string format_real(double x)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.12g", x);
	return buf;
}

std::string fig3_csv(std::vector<arc_point> const& points)
{
	std::ostringstream oss;
	oss << "dest_distance,N,relay_distance,mean_alpha\n";
	for (auto const& p : points)
	{
		oss << format_real(p.dest_distance) << ',' << p.relays << ',' << format_real(p.relay_distance) << ','
		    << format_real(p.mean_alpha) << '\n';
	}
	return oss.str();
}

std::string fig4_csv(std::vector<arc_point> const& points)
{
	std::ostringstream oss;
	oss << "dest_distance,N,relay_distance,mean_P0\n";
	for (auto const& p : points)
	{
		oss << format_real(p.dest_distance) << ',' << p.relays << ',' << format_real(p.relay_distance) << ','
		    << format_real(p.mean_p0) << '\n';
	}
	return oss.str();
}

std::string fig5_csv(std::vector<line_point> const& points)
{
	std::ostringstream oss;
	oss << "node1_x,node2_x,alpha_1,alpha_2\n";
	for (auto const& p : points)
	{
		oss << format_real(p.node1_x) << ',' << format_real(p.node2_x) << ',' << format_real(p.alpha_1) << ','
		    << format_real(p.alpha_2) << '\n';
	}
	return oss.str();
}

std::string fig6_csv(std::vector<protocol::connectivity_report> const& reports)
{
	std::ostringstream oss;
	oss << "n,B,mode,mean_connectivity,stderr\n";
	for (auto const& r : reports)
	{
		for (auto const& p : r.points)
		{
			oss << p.nodes << ',' << format_real(p.area_side) << ",no_coalition,"
			    << format_real(p.mean_no_coalition) << ',' << format_real(p.stderr_no_coalition) << '\n';
			oss << p.nodes << ',' << format_real(p.area_side) << ",coalition,"
			    << format_real(p.mean_coalition) << ',' << format_real(p.stderr_coalition) << '\n';
		}
	}
	return oss.str();
}

namespace {

[[noreturn]] void bad(std::string const& where, std::string const& what)
{
	throw config_error("solve" + where + ": " + what);
}

double number(json const& j, char const* key, std::string const& where)
{
	if (!j.contains(key) || !j.at(key).is_number())
	{
		bad(where + "." + key, "expected a number");
	}
	return j.at(key).get<double>();
}

json utilities_json(coalition::allocation const& a, bool core)
{
	json u = json::array();
	for (auto const& v : a.u)
	{
		u.push_back(v.is_finite() ? json(v.value()) : json(nullptr));
	}
	return {{"alpha", a.alpha}, {"alpha_sum", a.alpha_sum()}, {"p0_mw", a.p0_mw}, {"u0", a.u0},
	        {"u", std::move(u)}, {"core", core}};
}

} // namespace

json solve(json const& scenario, channel::channel_model const& default_model)
{
	if (!scenario.is_object())
	{
		bad("", "expected an object");
	}

	channel::channel_model model = default_model;
	if (scenario.contains("channel"))
	{
		model = scenario::parse_config(json{{"channel", scenario.at("channel")}}).channel.model();
	}

	json const relays_j = scenario.value("relays", json::array());
	if (!relays_j.is_array())
	{
		bad(".relays", "expected an array");
	}
	if (relays_j.size() > coalition::max_shapley_relays)
	{
		bad(".relays", "at most 20 relays are supported");
	}

	bool const gain_form = scenario.contains("g_sd");
	std::vector<cooptx::relay_link> links;
	channel::link_gain g_sd{};
	try
	{
		if (gain_form)
		{
			g_sd = channel::link_gain{number(scenario, "g_sd", "")};
			for (std::size_t i = 0; i < relays_j.size(); ++i)
			{
				auto const where = ".relays[" + std::to_string(i) + "]";
				auto const& r = relays_j[i];
				double const p = r.contains("power_mw") ? number(r, "power_mw", where) : model.p_max_mw();
				links.push_back({channel::link_gain{number(r, "g_sr", where)},
				                 channel::link_gain{number(r, "g_rd", where)}, p});
			}
		}
		else
		{
			if (!scenario.contains("source") || !scenario.contains("destination"))
			{
				bad("", "needs 'source' and 'destination' positions (or 'g_sd' gains)");
			}
			auto const src = scenario::parse_position(scenario.at("source"), "solve.source");
			auto const dst = scenario::parse_position(scenario.at("destination"), "solve.destination");
			g_sd = channel::path_gain(src, dst, model);
			for (std::size_t i = 0; i < relays_j.size(); ++i)
			{
				auto const where = ".relays[" + std::to_string(i) + "]";
				auto const& r = relays_j[i];
				if (!r.is_object() || !r.contains("position"))
				{
					bad(where, "expected {\"position\": ...}");
				}
				auto const pos = scenario::parse_position(r.at("position"), "solve" + where + ".position");
				double const p = r.contains("power_dbm") ? channel::dbm_to_mw(number(r, "power_dbm", where))
				                                         : model.p_max_mw();
				links.push_back({channel::path_gain(src, pos, model), channel::path_gain(pos, dst, model), p});
			}
		}
	}
	catch (coincident_nodes const& e)
	{
		bad("", e.what());
	}

	cooptx::coalition_context ctx = [&] {
		try
		{
			return cooptx::coalition_context(model, g_sd, links);
		}
		catch (link_infeasible const&)
		{
			throw;
		}
		catch (std::invalid_argument const& e)
		{
			bad("", e.what());
		}
	}();

	std::size_t const n = ctx.size();
	json out;
	out["relays"] = n;
	out["p_d_mw"] = ctx.p_d_mw();
	out["p_max_mw"] = model.p_max_mw();

	json subsets = json::array();
	for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
	{
		cooptx::relay_subset const s(m);
		std::vector<std::size_t> members;
		for (std::size_t i = 0; i < n; ++i)
		{
			if (s.contains(i))
			{
				members.push_back(i);
			}
		}
		subsets.push_back({{"relays", members}, {"p0_mw", cooptx::required_source_power(ctx, s)}});
	}
	out["subsets"] = std::move(subsets);

	if (n == 0)
	{
		out["p0_mw"] = ctx.p_d_mw();
		out["core_bound"] = 0.0;
		json const empty = {{"alpha", json::array()}, {"alpha_sum", 0.0}, {"p0_mw", ctx.p_d_mw()},
		                    {"u0", -ctx.p_d_mw()}, {"u", json::array()}, {"core", true}};
		out["minmax"] = empty;
		out["shapley"] = empty;
		out["shapley"]["marginal_savings_mw"] = json::array();
		out["proportional"] = empty;
		return out;
	}

	auto const minmax = coalition::alpha_minmax(ctx);
	auto const capped = coalition::at_power_cap(ctx);
	auto const savings = coalition::marginal_power_savings(capped);
	auto const shap = coalition::alpha_shapley(ctx);
	auto const prop = coalition::allocate(ctx, coalition::fairness_kind::proportional);

	out["p0_mw"] = minmax.p0_mw;
	out["core_bound"] = coalition::core_bound(ctx);
	out["minmax"] = utilities_json(minmax, coalition::core_condition(ctx, minmax.alpha));
	out["shapley"] = utilities_json(shap, coalition::core_condition(ctx, shap.alpha));
	out["shapley"]["marginal_savings_mw"] = savings;
	out["proportional"] = utilities_json(prop, coalition::core_condition(ctx, prop.alpha));
	return out;
}

json network_summary(protocol::topology const& topo, protocol::coalition_assignment const& assignment)
{
	json classes = json::array();
	for (auto c : topo.classes)
	{
		classes.push_back(netmodel::to_string(c));
	}
	auto const counts = protocol::count_connected(topo, assignment);
	return {{"network", netmodel::to_json(topo.net)},
	        {"classes", std::move(classes)},
	        {"assignment", protocol::to_json(assignment)},
	        {"connectivity",
	         {{"no_coalition", counts.fraction(protocol::connectivity_mode::no_coalition)},
	          {"coalition", counts.fraction(protocol::connectivity_mode::coalition)}}}};
}

}} // namespace coaltx::experiments
