/**
 * \file tools/coaltx_cli.cpp
 *
 * \brief Command-line front end: runs one experiment and writes CSV/JSON.
 *
 * Exit codes: 0 success, 2 configuration error, 3 infeasible scenario.
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
#include <coaltx/scenario.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int exit_config = 2;
constexpr int exit_infeasible = 3;

struct cli_args
{
	std::string experiment;
	std::string config_path;
	std::optional<std::uint64_t> seed;
	std::optional<std::string> out;
	std::optional<std::size_t> trials;
	std::optional<std::string> fairness;
	std::string format{"csv"};
	std::size_t nodes{100};
	double area{500};
};

void emit(std::string const& payload, std::string const& out_path, std::string const& summary)
{
	if (out_path.empty())
	{
		std::cout << payload;
		std::cerr << summary << '\n';
		return;
	}
	std::ofstream f(out_path, std::ios::binary);
	if (!f)
	{
		throw coaltx::config_error("cannot write '" + out_path + "'");
	}
	f << payload;
	std::cout << summary << " -> " << out_path << '\n';
}

int run(cli_args const& args)
{
	using namespace coaltx;

	scenario::scenario_config cfg = args.config_path.empty()
	    ? scenario::parse_config(nlohmann::json::object())
	    : scenario::load_config(args.config_path);
	if (args.seed)
	{
		cfg.seed = *args.seed;
	}
	if (args.out)
	{
		cfg.out = *args.out;
	}
	if (args.trials)
	{
		if (*args.trials < 1)
		{
			throw config_error("--trials must be at least 1");
		}
		cfg.connectivity.trials = *args.trials;
	}
	if (args.fairness)
	{
		try
		{
			cfg.fairness = coalition::parse_fairness(*args.fairness);
		}
		catch (std::invalid_argument const& e)
		{
			throw config_error(e.what());
		}
	}
	auto const model = cfg.channel.model();

	if (args.experiment == "fig3" || args.experiment == "fig4")
	{
		auto const pts = experiments::run_arc_sweep(model, cfg.arc, cfg.fairness, cfg.seed);
		bool const alpha = args.experiment == "fig3";
		emit(alpha ? experiments::fig3_csv(pts) : experiments::fig4_csv(pts), cfg.out,
		     args.experiment + ": " + std::to_string(pts.size()) + " sweep points, " +
		         std::to_string(cfg.arc.iterations) + " iterations each");
	}
	else if (args.experiment == "fig5")
	{
		auto const pts = experiments::run_line_sweep(model, cfg.line);
		emit(experiments::fig5_csv(pts), cfg.out, "fig5: " + std::to_string(pts.size()) + " placements");
	}
	else if (args.experiment == "fig6")
	{
		auto const reports = experiments::run_connectivity(model, cfg.connectivity, cfg.fairness, cfg.seed);
		std::string payload;
		if (args.format == "json")
		{
			nlohmann::json j = nlohmann::json::array();
			for (auto const& r : reports)
			{
				j.push_back(protocol::to_json(r));
			}
			payload = j.dump(2) + "\n";
		}
		else
		{
			payload = experiments::fig6_csv(reports);
		}
		std::string summary = "fig6:";
		for (auto const& r : reports)
		{
			for (auto const& p : r.points)
			{
				summary += "\n  n=" + std::to_string(p.nodes) + " B=" + experiments::format_real(p.area_side) +
				           " no_coalition=" + experiments::format_real(p.mean_no_coalition) +
				           " coalition=" + experiments::format_real(p.mean_coalition);
			}
		}
		emit(payload, cfg.out, summary);
	}
	else if (args.experiment == "solve")
	{
		if (!cfg.solve)
		{
			throw config_error("solve: the configuration has no 'solve' section");
		}
		auto const result = experiments::solve(*cfg.solve, model);
		emit(result.dump(2) + "\n", cfg.out,
		     "solve: " + std::to_string(result.at("relays").get<std::size_t>()) + " relays, P_d = " +
		         experiments::format_real(result.at("p_d_mw").get<double>()) + " mW");
	}
	else if (args.experiment == "network")
	{
		netmodel::network net = cfg.network ? netmodel::network_from_json(*cfg.network)
		                                    : netmodel::generate(args.nodes, args.area, cfg.seed);
		auto opts = cfg.connectivity.options;
		opts.fairness = cfg.fairness;
		auto rng = protocol::trial_engine(cfg.seed, net.size(), 0, 0);
		auto const topo = protocol::analyze(std::move(net), model, opts, &rng);
		auto const assignment = protocol::run_protocol(topo, model, opts, &rng);
		auto const summary = experiments::network_summary(topo, assignment);
		emit(summary.dump(2) + "\n", cfg.out,
		     "network: " + std::to_string(topo.net.size()) + " nodes, connectivity " +
		         experiments::format_real(summary["connectivity"]["no_coalition"].get<double>()) + " -> " +
		         experiments::format_real(summary["connectivity"]["coalition"].get<double>()));
	}
	return 0;
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Coalition games with cooperative transmission for boundary nodes"};
	cli_args args;
	app.add_option("--experiment", args.experiment, "Experiment to run")
	    ->required()
	    ->check(CLI::IsMember({"fig3", "fig4", "fig5", "fig6", "solve", "network"}));
	app.add_option("--config", args.config_path, "JSON scenario configuration");
	app.add_option("--seed", args.seed, "Master seed");
	app.add_option("--out", args.out, "Output file (stdout when omitted)");
	app.add_option("--trials", args.trials, "Monte Carlo trials per point (fig6)");
	app.add_option("--fairness", args.fairness, "Fairness criterion")
	    ->check(CLI::IsMember({"minmax", "shapley", "proportional"}));
	app.add_option("--format", args.format, "fig6 output format")->check(CLI::IsMember({"csv", "json"}));
	app.add_option("--nodes", args.nodes, "Node count for a generated network (network)");
	app.add_option("--area", args.area, "Square side in meters for a generated network (network)");

	try
	{
		app.parse(argc, argv);
	}
	catch (CLI::ParseError const& e)
	{
		int const rc = app.exit(e);
		return rc == 0 ? 0 : exit_config;
	}

	try
	{
		return run(args);
	}
	catch (coaltx::config_error const& e)
	{
		std::cerr << "configuration error: " << e.what() << '\n';
		return exit_config;
	}
	catch (coaltx::link_infeasible const& e)
	{
		std::cerr << "infeasible scenario: " << e.what() << '\n';
		return exit_infeasible;
	}
	catch (std::invalid_argument const& e)
	{
		std::cerr << "configuration error: " << e.what() << '\n';
		return exit_config;
	}
}
