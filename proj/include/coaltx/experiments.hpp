/**
 * \file coaltx/experiments.hpp
 *
 * \brief Experiment drivers behind the command-line front end, and their
 *  fixed CSV/JSON output formats.
 *
 * CSV headers:
 *  - fig3: dest_distance,N,relay_distance,mean_alpha
 *  - fig4: dest_distance,N,relay_distance,mean_P0
 *  - fig5: node1_x,node2_x,alpha_1,alpha_2
 *  - fig6: n,B,mode,mean_connectivity,stderr
 *
 * Reals are printed with 12 significant digits.
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

#ifndef COALTX_EXPERIMENTS_HPP
#define COALTX_EXPERIMENTS_HPP

#include <coaltx/protocol.hpp>
#include <coaltx/scenario.hpp>

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace coaltx { namespace experiments {

/// One (destination, N, relay distance) point of the arc sweep.
struct arc_point
{
	double dest_distance{0};
	std::size_t relays{0};
	double relay_distance{0};
	double mean_alpha{0};
	double stderr_alpha{0};
	double mean_p0{0};
	double stderr_p0{0};
};

/**
 * Backbone at the origin, destination at (d, 0), N relays at a fixed
 * distance with angles drawn uniformly from [angle_min, angle_max] each
 * iteration. Alpha is averaged over relays and iterations.
 */
std::vector<arc_point> run_arc_sweep(channel::channel_model const& model,
                                     scenario::arc_sweep_config const& cfg,
                                     coalition::fairness_kind fairness,
                                     std::uint64_t seed);

struct line_point
{
	double node1_x{0};
	double node2_x{0};
	double alpha_1{0};
	double alpha_2{0};
	double p0_mw{0};
};

/// Shapley ratios for two relays on the x axis. Points where node 2 coincides
/// with the backbone are skipped.
std::vector<line_point> run_line_sweep(channel::channel_model const& model,
                                       scenario::line_sweep_config const& cfg);

std::vector<protocol::connectivity_report> run_connectivity(channel::channel_model const& model,
                                                            scenario::connectivity_config const& cfg,
                                                            coalition::fairness_kind fairness,
                                                            std::uint64_t seed);

/// "%.12g"
std::string format_real(double x);

std::string fig3_csv(std::vector<arc_point> const& points);
std::string fig4_csv(std::vector<arc_point> const& points);
std::string fig5_csv(std::vector<line_point> const& points);
std::string fig6_csv(std::vector<protocol::connectivity_report> const& reports);

/**
 * One-shot coalition instance: P_d, P_0 for every relay subset, min-max,
 * Shapley and proportional ratios with utilities, and core verdicts.
 *
 * Input: {"channel": {...}?, "source": pos, "destination": pos,
 * "relays": [{"position": pos, "power_dbm": x?}, ...]} or the gain form
 * {"g_sd": g, "relays": [{"g_sr": g, "g_rd": g, "power_mw": x?}, ...]}.
 * Throws config_error on malformed input and link_infeasible when the
 * direct link cannot be closed.
 */
nlohmann::json solve(nlohmann::json const& scenario, channel::channel_model const& default_model);

/// Classes and coalition assignment for an explicit or generated network.
nlohmann::json network_summary(protocol::topology const& topo, protocol::coalition_assignment const& assignment);

}} // namespace coaltx::experiments

#endif // COALTX_EXPERIMENTS_HPP
