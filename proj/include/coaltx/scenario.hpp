/**
 * \file coaltx/scenario.hpp
 *
 * \brief Scenario configuration for the experiment front end.
 *
 * A configuration is a JSON document; every section and field is optional
 * and falls back to the defaults below. Command-line flags are applied on
 * top by the caller.
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

#ifndef COALTX_SCENARIO_HPP
#define COALTX_SCENARIO_HPP

#include <coaltx/channel.hpp>
#include <coaltx/coalition.hpp>
#include <coaltx/protocol.hpp>

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coaltx { namespace scenario {

using channel::position;

struct channel_params
{
	double exponent{3};
	double noise_dbm{-60};
	double p_max_dbm{10};
	double snr_target_db{10};
	double reference_gain{1};

	channel::channel_model model() const;
};

/// Evenly spaced values first, first+step, ..., up to last inclusive.
std::vector<double> linear_range(double first, double last, double step);

/// Relays on an arc around a backbone at the origin (the fig3/fig4 setup).
struct arc_sweep_config
{
	std::vector<double> destinations{100, 50};
	std::vector<std::size_t> relay_counts{1, 2, 3};
	std::vector<double> distances = linear_range(5, 100, 5);
	std::size_t iterations{1000};
	double angle_min{0.5 * std::numbers::pi};
	double angle_max{1.5 * std::numbers::pi};
};

/// Two relays on the x axis, the second one swept (the fig5 setup).
struct line_sweep_config
{
	position backbone{0, 0};
	position destination{-50, 0};
	std::vector<double> node1_x{20, 50};
	std::vector<double> node2_x = linear_range(5, 100, 5);
};

/// Random networks of growing area (the fig6 setup).
struct connectivity_config
{
	std::vector<std::size_t> nodes{100, 500};
	std::vector<double> areas{50, 100, 200, 400, 600, 800, 1000, 1500};
	std::size_t trials{100};
	protocol::protocol_options options{};
};

struct scenario_config
{
	channel_params channel{};
	coalition::fairness_kind fairness{coalition::fairness_kind::minmax};
	std::uint64_t seed{1};
	std::string out;
	arc_sweep_config arc{};
	line_sweep_config line{};
	connectivity_config connectivity{};
	std::optional<nlohmann::json> solve;   ///< one-shot coalition instance
	std::optional<nlohmann::json> network; ///< explicit network for replay
};

/// Throws config_error naming the offending JSON path.
scenario_config parse_config(nlohmann::json const& j);

/// Parses text; syntax errors report line and column. Throws config_error.
nlohmann::json parse_json_text(std::string_view text, std::string_view origin);

/// Reads and parses a configuration file. Throws config_error.
scenario_config load_config(std::string const& path);

/// Reads a JSON file. Throws config_error.
nlohmann::json load_json_file(std::string const& path);

/// [x, y] or {"x": .., "y": ..}. Throws config_error.
position parse_position(nlohmann::json const& j, std::string_view where);

}} // namespace coaltx::scenario

#endif // COALTX_SCENARIO_HPP
