/**
 * \file coaltx/protocol.hpp
 *
 * \brief Joint repeated-game / coalition-game forwarding protocol and
 *  connectivity measurement.
 *
 * The six protocol steps map onto this module as follows: route discovery
 * and dependency analysis (analyze), forwarding among backbone nodes
 * (assumed enforced, nothing to simulate), neighbor discovery, coalition
 * formation, relay commitment and forwarding entitlement (run_protocol).
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

#ifndef COALTX_PROTOCOL_HPP
#define COALTX_PROTOCOL_HPP

#include <coaltx/coalition.hpp>
#include <coaltx/netmodel.hpp>

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace coaltx { namespace protocol {

using coalition::fairness_kind;
using netmodel::node_id;

/// Which of a backbone's transmissions its relays assist.
enum class flow_policy
{
	longest, ///< the longest next-hop link (largest direct power)
	random   ///< a uniformly drawn next-hop link
};

std::string_view to_string(flow_policy p) noexcept;
flow_policy parse_flow_policy(std::string_view s);

/// Slack below P_d a coalition must reach to count as power-reducing, mW.
inline constexpr double power_saving_slack_mw = 1e-12;

struct protocol_options
{
	fairness_kind fairness{fairness_kind::minmax};
	flow_policy flow{flow_policy::longest};
	std::size_t max_coalition_size{coalition::max_shapley_relays};
	double backbone_margin{0};
	/// Destinations per node; all other nodes of the component when unset.
	std::optional<std::size_t> destinations_per_node;
};

/// Routing, dependency and classification results for one network.
struct topology
{
	netmodel::network net;
	netmodel::link_graph links;
	netmodel::route_table routes;
	netmodel::traffic_matrix traffic;
	netmodel::dependency_graph dep;
	std::vector<netmodel::node_class> classes;
};

/// Step 1: links, routes, dependencies and classes. \p rng is used only for sampled traffic.
topology analyze(netmodel::network net, channel::channel_model const& model,
                 protocol_options const& opts = {}, std::mt19937_64* rng = nullptr);

/// Same, with an explicit destination set per node.
topology analyze(netmodel::network net, channel::channel_model const& model,
                 netmodel::traffic_matrix traffic);

struct backbone_candidate
{
	node_id backbone{0};
	double alpha{0};               ///< ratio the boundary node would receive
	std::size_t coalition_size{0}; ///< members before the boundary node joins
	double distance_m{0};
};

/**
 * Lexicographic preference: larger alpha, then smaller coalition, then
 * shorter distance, then lower id. Alphas within 1e-12 relative are tied.
 * Throws no_candidates on an empty list.
 */
node_id select_backbone(node_id boundary, std::span<backbone_candidate const> candidates);

/// One backbone with the boundary nodes relaying for its active flow.
struct coalition_record
{
	node_id backbone{0};
	node_id flow_destination{0};
	std::vector<node_id> members; ///< ascending; relay i of the allocation is members[i]
	coalition::allocation alloc;
};

struct boundary_assignment
{
	node_id node{0};
	std::optional<node_id> backbone;
	fairness_kind fairness{fairness_kind::minmax};
	double alpha{0};
	double relay_power_mw{0};
	double p0_before_mw{0}; ///< P_d of the backbone's flow
	double p0_after_mw{0};  ///< P_0 with the whole coalition relaying
};

struct coalition_assignment
{
	std::vector<boundary_assignment> boundary; ///< one entry per Boundary node, ascending id
	std::vector<coalition_record> coalitions;  ///< ascending backbone id

	/// The entry for \p node, or nullptr when it is not a Boundary node.
	boundary_assignment const* find(node_id node) const;
};

/**
 * Steps 3 to 6. Boundary nodes arrive in ascending id order, consider their
 * Backbone neighbors, join the preferred one, and that coalition's ratios are
 * recomputed jointly. \p rng is only drawn from under flow_policy::random.
 */
coalition_assignment run_protocol(topology const& topo, channel::channel_model const& model,
                                  protocol_options const& opts = {}, std::mt19937_64* rng = nullptr);

enum class connectivity_mode { no_coalition, coalition };

std::string_view to_string(connectivity_mode m) noexcept;

struct connectivity_counts
{
	std::size_t nodes{0};
	std::size_t connected_no_coalition{0};
	std::size_t connected_coalition{0};

	double fraction(connectivity_mode m) const noexcept;
};

/// Backbone nodes always count; Boundary nodes only with a power-reducing coalition.
connectivity_counts count_connected(topology const& topo, coalition_assignment const& assignment);

double connectivity(topology const& topo, channel::channel_model const& model, connectivity_mode mode,
                    protocol_options const& opts = {}, std::mt19937_64* rng = nullptr);

struct connectivity_point
{
	std::size_t nodes{0};
	double area_side{0};
	std::vector<connectivity_counts> trials;
	double mean_no_coalition{0};
	double stderr_no_coalition{0};
	double mean_coalition{0};
	double stderr_coalition{0};
	/// (mean coalition - mean no-coalition) / mean no-coalition; 0 when the latter is 0.
	double relative_improvement{0};
};

struct connectivity_report
{
	std::uint64_t seed{0};
	std::vector<connectivity_point> points; ///< ordered as the requested areas
};

/// Per-trial engine seeded from (master seed, n, area index, trial).
std::mt19937_64 trial_engine(std::uint64_t master_seed, std::size_t n, std::size_t area_index, std::size_t trial);

connectivity_report monte_carlo_connectivity(std::size_t n, std::span<double const> area_sides,
                                             std::size_t trials, std::uint64_t seed,
                                             channel::channel_model const& model,
                                             protocol_options const& opts = {});

nlohmann::json to_json(coalition_assignment const& a);
nlohmann::json to_json(connectivity_report const& r);

}} // namespace coaltx::protocol

#endif // COALTX_PROTOCOL_HPP
