/**
 * \file coaltx/netmodel.hpp
 *
 * \brief Random ad hoc topologies, shortest-hop routing, forwarding
 *  dependencies and backbone/boundary classification, plus the
 *  repeated-game payoff primitives used to reason about backbone
 *  cooperation.
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

#ifndef COALTX_NETMODEL_HPP
#define COALTX_NETMODEL_HPP

#include <coaltx/channel.hpp>

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace coaltx { namespace netmodel {

using channel::channel_model;
using channel::position;
using node_id = std::uint32_t;

struct network
{
	std::vector<position> nodes; ///< node i sits at nodes[i]
	double area_side{0};         ///< B, meters
	std::uint64_t seed{0};

	std::size_t size() const noexcept { return nodes.size(); }
};

/// n positions i.i.d. uniform on [0,B]^2, reproducible from \p seed.
network generate(std::size_t n, double area_side, std::uint64_t seed);

/// Same, drawing from a caller-owned engine.
network generate(std::size_t n, double area_side, std::mt19937_64& rng);

nlohmann::json to_json(network const& net);

/// Throws config_error on malformed input (ids must be 0..n-1, positions inside the square).
network network_from_json(nlohmann::json const& j);

/// Undirected physical links: i~j iff the direct link meets the SNR target within the cap.
class link_graph
{
public:
	link_graph() = default;
	explicit link_graph(std::vector<std::vector<node_id>> adjacency);

	std::size_t size() const noexcept { return adj_.size(); }
	std::span<node_id const> neighbors(node_id i) const { return adj_.at(i); }
	bool linked(node_id i, node_id j) const;
	std::size_t degree(node_id i) const { return adj_.at(i).size(); }

private:
	std::vector<std::vector<node_id>> adj_; ///< sorted ascending
};

link_graph build_link_graph(network const& net, channel_model const& model);

/**
 * Breadth-first shortest-hop trees, one per source. Neighbors are expanded in
 * ascending id order, so among equal-hop routes the one through lower ids
 * is kept.
 */
class route_table
{
public:
	static constexpr node_id unreachable = ~node_id{0};

	route_table() = default;
	explicit route_table(link_graph const& links);

	std::size_t size() const noexcept { return n_; }
	bool reachable(node_id from, node_id to) const { return parent(from, to) != unreachable; }

	/// Predecessor of \p to on the route from \p from; \p from itself for to == from.
	node_id parent(node_id from, node_id to) const { return parent_.at(std::size_t{from} * n_ + to); }

	/// Node sequence from -> to, empty when unreachable.
	std::vector<node_id> route(node_id from, node_id to) const;
	std::size_t hops(node_id from, node_id to) const;

	/// Nodes reachable from \p from, excluding itself, ascending.
	std::vector<node_id> component_peers(node_id from) const;

private:
	std::size_t n_{0};
	std::vector<node_id> parent_;
};

inline route_table routes(link_graph const& links) { return route_table(links); }

/// Destination set D_i for every node.
using traffic_matrix = std::vector<std::vector<node_id>>;

/// Every node sends to every other node of its component.
traffic_matrix all_pairs_traffic(route_table const& rt);

/// At most k destinations per node drawn from its component.
traffic_matrix sampled_traffic(route_table const& rt, std::size_t k, std::mt19937_64& rng);

/**
 * Directed forwarding dependencies: i -> f whenever f is an intermediate hop
 * on one of i's routes. Also records each node's first-hop forwarders and
 * the next hops each node transmits to, for its own traffic or as a
 * forwarder.
 */
class dependency_graph
{
public:
	dependency_graph() = default;
	dependency_graph(route_table const& rt, traffic_matrix const& traffic);

	std::size_t size() const noexcept { return forwarders_.size(); }
	std::span<node_id const> forwarders(node_id i) const { return forwarders_.at(i); }
	std::span<node_id const> first_hop_forwarders(node_id i) const { return first_hops_.at(i); }
	std::span<node_id const> next_hops(node_id i) const { return next_hops_.at(i); }
	bool depends(node_id i, node_id f) const;

private:
	std::vector<std::vector<node_id>> forwarders_;
	std::vector<std::vector<node_id>> first_hops_;
	std::vector<std::vector<node_id>> next_hops_;
};

inline dependency_graph dependency(route_table const& rt, traffic_matrix const& traffic)
{
	return dependency_graph(rt, traffic);
}

enum class node_class { backbone, boundary, isolated };

std::string_view to_string(node_class c) noexcept;

/**
 * Isolated: no physical neighbor. Boundary: needs forwarders, yet none of its
 * first-hop forwarders depends on it in return. Backbone: everything else.
 */
std::vector<node_class> classify(dependency_graph const& dep, link_graph const& links);

/**
 * (1 - beta) sum_t beta^(t-1) u(t) for a stream whose last entry repeats
 * forever. Throws bad_discount unless 0 <= beta < 1, std::invalid_argument
 * for an empty stream.
 */
double discounted_average_payoff(std::span<double const> stream, double beta);

/**
 * Grim-trigger check: cooperating forever is at least as good as one period
 * of \p cheat_gain followed by \p punish_payoff forever.
 */
bool cooperation_sustainable(double cheat_gain, double coop_gain, double punish_payoff, double beta);

}} // namespace coaltx::netmodel

#endif // COALTX_NETMODEL_HPP
