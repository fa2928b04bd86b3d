/**
 * \file src/netmodel.cpp
 *
 * \brief Topology, routing and dependency classification.
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
#include <coaltx/netmodel.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace coaltx { namespace netmodel {

network generate(std::size_t n, double area_side, std::mt19937_64& rng)
{
	if (n < 1)
	{
		throw std::invalid_argument("network needs at least one node");
	}
	if (!(area_side > 0) || !std::isfinite(area_side))
	{
		throw std::invalid_argument("area side must be finite and positive");
	}
	std::uniform_real_distribution<double> coord(0.0, area_side);
	network net;
	net.area_side = area_side;
	net.nodes.reserve(n);
	for (std::size_t i = 0; i < n; ++i)
	{
		double const x = coord(rng);
		double const y = coord(rng);
		net.nodes.push_back(position{x, y});
	}
	return net;
}

network generate(std::size_t n, double area_side, std::uint64_t seed)
{
	std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
	std::mt19937_64 rng(seq);
	network net = generate(n, area_side, rng);
	net.seed = seed;
	return net;
}

nlohmann::json to_json(network const& net)
{
	nlohmann::json nodes = nlohmann::json::array();
	for (std::size_t i = 0; i < net.size(); ++i)
	{
		nodes.push_back({{"id", i}, {"x", net.nodes[i].x}, {"y", net.nodes[i].y}});
	}
	return {{"area_side", net.area_side}, {"seed", net.seed}, {"nodes", std::move(nodes)}};
}

network network_from_json(nlohmann::json const& j)
{
	try
	{
		network net;
		net.area_side = j.at("area_side").get<double>();
		net.seed = j.value("seed", std::uint64_t{0});
		if (!(net.area_side > 0))
		{
			throw config_error("network: area_side must be positive");
		}
		auto const& nodes = j.at("nodes");
		if (!nodes.is_array() || nodes.empty())
		{
			throw config_error("network: 'nodes' must be a nonempty array");
		}
		net.nodes.assign(nodes.size(), position{});
		std::vector<bool> seen(nodes.size(), false);
		for (auto const& nj : nodes)
		{
			auto const id = nj.at("id").get<std::size_t>();
			if (id >= nodes.size() || seen[id])
			{
				std::ostringstream oss;
				oss << "network: node id " << id << " is duplicated or outside 0.." << nodes.size() - 1;
				throw config_error(oss.str());
			}
			seen[id] = true;
			position const p{nj.at("x").get<double>(), nj.at("y").get<double>()};
			if (!(p.x >= 0 && p.x <= net.area_side && p.y >= 0 && p.y <= net.area_side))
			{
				std::ostringstream oss;
				oss << "network: node " << id << " lies outside the " << net.area_side << " m square";
				throw config_error(oss.str());
			}
			net.nodes[id] = p;
		}
		return net;
	}
	catch (nlohmann::json::exception const& e)
	{
		throw config_error(std::string("network: ") + e.what());
	}
}

link_graph::link_graph(std::vector<std::vector<node_id>> adjacency)
: adj_(std::move(adjacency))
{
	for (auto& row : adj_)
	{
		std::sort(row.begin(), row.end());
		row.erase(std::unique(row.begin(), row.end()), row.end());
	}
}

bool link_graph::linked(node_id i, node_id j) const
{
	auto const& row = adj_.at(i);
	return std::binary_search(row.begin(), row.end(), j);
}

link_graph build_link_graph(network const& net, channel_model const& model)
{
	std::size_t const n = net.size();
	std::vector<std::vector<node_id>> adj(n);
	for (node_id i = 0; i < n; ++i)
	{
		for (node_id j = i + 1; j < n; ++j)
		{
			double const d = channel::distance(net.nodes[i], net.nodes[j]);
			// Coincident nodes need no power at all.
			bool const ok = d == 0 ||
			    model.within_cap(channel::required_direct_power(channel::path_gain(d, model), model));
			if (ok)
			{
				adj[i].push_back(j);
				adj[j].push_back(i);
			}
		}
	}
	return link_graph(std::move(adj));
}

route_table::route_table(link_graph const& links)
: n_(links.size()),
  parent_(n_ * n_, unreachable)
{
	std::deque<node_id> queue;
	for (node_id s = 0; s < n_; ++s)
	{
		node_id* par = parent_.data() + std::size_t{s} * n_;
		par[s] = s;
		queue.assign(1, s);
		while (!queue.empty())
		{
			node_id const u = queue.front();
			queue.pop_front();
			for (node_id v : links.neighbors(u))
			{
				if (par[v] == unreachable)
				{
					par[v] = u;
					queue.push_back(v);
				}
			}
		}
	}
}

std::vector<node_id> route_table::route(node_id from, node_id to) const
{
	std::vector<node_id> path;
	if (!reachable(from, to))
	{
		return path;
	}
	for (node_id v = to; v != from; v = parent(from, v))
	{
		path.push_back(v);
	}
	path.push_back(from);
	std::reverse(path.begin(), path.end());
	return path;
}

std::size_t route_table::hops(node_id from, node_id to) const
{
	if (!reachable(from, to))
	{
		throw std::out_of_range("no route between the requested nodes");
	}
	std::size_t h = 0;
	for (node_id v = to; v != from; v = parent(from, v))
	{
		++h;
	}
	return h;
}

std::vector<node_id> route_table::component_peers(node_id from) const
{
	std::vector<node_id> out;
	for (node_id j = 0; j < n_; ++j)
	{
		if (j != from && reachable(from, j))
		{
			out.push_back(j);
		}
	}
	return out;
}

traffic_matrix all_pairs_traffic(route_table const& rt)
{
	traffic_matrix t(rt.size());
	for (node_id i = 0; i < rt.size(); ++i)
	{
		t[i] = rt.component_peers(i);
	}
	return t;
}

traffic_matrix sampled_traffic(route_table const& rt, std::size_t k, std::mt19937_64& rng)
{
	traffic_matrix t(rt.size());
	for (node_id i = 0; i < rt.size(); ++i)
	{
		std::vector<node_id> peers = rt.component_peers(i);
		if (peers.size() > k)
		{
			std::vector<node_id> picked;
			std::sample(peers.begin(), peers.end(), std::back_inserter(picked), k, rng);
			peers = std::move(picked);
		}
		t[i] = std::move(peers);
	}
	return t;
}

namespace {

void sort_unique(std::vector<node_id>& v)
{
	std::sort(v.begin(), v.end());
	v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace

dependency_graph::dependency_graph(route_table const& rt, traffic_matrix const& traffic)
: forwarders_(rt.size()),
  first_hops_(rt.size()),
  next_hops_(rt.size())
{
	if (traffic.size() != rt.size())
	{
		throw std::invalid_argument("traffic matrix does not match the route table");
	}
	std::size_t const n = rt.size();
	// Per source, a route walked back from its destination stops at the first
	// node already visited: the rest of the route was recorded before.
	std::vector<bool> visited(n);
	for (node_id i = 0; i < n; ++i)
	{
		std::fill(visited.begin(), visited.end(), false);
		visited[i] = true;
		for (node_id j : traffic[i])
		{
			if (j == i || !rt.reachable(i, j))
			{
				continue;
			}
			node_id v = j;
			while (!visited[v])
			{
				visited[v] = true;
				node_id const p = rt.parent(i, v);
				next_hops_[p].push_back(v);
				if (p != i)
				{
					forwarders_[i].push_back(p);
					if (rt.parent(i, p) == i)
					{
						first_hops_[i].push_back(p);
					}
				}
				v = p;
			}
		}
	}
	for (std::size_t i = 0; i < n; ++i)
	{
		sort_unique(forwarders_[i]);
		sort_unique(first_hops_[i]);
		sort_unique(next_hops_[i]);
	}
}

bool dependency_graph::depends(node_id i, node_id f) const
{
	auto const& row = forwarders_.at(i);
	return std::binary_search(row.begin(), row.end(), f);
}

std::string_view to_string(node_class c) noexcept
{
	switch (c)
	{
		case node_class::backbone:
			return "backbone";
		case node_class::boundary:
			return "boundary";
		case node_class::isolated:
			return "isolated";
	}
	return "unknown";
}

std::vector<node_class> classify(dependency_graph const& dep, link_graph const& links)
{
	if (dep.size() != links.size())
	{
		throw std::invalid_argument("dependency graph and link graph sizes differ");
	}
	std::vector<node_class> out(links.size(), node_class::backbone);
	for (node_id i = 0; i < links.size(); ++i)
	{
		if (links.degree(i) == 0)
		{
			out[i] = node_class::isolated;
			continue;
		}
		if (dep.forwarders(i).empty())
		{
			continue;
		}
		auto const hops = dep.first_hop_forwarders(i);
		bool const reciprocated = std::any_of(hops.begin(), hops.end(),
		                                      [&](node_id f) { return dep.depends(f, i); });
		if (!reciprocated)
		{
			out[i] = node_class::boundary;
		}
	}
	return out;
}

namespace {

void check_discount(double beta)
{
	if (!(beta >= 0 && beta < 1))
	{
		std::ostringstream oss;
		oss << "discount factor " << beta << " outside [0, 1)";
		throw bad_discount(oss.str());
	}
}

} // namespace

double discounted_average_payoff(std::span<double const> stream, double beta)
{
	check_discount(beta);
	if (stream.empty())
	{
		throw std::invalid_argument("payoff stream is empty");
	}
	double acc = 0;
	double weight = 1; // beta^(t-1)
	for (std::size_t t = 0; t + 1 < stream.size(); ++t)
	{
		acc += weight * stream[t];
		weight *= beta;
	}
	// The last entry repeats forever: (1-beta) sum_{t>=T} beta^(t-1) = beta^(T-1).
	return (1 - beta) * acc + weight * stream.back();
}

bool cooperation_sustainable(double cheat_gain, double coop_gain, double punish_payoff, double beta)
{
	check_discount(beta);
	double const deviate[] = {cheat_gain, punish_payoff};
	double const cooperate[] = {coop_gain};
	return discounted_average_payoff(deviate, beta) <= discounted_average_payoff(cooperate, beta);
}

}} // namespace coaltx::netmodel
