/**
 * \file src/protocol.cpp
 *
 * \brief Coalition formation between boundary and backbone nodes and the
 *  resulting connectivity.
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
#include <coaltx/protocol.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace coaltx { namespace protocol {

using netmodel::node_class;

std::string_view to_string(flow_policy p) noexcept
{
	return p == flow_policy::longest ? "longest" : "random";
}

flow_policy parse_flow_policy(std::string_view s)
{
	if (s == "longest")
	{
		return flow_policy::longest;
	}
	if (s == "random")
	{
		return flow_policy::random;
	}
	throw std::invalid_argument("unknown flow policy '" + std::string(s) + "'");
}

std::string_view to_string(connectivity_mode m) noexcept
{
	return m == connectivity_mode::no_coalition ? "no_coalition" : "coalition";
}

topology analyze(netmodel::network net, channel::channel_model const& model, netmodel::traffic_matrix traffic)
{
	topology t;
	t.net = std::move(net);
	t.links = netmodel::build_link_graph(t.net, model);
	t.routes = netmodel::routes(t.links);
	t.traffic = std::move(traffic);
	t.dep = netmodel::dependency(t.routes, t.traffic);
	t.classes = netmodel::classify(t.dep, t.links);
	return t;
}

topology analyze(netmodel::network net, channel::channel_model const& model,
                 protocol_options const& opts, std::mt19937_64* rng)
{
	auto const links = netmodel::build_link_graph(net, model);
	netmodel::route_table const rt(links);
	netmodel::traffic_matrix traffic;
	if (opts.destinations_per_node)
	{
		if (rng == nullptr)
		{
			throw std::invalid_argument("sampled traffic needs a random engine");
		}
		traffic = netmodel::sampled_traffic(rt, *opts.destinations_per_node, *rng);
	}
	else
	{
		traffic = netmodel::all_pairs_traffic(rt);
	}
	return analyze(std::move(net), model, std::move(traffic));
}

namespace {

constexpr double alpha_tie_rel = 1e-12;

bool alpha_tied(double a, double b)
{
	return std::abs(a - b) <= alpha_tie_rel * std::max(std::abs(a), std::abs(b));
}

} // namespace

node_id select_backbone(node_id boundary, std::span<backbone_candidate const> candidates)
{
	if (candidates.empty())
	{
		std::ostringstream oss;
		oss << "boundary node " << boundary << " has no backbone candidates";
		throw no_candidates(oss.str());
	}
	auto better = [](backbone_candidate const& a, backbone_candidate const& b) {
		if (!alpha_tied(a.alpha, b.alpha))
		{
			return a.alpha > b.alpha;
		}
		if (a.coalition_size != b.coalition_size)
		{
			return a.coalition_size < b.coalition_size;
		}
		if (a.distance_m != b.distance_m)
		{
			return a.distance_m < b.distance_m;
		}
		return a.backbone < b.backbone;
	};
	backbone_candidate const* best = &candidates.front();
	for (auto const& c : candidates.subspan(1))
	{
		if (better(c, *best))
		{
			best = &c;
		}
	}
	return best->backbone;
}

boundary_assignment const* coalition_assignment::find(node_id node) const
{
	auto it = std::lower_bound(boundary.begin(), boundary.end(), node,
	                           [](boundary_assignment const& a, node_id n) { return a.node < n; });
	return (it != boundary.end() && it->node == node) ? &*it : nullptr;
}

namespace {

struct coalition_state
{
	std::vector<node_id> members;
	node_id flow_destination{0};
	coalition::allocation alloc;
};

struct evaluation
{
	node_id flow_destination{0};
	coalition::allocation alloc;
};

/// Longest next hop of \p b not held by a member; lower id on ties.
std::optional<node_id> longest_flow(topology const& topo, node_id b, std::span<node_id const> members)
{
	std::optional<node_id> best;
	double best_d = -1;
	for (node_id v : topo.dep.next_hops(b))
	{
		if (std::find(members.begin(), members.end(), v) != members.end())
		{
			continue;
		}
		double const d = channel::distance(topo.net.nodes[b], topo.net.nodes[v]);
		if (d > best_d)
		{
			best_d = d;
			best = v;
		}
	}
	return best;
}

std::optional<evaluation> evaluate(topology const& topo, channel::channel_model const& model,
                                   protocol_options const& opts, node_id backbone,
                                   std::optional<node_id> preferred_flow,
                                   std::span<node_id const> members)
{
	std::optional<node_id> flow;
	if (preferred_flow && std::find(members.begin(), members.end(), *preferred_flow) == members.end())
	{
		flow = preferred_flow;
	}
	else
	{
		flow = longest_flow(topo, backbone, members);
	}
	if (!flow)
	{
		return std::nullopt;
	}

	std::vector<channel::position> relays;
	relays.reserve(members.size());
	for (node_id m : members)
	{
		relays.push_back(topo.net.nodes[m]);
	}
	try
	{
		auto const ctx = cooptx::coalition_context::from_positions(
		    model, topo.net.nodes[backbone], topo.net.nodes[*flow], relays);
		auto alloc = coalition::allocate(ctx, opts.fairness, opts.backbone_margin);
		if (!(alloc.p0_mw < alloc.p_d_mw - power_saving_slack_mw))
		{
			return std::nullopt;
		}
		return evaluation{*flow, std::move(alloc)};
	}
	catch (coincident_nodes const&)
	{
		return std::nullopt;
	}
	catch (link_infeasible const&)
	{
		return std::nullopt;
	}
}

} // namespace

coalition_assignment run_protocol(topology const& topo, channel::channel_model const& model,
                                  protocol_options const& opts, std::mt19937_64* rng)
{
	std::size_t const n = topo.net.size();

	// Flow each backbone would like relays to assist, before exclusions.
	std::vector<std::optional<node_id>> preferred(n);
	if (opts.flow == flow_policy::random)
	{
		if (rng == nullptr)
		{
			throw std::invalid_argument("random flow policy needs a random engine");
		}
		for (node_id b = 0; b < n; ++b)
		{
			auto const hops = topo.dep.next_hops(b);
			if (topo.classes[b] == node_class::backbone && !hops.empty())
			{
				std::uniform_int_distribution<std::size_t> pick(0, hops.size() - 1);
				preferred[b] = hops[pick(*rng)];
			}
		}
	}

	std::map<node_id, coalition_state> coalitions;
	std::vector<backbone_candidate> candidates;
	std::vector<std::pair<node_id, evaluation>> evaluated;
	for (node_id x = 0; x < n; ++x)
	{
		if (topo.classes[x] != node_class::boundary)
		{
			continue;
		}
		candidates.clear();
		evaluated.clear();
		for (node_id b : topo.links.neighbors(x))
		{
			if (topo.classes[b] != node_class::backbone)
			{
				continue;
			}
			auto it = coalitions.find(b);
			std::vector<node_id> members;
			if (it != coalitions.end())
			{
				members = it->second.members;
			}
			if (members.size() + 1 > opts.max_coalition_size)
			{
				continue;
			}
			members.insert(std::upper_bound(members.begin(), members.end(), x), x);
			auto ev = evaluate(topo, model, opts, b, preferred[b], members);
			if (!ev)
			{
				continue;
			}
			std::size_t const idx = static_cast<std::size_t>(
			    std::find(members.begin(), members.end(), x) - members.begin());
			candidates.push_back({b, ev->alloc.alpha[idx], members.size() - 1,
			                      channel::distance(topo.net.nodes[x], topo.net.nodes[b])});
			evaluated.emplace_back(b, std::move(*ev));
		}
		if (candidates.empty())
		{
			continue;
		}
		node_id const chosen = select_backbone(x, candidates);
		auto& ev = std::find_if(evaluated.begin(), evaluated.end(),
		                        [&](auto const& e) { return e.first == chosen; })->second;
		auto& st = coalitions[chosen];
		st.members.insert(std::upper_bound(st.members.begin(), st.members.end(), x), x);
		st.flow_destination = ev.flow_destination;
		st.alloc = std::move(ev.alloc);
	}

	coalition_assignment out;
	std::vector<std::optional<std::pair<node_id, std::size_t>>> seat(n);
	for (auto& [b, st] : coalitions)
	{
		for (std::size_t i = 0; i < st.members.size(); ++i)
		{
			seat[st.members[i]] = std::make_pair(b, out.coalitions.size());
		}
		out.coalitions.push_back({b, st.flow_destination, st.members, st.alloc});
	}
	for (node_id x = 0; x < n; ++x)
	{
		if (topo.classes[x] != node_class::boundary)
		{
			continue;
		}
		boundary_assignment a;
		a.node = x;
		a.fairness = opts.fairness;
		if (seat[x])
		{
			auto const& rec = out.coalitions[seat[x]->second];
			std::size_t const idx = static_cast<std::size_t>(
			    std::find(rec.members.begin(), rec.members.end(), x) - rec.members.begin());
			a.backbone = rec.backbone;
			a.alpha = rec.alloc.alpha[idx];
			a.relay_power_mw = model.p_max_mw();
			a.p0_before_mw = rec.alloc.p_d_mw;
			a.p0_after_mw = rec.alloc.p0_mw;
		}
		out.boundary.push_back(a);
	}
	return out;
}

double connectivity_counts::fraction(connectivity_mode m) const noexcept
{
	if (nodes == 0)
	{
		return 0;
	}
	auto const c = m == connectivity_mode::no_coalition ? connected_no_coalition : connected_coalition;
	return static_cast<double>(c) / static_cast<double>(nodes);
}

connectivity_counts count_connected(topology const& topo, coalition_assignment const& assignment)
{
	connectivity_counts c;
	c.nodes = topo.net.size();
	for (node_id i = 0; i < c.nodes; ++i)
	{
		switch (topo.classes[i])
		{
			case node_class::backbone:
				++c.connected_no_coalition;
				++c.connected_coalition;
				break;
			case node_class::boundary:
			{
				auto const* a = assignment.find(i);
				if (a && a->backbone && a->p0_after_mw < a->p0_before_mw - power_saving_slack_mw)
				{
					++c.connected_coalition;
				}
				break;
			}
			case node_class::isolated:
				break;
		}
	}
	return c;
}

double connectivity(topology const& topo, channel::channel_model const& model, connectivity_mode mode,
                    protocol_options const& opts, std::mt19937_64* rng)
{
	if (mode == connectivity_mode::no_coalition)
	{
		return count_connected(topo, coalition_assignment{}).fraction(mode);
	}
	return count_connected(topo, run_protocol(topo, model, opts, rng)).fraction(mode);
}

std::mt19937_64 trial_engine(std::uint64_t master_seed, std::size_t n, std::size_t area_index, std::size_t trial)
{
	std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
	                  static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(area_index),
	                  static_cast<std::uint32_t>(trial)};
	return std::mt19937_64(seq);
}

namespace {

void mean_stderr(std::vector<double> const& xs, double& mean, double& se)
{
	double const k = static_cast<double>(xs.size());
	mean = 0;
	for (double x : xs)
	{
		mean += x;
	}
	mean /= k;
	se = 0;
	if (xs.size() > 1)
	{
		double ss = 0;
		for (double x : xs)
		{
			ss += (x - mean) * (x - mean);
		}
		se = std::sqrt(ss / (k - 1) / k);
	}
}

} // namespace

connectivity_report monte_carlo_connectivity(std::size_t n, std::span<double const> area_sides,
                                             std::size_t trials, std::uint64_t seed,
                                             channel::channel_model const& model,
                                             protocol_options const& opts)
{
	if (trials < 1)
	{
		throw std::invalid_argument("at least one trial is required");
	}
	connectivity_report report;
	report.seed = seed;
	for (std::size_t a = 0; a < area_sides.size(); ++a)
	{
		connectivity_point pt;
		pt.nodes = n;
		pt.area_side = area_sides[a];
		std::vector<double> no_coal, coal;
		for (std::size_t t = 0; t < trials; ++t)
		{
			auto rng = trial_engine(seed, n, a, t);
			auto net = netmodel::generate(n, area_sides[a], rng);
			auto const topo = analyze(std::move(net), model, opts, &rng);
			auto const assignment = run_protocol(topo, model, opts, &rng);
			auto const counts = count_connected(topo, assignment);
			pt.trials.push_back(counts);
			no_coal.push_back(counts.fraction(connectivity_mode::no_coalition));
			coal.push_back(counts.fraction(connectivity_mode::coalition));
		}
		mean_stderr(no_coal, pt.mean_no_coalition, pt.stderr_no_coalition);
		mean_stderr(coal, pt.mean_coalition, pt.stderr_coalition);
		pt.relative_improvement = pt.mean_no_coalition > 0
		    ? (pt.mean_coalition - pt.mean_no_coalition) / pt.mean_no_coalition
		    : 0;
		report.points.push_back(std::move(pt));
	}
	return report;
}

nlohmann::json to_json(coalition_assignment const& a)
{
	nlohmann::json boundary = nlohmann::json::array();
	for (auto const& b : a.boundary)
	{
		nlohmann::json j = {{"node", b.node}, {"fairness", coalition::to_string(b.fairness)}};
		if (b.backbone)
		{
			j["backbone"] = *b.backbone;
			j["alpha"] = b.alpha;
			j["relay_power_mw"] = b.relay_power_mw;
			j["p0_before_mw"] = b.p0_before_mw;
			j["p0_after_mw"] = b.p0_after_mw;
		}
		else
		{
			j["backbone"] = nullptr;
		}
		boundary.push_back(std::move(j));
	}
	nlohmann::json coals = nlohmann::json::array();
	for (auto const& c : a.coalitions)
	{
		coals.push_back({{"backbone", c.backbone},
		                 {"flow_destination", c.flow_destination},
		                 {"members", c.members},
		                 {"alpha", c.alloc.alpha},
		                 {"p_d_mw", c.alloc.p_d_mw},
		                 {"p0_mw", c.alloc.p0_mw},
		                 {"u0", c.alloc.u0}});
	}
	return {{"boundary", std::move(boundary)}, {"coalitions", std::move(coals)}};
}

nlohmann::json to_json(connectivity_report const& r)
{
	nlohmann::json points = nlohmann::json::array();
	for (auto const& p : r.points)
	{
		nlohmann::json trials = nlohmann::json::array();
		for (auto const& t : p.trials)
		{
			trials.push_back({{"nodes", t.nodes},
			                  {"connected_no_coalition", t.connected_no_coalition},
			                  {"connected_coalition", t.connected_coalition}});
		}
		points.push_back({{"n", p.nodes},
		                  {"B", p.area_side},
		                  {"mean_no_coalition", p.mean_no_coalition},
		                  {"stderr_no_coalition", p.stderr_no_coalition},
		                  {"mean_coalition", p.mean_coalition},
		                  {"stderr_coalition", p.stderr_coalition},
		                  {"relative_improvement", p.relative_improvement},
		                  {"trials", std::move(trials)}});
	}
	return {{"seed", r.seed}, {"points", std::move(points)}};
}

}} // namespace coaltx::protocol
