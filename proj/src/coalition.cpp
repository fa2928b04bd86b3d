/**
 * \file src/coalition.cpp
 *
 * \brief Coalition-game solver for the backbone/boundary relay game.
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

#include <coaltx/coalition.hpp>
#include <coaltx/errors.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace coaltx { namespace coalition {

double char_value::value() const
{
	if (!finite_)
	{
		throw std::logic_error("value() called on an unviable characteristic value");
	}
	return value_;
}

std::string_view to_string(fairness_kind k) noexcept
{
	switch (k)
	{
		case fairness_kind::minmax:
			return "minmax";
		case fairness_kind::shapley:
			return "shapley";
		case fairness_kind::proportional:
			return "proportional";
	}
	return "unknown";
}

fairness_kind parse_fairness(std::string_view s)
{
	if (s == "minmax" || s == "min-max")
	{
		return fairness_kind::minmax;
	}
	if (s == "shapley")
	{
		return fairness_kind::shapley;
	}
	if (s == "proportional")
	{
		return fairness_kind::proportional;
	}
	throw std::invalid_argument("unknown fairness kind '" + std::string(s) + "'");
}

double allocation::alpha_sum() const noexcept
{
	return std::accumulate(alpha.begin(), alpha.end(), 0.0);
}

coalition_context at_power_cap(coalition_context const& ctx)
{
	std::vector<double> const p(ctx.size(), ctx.model().p_max_mw());
	return ctx.with_relay_powers(p);
}

double core_bound(coalition_context const& ctx)
{
	coalition_context const capped = at_power_cap(ctx);
	double const p_d = capped.p_d_mw();
	return (p_d - cooptx::required_source_power(capped, capped.everyone())) / p_d;
}

namespace {

void check_alpha_size(coalition_context const& ctx, std::span<double const> alpha)
{
	if (alpha.size() != ctx.size())
	{
		std::ostringstream oss;
		oss << "expected " << ctx.size() << " forwarding ratios, got " << alpha.size();
		throw std::invalid_argument(oss.str());
	}
}

char_value relay_utility(double p_relay_mw, double alpha)
{
	return alpha > 0 ? char_value::finite(-p_relay_mw / alpha) : char_value::unviable();
}

} // namespace

char_value characteristic_value(coalition_context const& ctx,
                                player_set const& s,
                                std::span<double const> alpha,
                                mixed_valuation mode)
{
	check_alpha_size(ctx, alpha);
	if (!s.relays.is_subset_of(ctx.everyone()))
	{
		throw std::out_of_range("coalition references relays outside the context");
	}

	double const p_d = ctx.p_d_mw();
	if (!s.has_source)
	{
		return s.relays.empty() ? char_value::finite(0) : char_value::unviable();
	}
	if (s.relays.empty())
	{
		return char_value::finite(-p_d);
	}

	double paid = 0;
	for (std::size_t i = 0; i < ctx.size(); ++i)
	{
		if (s.relays.contains(i))
		{
			paid += alpha[i] * p_d;
		}
	}

	if (s.relays == ctx.everyone())
	{
		return char_value::finite(p_d - cooptx::required_source_power(ctx, s.relays) - paid);
	}

	if (mode == mixed_valuation::unviable)
	{
		return char_value::unviable();
	}

	char_value v = char_value::finite(-cooptx::required_source_power(ctx, s.relays) - paid);
	for (std::size_t i = 0; i < ctx.size(); ++i)
	{
		if (s.relays.contains(i))
		{
			v = v + relay_utility(ctx.relays()[i].p_relay_mw, alpha[i]);
		}
	}
	return v;
}

char_value excess(std::span<double const> payoffs, player_set const& s, characteristic_fn const& v)
{
	char_value const worth = v(s);
	if (worth.is_unviable())
	{
		return worth;
	}
	double paid = 0;
	if (s.has_source)
	{
		paid += payoffs[0];
	}
	for (std::size_t i = 0; i + 1 < payoffs.size(); ++i)
	{
		if (s.relays.contains(i))
		{
			paid += payoffs[i + 1];
		}
	}
	return worth - paid;
}

char_value max_excess(std::span<double const> payoffs, std::size_t n_relays, characteristic_fn const& v)
{
	if (n_relays > max_shapley_relays)
	{
		throw too_many_relays("coalition enumeration is capped at 20 relays");
	}
	if (payoffs.size() != n_relays + 1)
	{
		throw std::invalid_argument("payoff vector must cover the source and every relay");
	}
	char_value best = char_value::unviable();
	std::uint64_t const count = std::uint64_t{1} << n_relays;
	for (int src = 0; src < 2; ++src)
	{
		for (std::uint64_t m = 0; m < count; ++m)
		{
			player_set const s{src == 1, relay_subset(m)};
			if (!s.has_source && s.relays.empty())
			{
				continue;
			}
			char_value const e = excess(payoffs, s, v);
			if (e > best)
			{
				best = e;
			}
		}
	}
	return best;
}

bool core_condition(coalition_context const& ctx, std::span<double const> alpha, double tol)
{
	check_alpha_size(ctx, alpha);
	if (std::any_of(alpha.begin(), alpha.end(), [](double a) { return !(a >= 0); }))
	{
		return false;
	}
	double const sum = std::accumulate(alpha.begin(), alpha.end(), 0.0);
	return sum <= core_bound(ctx) + tol;
}

allocation utilities(coalition_context const& ctx, std::span<double const> alpha, fairness_kind kind)
{
	check_alpha_size(ctx, alpha);
	allocation out;
	out.alpha.assign(alpha.begin(), alpha.end());
	out.kind = kind;
	out.p_d_mw = ctx.p_d_mw();
	out.p0_mw = cooptx::required_source_power(ctx, ctx.everyone());
	out.u0 = -out.p0_mw - out.alpha_sum() * out.p_d_mw;
	out.u.reserve(alpha.size());
	for (std::size_t i = 0; i < alpha.size(); ++i)
	{
		out.u.push_back(relay_utility(ctx.relays()[i].p_relay_mw, alpha[i]));
	}
	return out;
}

namespace {

/// Scale factor that shrinks a core-bound sum by the backbone margin.
double margin_scale(double bound, double margin)
{
	if (margin < 0)
	{
		throw std::invalid_argument("backbone margin must be non-negative");
	}
	if (margin == 0)
	{
		return 1;
	}
	return bound > margin ? (bound - margin) / bound : 0;
}

} // namespace

allocation alpha_minmax(coalition_context const& ctx, double backbone_margin)
{
	if (ctx.size() == 0)
	{
		throw no_relays("min-max allocation needs at least one relay");
	}
	coalition_context const capped = at_power_cap(ctx);
	double const p_d = capped.p_d_mw();
	double const p0 = cooptx::required_source_power(capped, capped.everyone());
	double const bound = (p_d - p0) / p_d;
	double const share = bound * margin_scale(bound, backbone_margin) / static_cast<double>(capped.size());
	std::vector<double> const alpha(capped.size(), share);
	return utilities(capped, alpha, fairness_kind::minmax);
}

allocation alpha_proportional(coalition_context const& ctx, std::span<double const> relay_powers_mw,
                              double backbone_margin)
{
	if (ctx.size() == 0)
	{
		throw no_relays("proportional allocation needs at least one relay");
	}
	coalition_context const powered = ctx.with_relay_powers(relay_powers_mw);
	double const p_d = powered.p_d_mw();
	double const p0 = cooptx::required_source_power(powered, powered.everyone());
	double const bound = (p_d - p0) / p_d;
	double const scale = margin_scale(bound, backbone_margin);
	double const total = std::accumulate(relay_powers_mw.begin(), relay_powers_mw.end(), 0.0);
	std::vector<double> alpha(powered.size());
	for (std::size_t i = 0; i < alpha.size(); ++i)
	{
		alpha[i] = relay_powers_mw[i] / total * bound * scale;
	}
	return utilities(powered, alpha, fairness_kind::proportional);
}

power_saving_game::power_saving_game(coalition_context const& ctx)
: n_(ctx.size())
{
	if (n_ > max_shapley_relays)
	{
		std::ostringstream oss;
		oss << "power-saving game over " << n_ << " relays exceeds the enumeration cap of "
		    << max_shapley_relays;
		throw too_many_relays(oss.str());
	}
	std::uint64_t const count = std::uint64_t{1} << n_;
	table_.resize(count);
	table_[0] = 0;
	for (std::uint64_t m = 1; m < count; ++m)
	{
		table_[m] = cooptx::power_saving(ctx, relay_subset(m));
	}
}

power_saving_game::power_saving_game(std::vector<double> table)
: n_(0),
  table_(std::move(table))
{
	std::size_t const count = table_.size();
	if (count == 0 || (count & (count - 1)) != 0)
	{
		throw std::invalid_argument("game table size must be a power of two");
	}
	while ((std::size_t{1} << n_) < count)
	{
		++n_;
	}
	if (n_ > max_shapley_relays)
	{
		throw too_many_relays("explicit game exceeds the enumeration cap");
	}
	if (table_[0] != 0)
	{
		throw std::invalid_argument("value of the empty coalition must be zero");
	}
}

std::vector<double> shapley(power_saving_game const& game)
{
	std::size_t const n = game.size();
	std::vector<double> phi(n, 0.0);
	if (n == 0)
	{
		return phi;
	}

	// |S|! (n-1-|S|)! / n! = 1 / (n * C(n-1, |S|))
	std::vector<double> weight(n);
	double binom = 1;
	for (std::size_t s = 0; s < n; ++s)
	{
		weight[s] = 1.0 / (static_cast<double>(n) * binom);
		binom = binom * static_cast<double>(n - 1 - s) / static_cast<double>(s + 1);
	}

	auto const& w = game.table();
	std::uint64_t const count = std::uint64_t{1} << n;
	for (std::size_t i = 0; i < n; ++i)
	{
		std::uint64_t const bit = std::uint64_t{1} << i;
		double acc = 0;
		for (std::uint64_t m = 0; m < count; ++m)
		{
			if (m & bit)
			{
				continue;
			}
			acc += weight[relay_subset(m).size()] * (w[m | bit] - w[m]);
		}
		phi[i] = acc;
	}
	return phi;
}

std::vector<double> marginal_power_savings(coalition_context const& ctx)
{
	return shapley(power_saving_game(ctx));
}

allocation alpha_shapley(coalition_context const& ctx, double backbone_margin)
{
	if (ctx.size() == 0)
	{
		throw no_relays("Shapley allocation needs at least one relay");
	}
	coalition_context const capped = at_power_cap(ctx);
	power_saving_game const game(capped);
	std::vector<double> const savings = shapley(game);
	double const p_d = capped.p_d_mw();
	double const bound = game.value(capped.everyone()) / p_d;
	double const scale = margin_scale(bound, backbone_margin);
	std::vector<double> alpha(savings.size());
	for (std::size_t i = 0; i < alpha.size(); ++i)
	{
		alpha[i] = savings[i] / p_d * scale;
	}
	return utilities(capped, alpha, fairness_kind::shapley);
}

allocation allocate(coalition_context const& ctx, fairness_kind kind, double backbone_margin)
{
	switch (kind)
	{
		case fairness_kind::minmax:
			return alpha_minmax(ctx, backbone_margin);
		case fairness_kind::shapley:
			return alpha_shapley(ctx, backbone_margin);
		case fairness_kind::proportional:
		{
			std::vector<double> p;
			p.reserve(ctx.size());
			for (auto const& r : ctx.relays())
			{
				p.push_back(r.p_relay_mw);
			}
			return alpha_proportional(ctx, p, backbone_margin);
		}
	}
	throw std::invalid_argument("unknown fairness kind");
}

}} // namespace coaltx::coalition
