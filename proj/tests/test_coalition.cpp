/**
 * \file tests/test_coalition.cpp
 *
 * \brief Coalition-game solver tests.
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

#include "oracles.hpp"

#include <coaltx/coalition.hpp>
#include <coaltx/errors.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

using namespace coaltx;
using namespace coaltx::coalition;
using cooptx::coalition_context;
using cooptx::relay_subset;
using channel::position;

namespace {

channel::channel_model const model = channel::channel_model::defaults();

coalition_context make(position dest, std::vector<position> const& relays,
                       channel::channel_model const& m = model)
{
	return coalition_context::from_positions(m, {0, 0}, dest, relays);
}

coalition_context random_context(std::mt19937_64& rng, std::size_t n, channel::channel_model const& m = model)
{
	std::uniform_real_distribution<double> dd(5, 100), ang(0, 6.283185307179586), rr(1, 120);
	double const d = dd(rng);
	std::vector<position> relays;
	for (std::size_t i = 0; i < n; ++i)
	{
		double const r = rr(rng), t = ang(rng);
		relays.push_back(position{r * std::cos(t), r * std::sin(t)});
	}
	return make({d, 0}, relays, m);
}

double rel_err(double a, double b)
{
	return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

} // namespace

TEST_CASE("char_value ordering and arithmetic")
{
	auto const u = char_value::unviable();
	auto const f = char_value::finite(-1e300);
	CHECK(u < f);
	CHECK(u < char_value::finite(0));
	CHECK((u + f).is_unviable());
	CHECK((f + char_value::finite(1)).value() == doctest::Approx(-1e300));
	CHECK((u - 3.0).is_unviable());
	CHECK(u == char_value::unviable());
	CHECK_THROWS_AS(u.value(), std::logic_error);
}

TEST_CASE("characteristic values")
{
	auto const ctx = make({60, 0}, {{10, 10}, {30, -20}});
	std::vector<double> const alpha{0.2, 0.1};
	double const p_d = ctx.p_d_mw();

	CHECK(characteristic_value(ctx, player_set{}, alpha) == char_value::finite(0));
	CHECK(characteristic_value(ctx, {false, relay_subset::single(0)}, alpha).is_unviable());
	CHECK(characteristic_value(ctx, {false, ctx.everyone()}, alpha).is_unviable());
	CHECK(characteristic_value(ctx, player_set::source_only(), alpha) == char_value::finite(-p_d));
	CHECK(characteristic_value(ctx, {true, relay_subset::single(1)}, alpha).is_unviable());

	double const p0 = cooptx::required_source_power(ctx, ctx.everyone());
	auto const grand = characteristic_value(ctx, player_set::grand(2), alpha);
	CHECK(grand.value() == doctest::Approx(p_d - p0 - 0.3 * p_d).epsilon(1e-14));

	// Non-normative diagnostic valuation of {0, 1}
	auto const diag = characteristic_value(ctx, {true, relay_subset::single(1)}, alpha, mixed_valuation::diagnostic);
	double const p0_1 = cooptx::required_source_power(ctx, relay_subset::single(1));
	CHECK(diag.value() == doctest::Approx(-p0_1 - 0.1 * p_d - model.p_max_mw() / 0.1).epsilon(1e-14));
	std::vector<double> const zero{0.2, 0.0};
	CHECK(characteristic_value(ctx, {true, relay_subset::single(1)}, zero, mixed_valuation::diagnostic).is_unviable());
}

TEST_CASE("excess")
{
	auto const ctx = make({60, 0}, {{10, 10}, {30, -20}});
	auto const alloc = alpha_minmax(ctx);
	characteristic_fn const v = [&](player_set const& s) { return characteristic_value(ctx, s, alloc.alpha); };

	std::vector<double> const any{-1, -2, -3};
	CHECK(excess(any, {false, relay_subset::single(0)}, v).is_unviable());

	// Group-rational payoff in the core: the backbone is indifferent and the
	// relays split the grand value.
	double const grand = v(player_set::grand(2)).value();
	std::vector<double> const core{-ctx.p_d_mw(), (grand + ctx.p_d_mw()) / 2, (grand + ctx.p_d_mw()) / 2};
	CHECK(excess(core, player_set::grand(2), v).value() == doctest::Approx(0).epsilon(1e-12));
	auto const worst = max_excess(core, 2, v);
	CHECK(worst.is_finite());
	CHECK(worst.value() <= 1e-12);

	// Giving the backbone less than standing alone is upset by {0}.
	std::vector<double> const bad{-ctx.p_d_mw() - 1, core[1] + 0.5, core[2] + 0.5};
	CHECK(max_excess(bad, 2, v).value() == doctest::Approx(1.0));
}

TEST_CASE("core condition")
{
	auto const ctx = make({60, 0}, {{10, 10}, {30, -20}});
	double const bound = core_bound(ctx);
	std::vector<double> const zero{0, 0};
	CHECK(core_condition(ctx, zero));
	std::vector<double> const edge{bound / 4, 3 * bound / 4};
	CHECK(core_condition(ctx, edge));
	std::vector<double> const over{bound / 2 + 1e-3, bound / 2};
	CHECK_FALSE(core_condition(ctx, over));
	std::vector<double> const negative{-0.01, 0.0};
	CHECK_FALSE(core_condition(ctx, negative));
}

TEST_CASE("min-max ratios")
{
	SUBCASE("one relay, frozen reference")
	{
		// P_0 from an independent high-precision bisection; alpha = (P_d - P_0) / P_d.
		auto const alloc = alpha_minmax(make({50, 0}, {{0, 5}}));
		CHECK(alloc.alpha[0] == doctest::Approx(0.9988416891640302).epsilon(1e-10));
		CHECK(alloc.u[0].value() == doctest::Approx(-model.p_max_mw() / alloc.alpha[0]));
	}
	SUBCASE("identical relays share equally")
	{
		auto const alloc = alpha_minmax(make({80, 0}, {{0, 20}, {0, -20}}));
		CHECK(alloc.alpha[0] == alloc.alpha[1]);
	}
	SUBCASE("useless relays get nothing")
	{
		auto const alloc = alpha_minmax(make({80, 0}, {{-1e7, 0}, {-2e7, 0}}));
		CHECK(alloc.alpha[0] < 1e-12);
		CHECK(alloc.alpha[1] < 1e-12);
	}
	SUBCASE("no relays")
	{
		CHECK_THROWS_AS(alpha_minmax(make({80, 0}, {})), no_relays);
	}
	SUBCASE("equal utilities and an indifferent backbone")
	{
		auto const ctx = make({90, 0}, {{-5, 5}, {20, 40}, {-60, -10}});
		auto const alloc = alpha_minmax(ctx);
		for (auto const& u : alloc.u)
		{
			CHECK(rel_err(u.value(), alloc.u[0].value()) <= 1e-9);
		}
		CHECK(std::abs(alloc.u0 + ctx.p_d_mw()) <= 1e-9 * ctx.p_d_mw());
		CHECK(core_condition(ctx, alloc.alpha));
	}
	SUBCASE("backbone margin keeps a strict saving")
	{
		auto const ctx = make({90, 0}, {{-5, 5}, {20, 40}});
		auto const alloc = alpha_minmax(ctx, 0.01);
		CHECK(alloc.alpha_sum() == doctest::Approx(core_bound(ctx) - 0.01).epsilon(1e-12));
		CHECK(alloc.u0 > -ctx.p_d_mw());
	}
}

TEST_CASE("proportional ratios")
{
	auto const ctx = make({80, 0}, {{0, 20}, {0, -20}});
	std::vector<double> const equal{model.p_max_mw(), model.p_max_mw()};
	auto const prop = alpha_proportional(ctx, equal);
	auto const mm = alpha_minmax(ctx);
	CHECK(prop.alpha == mm.alpha);

	std::vector<double> const skewed{8.0, 4.0};
	auto const skew = alpha_proportional(ctx, skewed);
	CHECK(skew.alpha[0] == doctest::Approx(2 * skew.alpha[1]).epsilon(1e-14));
	auto const powered = ctx.with_relay_powers(skewed);
	CHECK(skew.alpha_sum() ==
	      doctest::Approx((powered.p_d_mw() - cooptx::required_source_power(powered, powered.everyone())) /
	                      powered.p_d_mw())
	          .epsilon(1e-12));
	// Same utility for both relays: -P_i / alpha_i.
	CHECK(skew.u[0].value() == doctest::Approx(skew.u[1].value()).epsilon(1e-12));

	auto const single = make({80, 0}, {{0, 20}});
	std::vector<double> const one{5.0};
	CHECK(alpha_proportional(single, one).alpha[0] ==
	      doctest::Approx((single.p_d_mw() - cooptx::required_source_power(single.with_relay_powers(one), single.everyone())) /
	                      single.p_d_mw()));
	CHECK_THROWS_AS(alpha_proportional(make({80, 0}, {}), std::vector<double>{}), no_relays);
}

TEST_CASE("Shapley values")
{
	SUBCASE("single player gets the whole saving")
	{
		auto const ctx = make({70, 0}, {{5, 5}});
		auto const phi = marginal_power_savings(ctx);
		CHECK(phi[0] == doctest::Approx(cooptx::power_saving(ctx, ctx.everyone())).epsilon(1e-15));
	}
	SUBCASE("symmetric players split evenly")
	{
		auto const ctx = make({70, 0}, {{10, 15}, {10, -15}});
		auto const phi = marginal_power_savings(ctx);
		CHECK(phi[0] == doctest::Approx(phi[1]).epsilon(1e-14));
		CHECK(phi[0] == doctest::Approx(cooptx::power_saving(ctx, ctx.everyone()) / 2).epsilon(1e-12));
	}
	SUBCASE("dummy player gets zero")
	{
		// Relay millions of meters away: its branch vanishes below the rounding of the direct SNR.
		auto const ctx = make({70, 0}, {{10, 15}, {-1e8, 0}, {20, -5}});
		auto const phi = marginal_power_savings(ctx);
		CHECK(phi[1] == 0);
		CHECK(alpha_shapley(ctx).alpha[1] == 0);

		power_saving_game const g(std::vector<double>{0, 1, 0, 1, 2, 3, 2, 3});
		auto const ph = shapley(g);
		CHECK(ph[1] == 0);
		CHECK(ph[0] + ph[2] == doctest::Approx(3));
	}
	SUBCASE("frozen two-relay reference")
	{
		// Independent high-precision evaluation of both join orders.
		auto const alloc = alpha_shapley(make({60, 0}, {{10, 10}, {30, -20}}));
		CHECK(alloc.alpha[0] == doctest::Approx(0.57790878003264138).epsilon(1e-9));
		CHECK(alloc.alpha[1] == doctest::Approx(0.40814924702773955).epsilon(1e-9));
	}
	SUBCASE("enumeration cap")
	{
		std::vector<position> many(21, position{3, 3});
		CHECK_THROWS_AS(power_saving_game(make({50, 0}, many)), too_many_relays);
		CHECK_THROWS_AS(power_saving_game(std::vector<double>{1, 2}), std::invalid_argument);
		CHECK_THROWS_AS(power_saving_game(std::vector<double>{0, 1, 2}), std::invalid_argument);
	}
}

TEST_CASE("Shapley ratios")
{
	SUBCASE("one relay coincides with min-max")
	{
		auto const ctx = make({70, 0}, {{-8, 3}});
		CHECK(alpha_shapley(ctx).alpha[0] == doctest::Approx(alpha_minmax(ctx).alpha[0]).epsilon(1e-14));
		CHECK(alpha_shapley(ctx).alpha[0] ==
		      doctest::Approx((ctx.p_d_mw() - cooptx::required_source_power(ctx, ctx.everyone())) / ctx.p_d_mw()));
	}
	SUBCASE("the more helpful relay earns more")
	{
		auto const alloc = alpha_shapley(make({-50, 0}, {{20, 0}, {10, 0}}));
		CHECK(alloc.alpha[1] > alloc.alpha[0]);
	}
	SUBCASE("co-located relays earn the same")
	{
		auto const alloc = alpha_shapley(make({-50, 0}, {{20, 0}, {20, 0}}));
		CHECK(alloc.alpha[0] == doctest::Approx(alloc.alpha[1]).epsilon(1e-12));
	}
	SUBCASE("min-max is equal, Shapley is not, for asymmetric relays")
	{
		auto const ctx = make({-50, 0}, {{20, 0}, {60, 0}});
		auto const mm = alpha_minmax(ctx);
		auto const sh = alpha_shapley(ctx);
		CHECK(mm.alpha[0] == mm.alpha[1]);
		CHECK(sh.alpha[0] > sh.alpha[1]);
		CHECK(sh.alpha_sum() == doctest::Approx(mm.alpha_sum()).epsilon(1e-9));
	}
}

TEST_CASE("utilities")
{
	auto const ctx = make({90, 0}, {{-5, 5}, {20, 40}});
	double const bound = core_bound(ctx);
	std::vector<double> const edge{bound * 0.3, bound * 0.7};
	auto const a = utilities(ctx, edge);
	CHECK(a.u0 == doctest::Approx(-ctx.p_d_mw()).epsilon(1e-12));
	std::vector<double> const zero{0.0, bound};
	auto const z = utilities(ctx, zero);
	CHECK(z.u[0].is_unviable());
	CHECK(z.u[1].value() == doctest::Approx(-model.p_max_mw() / bound));
	CHECK_THROWS_AS(utilities(ctx, std::vector<double>{0.1}), std::invalid_argument);
}

TEST_CASE("efficiency over random geometries")
{
	std::mt19937_64 rng(31);
	for (std::size_t n = 1; n <= 8; ++n)
	{
		for (int k = 0; k < 5; ++k)
		{
			auto const ctx = random_context(rng, n);
			auto const phi = marginal_power_savings(ctx);
			double const sum = std::accumulate(phi.begin(), phi.end(), 0.0);
			CHECK(std::abs(sum - cooptx::power_saving(ctx, ctx.everyone())) <= 1e-9 * ctx.p_d_mw());
		}
	}
}

TEST_CASE("subset enumeration agrees with averaging over join orders")
{
	std::mt19937_64 rng(37);
	for (std::size_t n = 1; n <= 6; ++n)
	{
		auto const ctx = random_context(rng, n);
		power_saving_game const game(ctx);
		auto const fast = shapley(game);
		// Oracle evaluates w through the memo table only as a value source; the
		// aggregation is independent.
		auto const slow = oracle::permutation_shapley(n, [&](std::uint64_t m) { return game.value(relay_subset(m)); });
		for (std::size_t i = 0; i < n; ++i)
		{
			CHECK(std::abs(fast[i] - slow[i]) <= 1e-9 * std::max(std::abs(slow[i]), 1e-12));
		}
	}
}

TEST_CASE("relabeling relays permutes every allocation")
{
	std::mt19937_64 rng(41);
	for (int k = 0; k < 20; ++k)
	{
		auto const ctx = random_context(rng, 5);
		std::vector<std::size_t> perm(5);
		std::iota(perm.begin(), perm.end(), 0);
		std::shuffle(perm.begin(), perm.end(), rng);
		std::vector<cooptx::relay_link> shuffled;
		for (auto p : perm)
		{
			shuffled.push_back(ctx.relays()[p]);
		}
		coalition_context const other(model, ctx.g_sd(), shuffled);
		auto const a = alpha_shapley(ctx), b = alpha_shapley(other);
		auto const ma = alpha_minmax(ctx), mb = alpha_minmax(other);
		for (std::size_t i = 0; i < 5; ++i)
		{
			CHECK(b.alpha[i] == doctest::Approx(a.alpha[perm[i]]).epsilon(1e-9));
			CHECK(mb.alpha[i] == doctest::Approx(ma.alpha[perm[i]]).epsilon(1e-9));
			CHECK(b.u[i].value() == doctest::Approx(a.u[perm[i]].value()).epsilon(1e-9));
		}
	}
}

TEST_CASE("both fairness rules land on the core bound")
{
	std::mt19937_64 rng(43);
	for (int k = 0; k < 40; ++k)
	{
		auto const ctx = random_context(rng, 1 + k % 6);
		double const bound = core_bound(ctx);
		for (auto const& alloc : {alpha_minmax(ctx), alpha_shapley(ctx)})
		{
			CHECK(core_condition(ctx, alloc.alpha));
			CHECK(std::abs(alloc.alpha_sum() - bound) <= 1e-9);
			CHECK(std::abs(alloc.u0 + ctx.p_d_mw()) <= 1e-9 * ctx.p_d_mw());
		}
	}
}

TEST_CASE("Shapley ratios keep the order of the marginal savings")
{
	std::mt19937_64 rng(47);
	for (int k = 0; k < 30; ++k)
	{
		auto const ctx = random_context(rng, 5);
		auto const phi = marginal_power_savings(ctx);
		auto const alloc = alpha_shapley(ctx);
		for (std::size_t i = 0; i < 5; ++i)
		{
			for (std::size_t j = 0; j < 5; ++j)
			{
				if (phi[i] < phi[j])
				{
					CHECK(alloc.alpha[i] <= alloc.alpha[j]);
				}
			}
		}
	}
}

TEST_CASE("ratios are invariant to a common power scale")
{
	std::mt19937_64 rng(53);
	for (int k = 0; k < 20; ++k)
	{
		std::mt19937_64 fork = rng;
		auto const base = random_context(rng, 3);
		// Scaling noise and cap by c scales P_d, P_0(S) and P_i by c.
		channel::channel_model const scaled(3.0, model.noise_mw() * 7.5, model.snr_target(), model.p_max_mw() * 7.5);
		auto const other = random_context(fork, 3, scaled);
		CHECK(other.p_d_mw() == doctest::Approx(7.5 * base.p_d_mw()).epsilon(1e-12));
		auto const a = alpha_shapley(base), b = alpha_shapley(other);
		auto const ma = alpha_minmax(base), mb = alpha_minmax(other);
		for (std::size_t i = 0; i < 3; ++i)
		{
			CHECK(b.alpha[i] == doctest::Approx(a.alpha[i]).epsilon(1e-9));
			CHECK(mb.alpha[i] == doctest::Approx(ma.alpha[i]).epsilon(1e-9));
		}
	}
}

TEST_CASE("fairness parsing")
{
	CHECK(parse_fairness("minmax") == fairness_kind::minmax);
	CHECK(parse_fairness("shapley") == fairness_kind::shapley);
	CHECK(parse_fairness("proportional") == fairness_kind::proportional);
	CHECK_THROWS_AS(parse_fairness("nash"), std::invalid_argument);
	CHECK(to_string(fairness_kind::shapley) == "shapley");
}
