/**
 * \file tests/test_cooptx.cpp
 *
 * \brief Amplify-and-forward SNR and source power tests.
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

#include <coaltx/cooptx.hpp>
#include <coaltx/errors.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

using namespace coaltx;
using namespace coaltx::cooptx;

namespace {

channel_model const model = channel_model::defaults();

std::vector<oracle::relay> raw(coalition_context const& ctx, relay_subset s)
{
	std::vector<oracle::relay> out;
	for (std::size_t i = 0; i < ctx.size(); ++i)
	{
		if (s.contains(i))
		{
			auto const& r = ctx.relays()[i];
			out.push_back({r.g_sr.value, r.g_rd.value, r.p_relay_mw});
		}
	}
	return out;
}

/// Random geometry: destination within direct range, relays scattered around.
coalition_context random_context(std::mt19937_64& rng, std::size_t n)
{
	std::uniform_real_distribution<double> dd(5, 100), ang(0, 6.283185307179586), rr(1, 120);
	double const d = dd(rng);
	std::vector<position> relays;
	for (std::size_t i = 0; i < n; ++i)
	{
		double const r = rr(rng), t = ang(rng);
		relays.push_back(position{r * std::cos(t), r * std::sin(t)});
	}
	return coalition_context::from_positions(model, position{0, 0}, position{d, 0}, relays);
}

} // namespace

TEST_CASE("MRC SNR reduces to the direct SNR without relays")
{
	std::vector<position> const relays{{-5, 0}, {0, 30}};
	auto const ctx = coalition_context::from_positions(model, {0, 0}, {80, 0}, relays);
	for (double p : {0.0, 0.3, 1.0, 5.12})
	{
		CHECK(mrc_snr(p, ctx, relay_subset{}) == channel::snr_direct(p, ctx.g_sd(), model));
		CHECK(mrc_snr(p, ctx, ctx.everyone()) ==
		      doctest::Approx(oracle::af_snr(p, ctx.g_sd().value, raw(ctx, ctx.everyone()), model.noise_mw()))
		          .epsilon(1e-14));
	}
	CHECK(mrc_snr(0, ctx, ctx.everyone()) == 0);
}

TEST_CASE("one relay at the direct power overshoots the target")
{
	std::vector<position> const relays{{10, 10}};
	auto const ctx = coalition_context::from_positions(model, {0, 0}, {50, 0}, relays);
	CHECK(mrc_snr(ctx.p_d_mw(), ctx, ctx.everyone()) > model.snr_target());
}

TEST_CASE("MRC SNR grows with source power and with added relays")
{
	std::mt19937_64 rng(3);
	for (int k = 0; k < 50; ++k)
	{
		auto const ctx = random_context(rng, 4);
		double prev = -1;
		for (double p = 0; p <= ctx.p_d_mw(); p += ctx.p_d_mw() / 64)
		{
			double const s = mrc_snr(p, ctx, ctx.everyone());
			CHECK(s > prev);
			prev = s;
		}
		double const p = 0.37 * ctx.p_d_mw();
		for (std::size_t i = 0; i < ctx.size(); ++i)
		{
			relay_subset const without = ctx.everyone().without(i);
			CHECK(mrc_snr(p, ctx, ctx.everyone()) > mrc_snr(p, ctx, without));
		}
	}
}

TEST_CASE("source power without relays is the direct power exactly")
{
	std::vector<position> const relays{{3, 4}};
	auto const ctx = coalition_context::from_positions(model, {0, 0}, {60, 0}, relays);
	CHECK(required_source_power(ctx, relay_subset{}) == ctx.p_d_mw());
	CHECK(power_saving(ctx, relay_subset{}) == 0);
}

TEST_CASE("relay next to the source: bisection against a dense grid search")
{
	// g_sr -> large, g_rd = g_sd (destination 100 m away), relay at the cap.
	double const g_sd = channel::path_gain(100.0, model).value;
	coalition_context const ctx(model, channel::link_gain{g_sd},
	                            {relay_link{channel::link_gain{1e6}, channel::link_gain{g_sd}, model.p_max_mw()}});
	double const step = 1e-6 * ctx.p_d_mw();
	double const grid = oracle::grid_min_power(ctx.p_d_mw(), g_sd, raw(ctx, ctx.everyone()), model.noise_mw(),
	                                           model.snr_target(), step);
	double const p0 = required_source_power(ctx, ctx.everyone());
	CHECK(std::abs(p0 - grid) <= step);
	CHECK(p0 < ctx.p_d_mw());
}

TEST_CASE("single relay: bisection matches the quadratic closed form")
{
	std::mt19937_64 rng(5);
	for (int k = 0; k < 300; ++k)
	{
		auto const ctx = random_context(rng, 1);
		auto const r = raw(ctx, ctx.everyone());
		double const exact = oracle::one_relay_closed_form(ctx.g_sd().value, r[0], model.noise_mw(), model.snr_target());
		CHECK(required_source_power(ctx, ctx.everyone()) == doctest::Approx(exact).epsilon(1e-10));
	}
}

TEST_CASE("frozen high-precision reference values")
{
	// Reference values from an independent 40-digit bisection.
	{
		std::vector<position> const relays{{0, 5}};
		auto const ctx = coalition_context::from_positions(model, {0, 0}, {50, 0}, relays);
		CHECK(ctx.p_d_mw() == doctest::Approx(1.25).epsilon(1e-12));
		CHECK(required_source_power(ctx, ctx.everyone()) == doctest::Approx(0.001447888544962256).epsilon(1e-10));
	}
	{
		std::vector<position> const relays{{-5, 0}};
		auto const ctx = coalition_context::from_positions(model, {0, 0}, {100, 0}, relays);
		CHECK(required_source_power(ctx, ctx.everyone()) == doctest::Approx(1.3692183765270275).epsilon(1e-10));
	}
	{
		std::vector<position> const relays{{10, 10}, {30, -20}};
		auto const ctx = coalition_context::from_positions(model, {0, 0}, {60, 0}, relays);
		CHECK(ctx.p_d_mw() == doctest::Approx(2.16).epsilon(1e-12));
		CHECK(power_saving(ctx, relay_subset::single(0)) == doctest::Approx(2.1275317911399217).epsilon(1e-10));
		CHECK(power_saving(ctx, relay_subset::single(1)) == doctest::Approx(1.7608511998493337).epsilon(1e-10));
		CHECK(power_saving(ctx, ctx.everyone()) == doctest::Approx(2.1298853384504228).epsilon(1e-10));
	}
}

TEST_CASE("source power meets the target and is monotone under inclusion")
{
	std::mt19937_64 rng(17);
	std::size_t violations = 0;
	for (int k = 0; k < 100; ++k)
	{
		auto const ctx = random_context(rng, 5);
		for (std::uint64_t m = 0; m < 32; ++m)
		{
			relay_subset const s(m);
			double const p0 = required_source_power(ctx, s);
			CHECK(p0 > 0);
			CHECK(p0 <= ctx.p_d_mw());
			if (!s.empty())
			{
				CHECK(std::abs(mrc_snr(p0, ctx, s) - model.snr_target()) <= 1e-10 * model.snr_target());
			}
			for (std::size_t i = 0; i < 5; ++i)
			{
				if (!s.contains(i) && required_source_power(ctx, s.with(i)) > p0)
				{
					++violations;
				}
			}
		}
	}
	CHECK(violations == 0);
}

TEST_CASE("power saving is symmetric for identical relays and nonnegative")
{
	std::vector<position> const relays{{0, 10}, {0, -10}};
	auto const ctx = coalition_context::from_positions(model, {0, 0}, {70, 0}, relays);
	CHECK(power_saving(ctx, relay_subset::single(0)) == power_saving(ctx, relay_subset::single(1)));
	CHECK(power_saving(ctx, ctx.everyone()) >= 0);
	CHECK(power_saving(ctx, ctx.everyone()) >= power_saving(ctx, relay_subset::single(0)));
}

TEST_CASE("source power does not depend on relay ordering")
{
	std::mt19937_64 rng(23);
	for (int k = 0; k < 50; ++k)
	{
		auto const ctx = random_context(rng, 6);
		std::vector<relay_link> shuffled = ctx.relays();
		std::shuffle(shuffled.begin(), shuffled.end(), rng);
		coalition_context const other(model, ctx.g_sd(), shuffled);
		CHECK(required_source_power(other, other.everyone()) ==
		      doctest::Approx(required_source_power(ctx, ctx.everyone())).epsilon(1e-12));
	}
}

TEST_CASE("super-additivity of the power-saving game is only a diagnostic")
{
	std::mt19937_64 rng(29);
	std::size_t checked = 0, failures = 0;
	for (int k = 0; k < 40; ++k)
	{
		auto const ctx = random_context(rng, 4);
		for (std::uint64_t a = 1; a < 16; ++a)
		{
			for (std::uint64_t b = 1; b < 16; ++b)
			{
				if (a & b)
				{
					continue;
				}
				++checked;
				double const lhs = power_saving(ctx, relay_subset(a)) + power_saving(ctx, relay_subset(b));
				if (lhs > power_saving(ctx, relay_subset(a | b)) * (1 + 1e-12))
				{
					++failures;
				}
			}
		}
	}
	MESSAGE("super-additivity violations: " << failures << " of " << checked << " disjoint pairs");
	CHECK(checked > 0);
}

TEST_CASE("context validation")
{
	CHECK_THROWS_AS(coalition_context::from_positions(model, {0, 0}, {150, 0}, {}), link_infeasible);
	std::vector<position> const same{{0, 0}};
	CHECK_THROWS_AS(coalition_context::from_positions(model, {0, 0}, {50, 0}, same), coincident_nodes);
	double const g = channel::path_gain(50.0, model).value;
	CHECK_THROWS_AS(coalition_context(model, channel::link_gain{g},
	                                  {relay_link{channel::link_gain{1}, channel::link_gain{1}, 11.0}}),
	                std::invalid_argument);
	CHECK_THROWS_AS(coalition_context(model, channel::link_gain{g},
	                                  {relay_link{channel::link_gain{0}, channel::link_gain{1}, 1.0}}),
	                std::invalid_argument);
	coalition_context const ctx(model, channel::link_gain{g},
	                            {relay_link{channel::link_gain{1e-4}, channel::link_gain{1e-5}, 1.0}});
	CHECK_THROWS_AS(required_source_power(ctx, relay_subset(0b10)), std::out_of_range);
}
