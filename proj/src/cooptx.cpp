/**
 * \file src/cooptx.cpp
 *
 * \brief Amplify-and-forward MRC SNR and minimum source power.
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

#include <coaltx/cooptx.hpp>
#include <coaltx/errors.hpp>

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace coaltx { namespace cooptx {

std::size_t relay_subset::size() const noexcept
{
	return static_cast<std::size_t>(std::popcount(mask_));
}

namespace {

void validate_relay(relay_link const& r, std::size_t i, channel_model const& model)
{
	if (!(r.g_sr.value > 0) || !(r.g_rd.value > 0))
	{
		std::ostringstream oss;
		oss << "relay " << i << " has a non-positive link gain";
		throw std::invalid_argument(oss.str());
	}
	if (!(r.p_relay_mw > 0) || !model.within_cap(r.p_relay_mw))
	{
		std::ostringstream oss;
		oss << "relay " << i << " power " << r.p_relay_mw << " mW outside (0, " << model.p_max_mw() << "]";
		throw std::invalid_argument(oss.str());
	}
}

} // namespace

coalition_context::coalition_context(channel_model model, link_gain g_sd, std::vector<relay_link> relays)
: model_(std::move(model)),
  g_sd_(g_sd),
  relays_(std::move(relays)),
  p_d_mw_(0)
{
	if (!(g_sd_.value > 0))
	{
		throw std::invalid_argument("source-destination gain must be positive");
	}
	if (relays_.size() > relay_subset::capacity)
	{
		throw too_many_relays("a coalition context holds at most 64 relays");
	}
	for (std::size_t i = 0; i < relays_.size(); ++i)
	{
		validate_relay(relays_[i], i, model_);
	}
	p_d_mw_ = channel::direct_power(g_sd_, model_);
}

coalition_context coalition_context::from_positions(channel_model const& model,
                                                    position const& source,
                                                    position const& destination,
                                                    std::span<position const> relays,
                                                    std::optional<std::span<double const>> relay_powers_mw)
{
	if (relay_powers_mw && relay_powers_mw->size() != relays.size())
	{
		throw std::invalid_argument("relay power list does not match the relay list");
	}
	std::vector<relay_link> links;
	links.reserve(relays.size());
	for (std::size_t i = 0; i < relays.size(); ++i)
	{
		links.push_back(relay_link{channel::path_gain(source, relays[i], model),
		                           channel::path_gain(relays[i], destination, model),
		                           relay_powers_mw ? (*relay_powers_mw)[i] : model.p_max_mw()});
	}
	return coalition_context(model, channel::path_gain(source, destination, model), std::move(links));
}

coalition_context coalition_context::with_relay_powers(std::span<double const> p_relay_mw) const
{
	if (p_relay_mw.size() != relays_.size())
	{
		throw std::invalid_argument("relay power list does not match the relay list");
	}
	std::vector<relay_link> links = relays_;
	for (std::size_t i = 0; i < links.size(); ++i)
	{
		links[i].p_relay_mw = p_relay_mw[i];
	}
	return coalition_context(model_, g_sd_, std::move(links));
}

double relay_branch_snr(double p0_mw, relay_link const& r, channel_model const& model) noexcept
{
	double const sigma2 = model.noise_mw();
	double const num = p0_mw * r.p_relay_mw * r.g_sr.value * r.g_rd.value;
	double const den = sigma2 * (p0_mw * r.g_sr.value + r.p_relay_mw * r.g_rd.value + sigma2);
	return num / den;
}

double mrc_snr(double p0_mw, coalition_context const& ctx, relay_subset subset)
{
	// Summed in index order; floating-point addition of non-negative terms is
	// monotone, so a superset never yields a smaller SNR.
	double snr = channel::snr_direct(p0_mw, ctx.g_sd(), ctx.model());
	for (std::size_t i = 0; i < ctx.size(); ++i)
	{
		if (subset.contains(i))
		{
			snr += relay_branch_snr(p0_mw, ctx.relays()[i], ctx.model());
		}
	}
	return snr;
}

double required_source_power(coalition_context const& ctx, relay_subset subset)
{
	if (!subset.is_subset_of(ctx.everyone()))
	{
		throw std::out_of_range("relay subset references relays outside the context");
	}

	double const p_d = ctx.p_d_mw();
	if (subset.empty())
	{
		return p_d;
	}

	double const target = ctx.model().snr_target();
	double lo = 0;
	double hi = p_d;
	for (int it = 0; it < bisection_max_iter && hi - lo > bisection_rel_tol * hi; ++it)
	{
		double const mid = lo + 0.5 * (hi - lo);
		if (mid <= lo || mid >= hi)
		{
			break;
		}
		if (mrc_snr(mid, ctx, subset) >= target)
		{
			hi = mid;
		}
		else
		{
			lo = mid;
		}
	}
	return hi;
}

double power_saving(coalition_context const& ctx, relay_subset subset)
{
	if (subset.empty())
	{
		return 0;
	}
	return ctx.p_d_mw() - required_source_power(ctx, subset);
}

}} // namespace coaltx::cooptx
