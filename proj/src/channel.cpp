/**
 * \file src/channel.cpp
 *
 * \brief Path-loss channel model.
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

#include <coaltx/channel.hpp>
#include <coaltx/errors.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace coaltx { namespace channel {

namespace {

void require_positive(double v, char const* name)
{
	if (!std::isfinite(v) || v <= 0)
	{
		std::ostringstream oss;
		oss << "channel parameter '" << name << "' must be finite and positive (got " << v << ")";
		throw std::invalid_argument(oss.str());
	}
}

} // namespace

double distance(position const& a, position const& b)
{
	return std::hypot(a.x - b.x, a.y - b.y);
}

channel_model::channel_model(double exponent, double noise_mw, double snr_target,
                             double p_max_mw, double reference_gain)
: exponent_(exponent),
  noise_mw_(noise_mw),
  snr_target_(snr_target),
  p_max_mw_(p_max_mw),
  reference_gain_(reference_gain)
{
	require_positive(exponent, "exponent");
	require_positive(noise_mw, "noise_mw");
	require_positive(snr_target, "snr_target");
	require_positive(p_max_mw, "p_max_mw");
	require_positive(reference_gain, "reference_gain");
}

channel_model channel_model::defaults()
{
	return from_db(3.0, -60.0, 10.0, 10.0, 1.0);
}

channel_model channel_model::from_db(double exponent, double noise_dbm, double snr_target_db,
                                     double p_max_dbm, double reference_gain)
{
	return channel_model(exponent, dbm_to_mw(noise_dbm), db_to_linear(snr_target_db),
	                     dbm_to_mw(p_max_dbm), reference_gain);
}

double channel_model::max_range() const
{
	return std::pow(p_max_mw_ * reference_gain_ / (snr_target_ * noise_mw_), 1.0 / exponent_);
}

bool channel_model::within_cap(double p_mw) const noexcept
{
	return p_mw <= p_max_mw_ * (1.0 + feasibility_slack);
}

link_gain path_gain(double distance_m, channel_model const& model)
{
	if (!(distance_m > 0))
	{
		throw coincident_nodes("path gain requested for zero distance");
	}
	return link_gain{model.reference_gain() * std::pow(distance_m, -model.exponent())};
}

link_gain path_gain(position const& a, position const& b, channel_model const& model)
{
	return path_gain(distance(a, b), model);
}

double snr_direct(double p_mw, link_gain g, channel_model const& model)
{
	return p_mw * g.value / model.noise_mw();
}

double required_direct_power(link_gain g, channel_model const& model) noexcept
{
	return model.snr_target() * model.noise_mw() / g.value;
}

double direct_power(link_gain g, channel_model const& model)
{
	double const p = required_direct_power(g, model);
	if (!model.within_cap(p))
	{
		std::ostringstream oss;
		oss << "direct link needs " << p << " mW, above the " << model.p_max_mw() << " mW cap";
		throw link_infeasible(oss.str());
	}
	return p;
}

double dbm_to_mw(double dbm) noexcept
{
	return std::pow(10.0, dbm / 10.0);
}

double mw_to_dbm(double p_mw)
{
	if (!(p_mw > 0))
	{
		throw non_positive_power("cannot express a non-positive power in dBm");
	}
	return 10.0 * std::log10(p_mw);
}

}} // namespace coaltx::channel
