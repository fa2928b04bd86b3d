/**
 * \file coaltx/channel.hpp
 *
 * \brief Deterministic path-loss channel model and direct-link power budget.
 *
 * All powers are linear milliwatts; dBm only appears at the conversion
 * helpers. Link gains are power gains (|h|^2).
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

#ifndef COALTX_CHANNEL_HPP
#define COALTX_CHANNEL_HPP

#include <compare>

namespace coaltx { namespace channel {

struct position
{
	double x{0}; ///< meters
	double y{0}; ///< meters

	friend bool operator==(position const&, position const&) = default;
};

double distance(position const& a, position const& b);

/// Dimensionless power gain of a link.
struct link_gain
{
	double value{0};

	friend auto operator<=>(link_gain const&, link_gain const&) = default;
};

/// Relative slack applied when comparing a required power against the cap,
/// so that a link sitting exactly on the feasibility radius stays feasible
/// despite rounding in the dBm conversions.
inline constexpr double feasibility_slack = 1e-9;

class channel_model
{
public:
	/// Throws std::invalid_argument unless every parameter is finite and > 0.
	channel_model(double exponent, double noise_mw, double snr_target,
	              double p_max_mw, double reference_gain = 1.0);

	/// Inverse-cubic law, -60 dBm noise, 10 dB SNR target, 10 dBm cap.
	static channel_model defaults();

	/// Build from interface units (dBm / dB).
	static channel_model from_db(double exponent, double noise_dbm, double snr_target_db,
	                             double p_max_dbm, double reference_gain = 1.0);

	double exponent() const noexcept { return exponent_; }
	double noise_mw() const noexcept { return noise_mw_; }
	double snr_target() const noexcept { return snr_target_; }
	double p_max_mw() const noexcept { return p_max_mw_; }
	double reference_gain() const noexcept { return reference_gain_; }

	/// Largest distance at which the direct power stays within the cap.
	double max_range() const;

	/// p <= P_max up to feasibility_slack.
	bool within_cap(double p_mw) const noexcept;

private:
	double exponent_;
	double noise_mw_;
	double snr_target_;
	double p_max_mw_;
	double reference_gain_;
};

/// reference_gain * d^-exponent. Throws coincident_nodes when d == 0.
link_gain path_gain(position const& a, position const& b, channel_model const& model);
link_gain path_gain(double distance_m, channel_model const& model);

double snr_direct(double p_mw, link_gain g, channel_model const& model);

/**
 * Minimum power meeting the SNR target on a direct link, gamma*sigma^2/g.
 * Throws link_infeasible when it exceeds the power cap.
 */
double direct_power(link_gain g, channel_model const& model);

/// Same as direct_power() without the cap check.
double required_direct_power(link_gain g, channel_model const& model) noexcept;

double dbm_to_mw(double dbm) noexcept;

/// Throws non_positive_power when p_mw <= 0.
double mw_to_dbm(double p_mw);

inline double db_to_linear(double db) noexcept { return dbm_to_mw(db); }

}} // namespace coaltx::channel

#endif // COALTX_CHANNEL_HPP
