/**
 * \file coaltx/cooptx.hpp
 *
 * \brief Amplify-and-forward cooperative transmission with MRC at the
 *  destination.
 *
 * A coalition_context fixes one source/destination pair and an ordered list
 * of candidate relays. Relay subsets are bitmasks over that list (bit i is
 * relay i, zero-based).
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

#ifndef COALTX_COOPTX_HPP
#define COALTX_COOPTX_HPP

#include <coaltx/channel.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace coaltx { namespace cooptx {

using channel::channel_model;
using channel::link_gain;
using channel::position;

/// Set of relay indices. Bit i selects relay i.
class relay_subset
{
public:
	static constexpr std::size_t capacity = 64;

	constexpr relay_subset() noexcept = default;
	constexpr explicit relay_subset(std::uint64_t mask) noexcept : mask_(mask) {}

	static constexpr relay_subset all(std::size_t n) noexcept
	{
		return relay_subset(n >= capacity ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
	}

	static constexpr relay_subset single(std::size_t i) noexcept
	{
		return relay_subset(std::uint64_t{1} << i);
	}

	constexpr bool contains(std::size_t i) const noexcept { return (mask_ >> i) & 1u; }
	constexpr bool empty() const noexcept { return mask_ == 0; }
	constexpr std::uint64_t mask() const noexcept { return mask_; }
	std::size_t size() const noexcept;

	constexpr relay_subset with(std::size_t i) const noexcept { return relay_subset(mask_ | (std::uint64_t{1} << i)); }
	constexpr relay_subset without(std::size_t i) const noexcept { return relay_subset(mask_ & ~(std::uint64_t{1} << i)); }
	constexpr bool is_subset_of(relay_subset other) const noexcept { return (mask_ & ~other.mask_) == 0; }

	friend constexpr bool operator==(relay_subset, relay_subset) = default;

private:
	std::uint64_t mask_{0};
};

struct relay_link
{
	link_gain g_sr;      ///< source -> relay
	link_gain g_rd;      ///< relay -> destination
	double p_relay_mw{0};
};

/**
 * One source, one destination and N candidate relays.
 *
 * Construction validates the relays and caches the direct power P_d; it
 * throws link_infeasible when the direct link cannot meet the SNR target
 * within the power cap.
 */
class coalition_context
{
public:
	coalition_context(channel_model model, link_gain g_sd, std::vector<relay_link> relays);

	/// Gains from geometry. Relays transmit at the cap unless powers are given.
	static coalition_context from_positions(channel_model const& model,
	                                        position const& source,
	                                        position const& destination,
	                                        std::span<position const> relays,
	                                        std::optional<std::span<double const>> relay_powers_mw = std::nullopt);

	channel_model const& model() const noexcept { return model_; }
	link_gain g_sd() const noexcept { return g_sd_; }
	std::vector<relay_link> const& relays() const noexcept { return relays_; }
	std::size_t size() const noexcept { return relays_.size(); }
	double p_d_mw() const noexcept { return p_d_mw_; }
	relay_subset everyone() const noexcept { return relay_subset::all(relays_.size()); }

	/// Copy of this context with every relay transmitting at p_relay_mw[i].
	coalition_context with_relay_powers(std::span<double const> p_relay_mw) const;

private:
	channel_model model_;
	link_gain g_sd_;
	std::vector<relay_link> relays_;
	double p_d_mw_;
};

/// SNR contributed by one AF relay branch at source power p0_mw.
double relay_branch_snr(double p0_mw, relay_link const& r, channel_model const& model) noexcept;

/// Direct branch plus the AF branches of the relays in \p subset.
double mrc_snr(double p0_mw, coalition_context const& ctx, relay_subset subset);

inline constexpr double bisection_rel_tol = 1e-12;
inline constexpr int bisection_max_iter = 200;

/**
 * Smallest source power in (0, P_d] at which the MRC output meets the SNR
 * target, by bisection on [0, P_d]. P_0(empty) is P_d exactly.
 *
 * The returned value is the upper end of the final bracket, so the target
 * is always met, and the result is monotone under subset inclusion.
 */
double required_source_power(coalition_context const& ctx, relay_subset subset);

/// w(S) = P_d - P_0(S); w(empty) = 0.
double power_saving(coalition_context const& ctx, relay_subset subset);

}} // namespace coaltx::cooptx

#endif // COALTX_COOPTX_HPP
