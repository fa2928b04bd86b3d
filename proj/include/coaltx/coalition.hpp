/**
 * \file coaltx/coalition.hpp
 *
 * \brief Coalition game between one backbone source (player 0) and N
 *  boundary relays (players 1..N): characteristic values, excess, core
 *  condition, min-max (nucleolus) and Shapley forwarding ratios.
 *
 * Relay i of a cooptx::coalition_context is player i+1 here. Forwarding
 * ratios alpha[i] are indexed by relay.
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

#ifndef COALTX_COALITION_HPP
#define COALTX_COALITION_HPP

#include <coaltx/cooptx.hpp>

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace coaltx { namespace coalition {

using cooptx::coalition_context;
using cooptx::relay_subset;

/**
 * Extended real used for characteristic values and utilities: either a
 * finite number or "unviable" (minus infinity). Unviable never enters
 * floating-point arithmetic; any sum involving it is unviable.
 */
class char_value
{
public:
	static constexpr char_value finite(double v) noexcept { return char_value(true, v); }
	static constexpr char_value unviable() noexcept { return char_value(false, 0); }

	constexpr bool is_finite() const noexcept { return finite_; }
	constexpr bool is_unviable() const noexcept { return !finite_; }

	/// Throws std::logic_error for unviable values.
	double value() const;

	friend constexpr char_value operator+(char_value a, char_value b) noexcept
	{
		return (a.finite_ && b.finite_) ? finite(a.value_ + b.value_) : unviable();
	}

	friend constexpr char_value operator-(char_value a, double b) noexcept
	{
		return a.finite_ ? finite(a.value_ - b) : unviable();
	}

	friend constexpr bool operator==(char_value a, char_value b) noexcept
	{
		return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
	}

	friend constexpr std::partial_ordering operator<=>(char_value a, char_value b) noexcept
	{
		if (!a.finite_ || !b.finite_)
		{
			return a.finite_ <=> b.finite_;
		}
		return a.value_ <=> b.value_;
	}

private:
	constexpr char_value(bool f, double v) noexcept : finite_(f), value_(v) {}

	bool finite_;
	double value_;
};

/// A coalition over {0..N}: the source flag plus a relay subset.
struct player_set
{
	bool has_source{false};
	relay_subset relays{};

	static player_set source_only() noexcept { return {true, {}}; }
	static player_set grand(std::size_t n) noexcept { return {true, relay_subset::all(n)}; }

	friend bool operator==(player_set const&, player_set const&) = default;
};

enum class fairness_kind { minmax, shapley, proportional };

std::string_view to_string(fairness_kind k) noexcept;

/// Parses "minmax" / "shapley" / "proportional"; throws std::invalid_argument.
fairness_kind parse_fairness(std::string_view s);

/// How coalitions holding the source and a strict, nonempty relay subset are valued.
enum class mixed_valuation
{
	/// Minus infinity, as the min-max argument treats every non-grand coalition.
	unviable,
	/// Non-normative sensitivity mode: the payoffs the members would collect
	/// if they formed alone, -P_0(R) - sum_R alpha_i P_d + sum_R U_i.
	diagnostic
};

/**
 * Forwarding ratios and the resulting utilities.
 *
 * u0 and u are in negative milliwatts. A relay with alpha == 0 relays
 * without reward and its utility is unviable.
 */
struct allocation
{
	std::vector<double> alpha;
	double p_d_mw{0};
	double p0_mw{0};     ///< source power with every relay active
	double u0{0};
	std::vector<char_value> u;
	fairness_kind kind{fairness_kind::minmax};

	double alpha_sum() const noexcept;
};

/// Copy of \p ctx with every relay at the power cap.
coalition_context at_power_cap(coalition_context const& ctx);

/// (P_d - P_0(N)) / P_d with relays at the power cap.
double core_bound(coalition_context const& ctx);

char_value characteristic_value(coalition_context const& ctx,
                                player_set const& s,
                                std::span<double const> alpha,
                                mixed_valuation mode = mixed_valuation::unviable);

using characteristic_fn = std::function<char_value(player_set const&)>;

/// v(S) - sum_{j in S} U_j. \p payoffs is indexed over players {0..N}.
char_value excess(std::span<double const> payoffs, player_set const& s, characteristic_fn const& v);

/// Largest excess over every coalition of {0..N}, N <= 20.
char_value max_excess(std::span<double const> payoffs, std::size_t n_relays, characteristic_fn const& v);

inline constexpr double core_tolerance = 1e-9;

/// alpha_i >= 0 and sum alpha_i <= core_bound(ctx) + tol.
bool core_condition(coalition_context const& ctx, std::span<double const> alpha, double tol = core_tolerance);

/// Utilities for given ratios, evaluated with the context's relay powers.
allocation utilities(coalition_context const& ctx, std::span<double const> alpha,
                     fairness_kind kind = fairness_kind::minmax);

/**
 * Equal-share min-max ratios (P_d - P_0(N)) / (N P_d) with relays at the cap,
 * which equalises every relay utility.
 *
 * \p backbone_margin shrinks the sum of ratios below the core bound so the
 * backbone keeps a strictly positive saving. Throws no_relays when N == 0.
 */
allocation alpha_minmax(coalition_context const& ctx, double backbone_margin = 0);

/// Ratios proportional to the given relay powers, P_0 evaluated at those powers.
allocation alpha_proportional(coalition_context const& ctx, std::span<double const> relay_powers_mw,
                              double backbone_margin = 0);

inline constexpr std::size_t max_shapley_relays = 20;

/**
 * Power-saving game w(S) = P_d - P_0(S) over the relays, memoized over all
 * 2^N subsets. Building it costs 2^N bisection solves, each O(N) per
 * iteration; N is capped at max_shapley_relays.
 */
class power_saving_game
{
public:
	explicit power_saving_game(coalition_context const& ctx);

	/// Game from an explicit table indexed by subset mask (table[0] must be 0).
	explicit power_saving_game(std::vector<double> table);

	std::size_t size() const noexcept { return n_; }
	double value(relay_subset s) const { return table_.at(s.mask()); }
	std::vector<double> const& table() const noexcept { return table_; }

private:
	std::size_t n_;
	std::vector<double> table_;
};

/// Exact Shapley values by subset enumeration, one per relay.
std::vector<double> shapley(power_saving_game const& game);

/// P_i^s: each relay's Shapley share of the backbone's power saving.
std::vector<double> marginal_power_savings(coalition_context const& ctx);

/// alpha_i = P_i^s / P_d with relays at the cap.
allocation alpha_shapley(coalition_context const& ctx, double backbone_margin = 0);

/// Dispatch on fairness kind; proportional uses the context's relay powers.
allocation allocate(coalition_context const& ctx, fairness_kind kind, double backbone_margin = 0);

}} // namespace coaltx::coalition

#endif // COALTX_COALITION_HPP
