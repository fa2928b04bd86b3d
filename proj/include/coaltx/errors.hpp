/**
 * \file coaltx/errors.hpp
 *
 * \brief Exception types shared by the coaltx modules.
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

#ifndef COALTX_ERRORS_HPP
#define COALTX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace coaltx {

/// Two endpoints of a link share the same position.
class coincident_nodes : public std::invalid_argument
{
public:
	using std::invalid_argument::invalid_argument;
};

/// The power needed to meet the SNR target exceeds the transmit power cap.
class link_infeasible : public std::domain_error
{
public:
	using std::domain_error::domain_error;
};

class non_positive_power : public std::invalid_argument
{
public:
	using std::invalid_argument::invalid_argument;
};

class no_relays : public std::invalid_argument
{
public:
	using std::invalid_argument::invalid_argument;
};

/// Exact Shapley enumeration is capped at max_shapley_relays players.
class too_many_relays : public std::length_error
{
public:
	using std::length_error::length_error;
};

class bad_discount : public std::invalid_argument
{
public:
	using std::invalid_argument::invalid_argument;
};

class no_candidates : public std::invalid_argument
{
public:
	using std::invalid_argument::invalid_argument;
};

/// Invalid scenario or configuration input (maps to CLI exit code 2).
class config_error : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

} // namespace coaltx

#endif // COALTX_ERRORS_HPP
