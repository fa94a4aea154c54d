#pragma once

#include "ma2scale/fe.hpp"

#include <string>

namespace ma2 {

/// Compiles a closed-form expression in the variables x, y into a callable.
/// Grammar: +, -, *, /, ^ (right associative), parentheses, numeric literals,
/// and the functions exp(a), sqrt(a), abs(a), max(a,b), norm2(a,b).
/// Throws std::invalid_argument with a position message on parse errors.
ScalarFunc parse_expression(const std::string& source);

} // namespace ma2
