#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace congsub {

/// Exact rational used for volumes, ratios and the constant c of select_r.
using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& q);

}  // namespace congsub
