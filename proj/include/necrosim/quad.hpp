#pragma once

#include <boost/multiprecision/float128.hpp>

namespace necrosim {

/// IEEE binary128 floating point (113-bit significand).
using quad = boost::multiprecision::float128;

}  // namespace necrosim
