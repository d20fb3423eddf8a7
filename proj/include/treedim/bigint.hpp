#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace treedim {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

} // namespace treedim
