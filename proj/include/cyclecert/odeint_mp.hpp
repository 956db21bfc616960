#pragma once

// Lets odeint steppers run on 50-digit binary floats.  odeint walks nested
// `value_type` typedefs to find the scalar type, and boost::multiprecision
// numbers expose a `value_type` that the walk cannot resolve.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/numeric/odeint.hpp>

namespace boost::numeric::odeint::detail {

template <>
struct extract_value_type<boost::multiprecision::cpp_bin_float_50, void> {
    using type = boost::multiprecision::cpp_bin_float_50;
};

}  // namespace boost::numeric::odeint::detail
