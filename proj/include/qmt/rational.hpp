#ifndef QMT_RATIONAL_HPP
#define QMT_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

#include "qmt/errors.hpp"

namespace qmt {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Renders as "p/q", or just "p" when the denominator is 1.
inline std::string rat_string(const Rat& r) { return r.str(); }

/// Accepts "p", "p/q", and decimal literals like "0.25" (converted exactly).
Rat parse_rat(std::string_view text);

inline Rat rat(long num, long den = 1) { return Rat(num, den); }

}  // namespace qmt

#endif
