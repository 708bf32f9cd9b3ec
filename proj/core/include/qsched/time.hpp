#pragma once

#include <cstdint>
#include <boost/rational.hpp>

namespace qsched {

// Slot indices and job sizes are integral. Processor sharing is the one
// discipline that produces sub-slot completion instants; those are kept as
// exact rationals so that equality tests on sojourn times (priority-job
// detection, work accounting) never depend on floating point.
using Slot = std::int64_t;
using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline bool is_integral(const Rational& r) { return r.denominator() == 1; }

} // namespace qsched
