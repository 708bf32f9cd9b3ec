#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qsched/time.hpp"

namespace qsched {

struct Arrival {
    Slot time = 0;   // slot index, >= 0
    Slot size = 1;   // slots of work, >= 1
    friend bool operator==(const Arrival&, const Arrival&) = default;
};

// An ordered arrival sequence. Job index equals position in `arrivals`;
// arrival times are non-decreasing and ties keep generation order.
class Trace {
public:
    Trace() = default;
    explicit Trace(std::vector<Arrival> arrivals);

    const std::vector<Arrival>& arrivals() const { return arrivals_; }
    std::size_t size() const { return arrivals_.size(); }
    bool empty() const { return arrivals_.empty(); }
    const Arrival& operator[](std::size_t i) const { return arrivals_[i]; }

    Slot total_work() const;
    Slot last_arrival() const;  // 0 for an empty trace

    // Text format: one "arrival_time,size" line per job, ascending times.
    static Trace read(std::istream& in);
    static Trace load(const std::string& path);
    void write(std::ostream& out) const;
    void save(const std::string& path) const;

    friend bool operator==(const Trace&, const Trace&) = default;

private:
    std::vector<Arrival> arrivals_;
};

} // namespace qsched
