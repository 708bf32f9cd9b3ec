#include "qsched/trace.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qsched {

namespace {

void check(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument("trace: " + msg);
}

} // namespace

Trace::Trace(std::vector<Arrival> arrivals) : arrivals_(std::move(arrivals)) {
    Slot prev = 0;
    for (std::size_t i = 0; i < arrivals_.size(); ++i) {
        const auto& a = arrivals_[i];
        check(a.time >= 0, "negative arrival time at job " + std::to_string(i));
        check(a.size >= 1, "non-positive size at job " + std::to_string(i));
        check(i == 0 || a.time >= prev,
              "arrival times decrease at job " + std::to_string(i));
        prev = a.time;
    }
}

Slot Trace::total_work() const {
    Slot sum = 0;
    for (const auto& a : arrivals_) sum += a.size;
    return sum;
}

Slot Trace::last_arrival() const {
    return arrivals_.empty() ? 0 : arrivals_.back().time;
}

Trace Trace::read(std::istream& in) {
    std::vector<Arrival> arrivals;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::size_t comma = line.find(',');
        check(comma != std::string::npos,
              "line " + std::to_string(lineno) + ": expected \"arrival_time,size\"");
        try {
            std::size_t used = 0;
            Slot t = std::stoll(line.substr(0, comma), &used);
            check(used == comma, "line " + std::to_string(lineno) + ": bad arrival time");
            std::string rest = line.substr(comma + 1);
            Slot s = std::stoll(rest, &used);
            check(used == rest.size(), "line " + std::to_string(lineno) + ": bad size");
            arrivals.push_back({t, s});
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            check(false, "line " + std::to_string(lineno) + ": unparsable integers");
        }
    }
    return Trace(std::move(arrivals));
}

Trace Trace::load(const std::string& path) {
    std::ifstream in(path);
    check(in.good(), "cannot open " + path);
    return read(in);
}

void Trace::write(std::ostream& out) const {
    for (const auto& a : arrivals_) out << a.time << ',' << a.size << '\n';
}

void Trace::save(const std::string& path) const {
    std::ofstream out(path);
    check(out.good(), "cannot open " + path + " for writing");
    write(out);
}

} // namespace qsched
