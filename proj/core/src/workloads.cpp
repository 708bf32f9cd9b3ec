#include "qsched/workloads.hpp"

#include <limits>
#include <random>
#include <stdexcept>

namespace qsched {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace

TwoPointModel::TwoPointModel(Slot j_, Slot delta_, bool analysis_mode_)
    : j(j_), delta(delta_), analysis_mode(analysis_mode_) {
    require(j >= 1, "two-point model: job size must be positive");
    require(delta >= 1, "two-point model: delta must be a positive integer");
    require(delta <= j, "two-point model: delta > j makes the short gap non-positive");
    if (analysis_mode)
        require(2 * delta <= j, "two-point model: analysis mode needs 2*delta <= j");
}

BernoulliModel::BernoulliModel(Slot j_) : j(j_) {
    require(j >= 1, "bernoulli model: job size must be positive");
}

const char* generator_name() { return "mt19937_64"; }

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t replication) {
    std::uint64_t s = splitmix64(base ^ 0xA0761D6478BD642FULL);
    s = splitmix64(s ^ splitmix64(stream));
    return splitmix64(s ^ splitmix64(replication ^ 0xE7037ED1A0B428DBULL));
}

Trace two_point_trace(const TwoPointModel& model, std::size_t n_jobs, std::uint64_t seed) {
    require(n_jobs >= 1, "two_point_trace: need at least one job");
    std::mt19937_64 rng(seed);
    std::vector<Arrival> arrivals;
    arrivals.reserve(n_jobs);
    Slot t = 0;
    arrivals.push_back({t, model.j});
    for (std::size_t i = 1; i < n_jobs; ++i) {
        // Low bit of the raw draw picks the gap; both values are equally likely.
        t += (rng() & 1u) ? model.j1() : model.j2();
        arrivals.push_back({t, model.j});
    }
    return Trace(std::move(arrivals));
}

Trace bernoulli_trace(const BernoulliModel& model, Slot horizon_slots, std::uint64_t seed) {
    require(horizon_slots >= 1, "bernoulli_trace: horizon must be positive");
    std::mt19937_64 rng(seed);
    const std::uint64_t m = static_cast<std::uint64_t>(model.j) + 1;
    // Rejection keeps the per-slot arrival probability exactly 1/m.
    const std::uint64_t bound = (std::numeric_limits<std::uint64_t>::max() / m) * m;
    std::vector<Arrival> arrivals;
    for (Slot t = 0; t < horizon_slots; ++t) {
        std::uint64_t u;
        do {
            u = rng();
        } while (u >= bound);
        if (u % m == 0) arrivals.push_back({t, model.j});
    }
    return Trace(std::move(arrivals));
}

Trace batch_trace(const std::vector<Slot>& sizes) {
    require(!sizes.empty(), "batch_trace: empty size list");
    std::vector<Arrival> arrivals;
    arrivals.reserve(sizes.size());
    for (Slot s : sizes) arrivals.push_back({0, s});
    return Trace(std::move(arrivals));
}

} // namespace qsched
