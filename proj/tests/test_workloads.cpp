#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "qsched/workloads.hpp"

using namespace qsched;

TEST_CASE("two-point model derived gaps") {
    TwoPointModel m(4, 2);
    CHECK(m.j1() == 3);
    CHECK(m.j2() == 7);
    CHECK(m.arrival_rate() == doctest::Approx(0.2));

    TwoPointModel tight(2, 1);
    CHECK(tight.j1() == 2);
    CHECK(tight.j2() == 4);

    CHECK_THROWS_AS(TwoPointModel(4, 0), std::invalid_argument);
    CHECK_THROWS_AS(TwoPointModel(4, 5), std::invalid_argument);
    CHECK_THROWS_AS(TwoPointModel(4, 3, /*analysis_mode=*/true), std::invalid_argument);
    CHECK_NOTHROW(TwoPointModel(4, 2, /*analysis_mode=*/true));
}

TEST_CASE("two-point traces: gaps, sizes, determinism") {
    TwoPointModel m(4, 2);
    Trace a = two_point_trace(m, 2000, 31337);
    Trace b = two_point_trace(m, 2000, 31337);
    CHECK(a == b);
    CHECK(a.size() == 2000);
    CHECK(a[0].time == 0);

    std::size_t short_gaps = 0;
    for (std::size_t i = 1; i < a.size(); ++i) {
        Slot gap = a[i].time - a[i - 1].time;
        bool valid = gap == m.j1() || gap == m.j2();
        CHECK(valid);
        CHECK(a[i].size == 4);
        if (gap == m.j1()) ++short_gaps;
    }
    // Frequency of the short gap is 1/2 within 3 sigma.
    double n = 1999.0;
    double sigma = std::sqrt(n * 0.25);
    CHECK(std::abs(static_cast<double>(short_gaps) - n / 2) < 3 * sigma);

    CHECK(two_point_trace(m, 500, 1) != two_point_trace(m, 500, 2));
    CHECK_THROWS_AS(two_point_trace(m, 0, 1), std::invalid_argument);
}

TEST_CASE("bernoulli traces: rate, sizes, determinism") {
    BernoulliModel m(4);
    CHECK(m.arrival_probability() == doctest::Approx(0.2));

    Trace a = bernoulli_trace(m, 50000, 7);
    CHECK(a == bernoulli_trace(m, 50000, 7));
    for (const auto& arr : a.arrivals()) CHECK(arr.size == 4);

    // Mean gap converges to j+1 (geometric with success probability 1/(j+1)).
    double n = static_cast<double>(a.size());
    double expected = 50000.0 / 5.0;
    double sigma = std::sqrt(50000.0 * 0.2 * 0.8);
    CHECK(std::abs(n - expected) < 4 * sigma);

    // At most one arrival per slot.
    std::set<Slot> times;
    for (const auto& arr : a.arrivals()) CHECK(times.insert(arr.time).second);

    CHECK_THROWS_AS(bernoulli_trace(m, 0, 1), std::invalid_argument);
}

TEST_CASE("batch traces") {
    Trace t = batch_trace({1, 3});
    CHECK(t.size() == 2);
    CHECK(t[0] == Arrival{0, 1});
    CHECK(t[1] == Arrival{0, 3});

    Trace twins = batch_trace({2, 2});
    CHECK(twins[0].time == 0);
    CHECK(twins[1].time == 0);

    CHECK(batch_trace({1, 2, 3}).size() == 3);
    CHECK_THROWS_AS(batch_trace({}), std::invalid_argument);
    CHECK_THROWS_AS(batch_trace({0}), std::invalid_argument);
}

TEST_CASE("stability holds by construction") {
    for (Slot j = 1; j <= 12; ++j) {
        for (Slot delta = 1; delta <= j; ++delta) {
            TwoPointModel m(j, delta);
            CHECK((m.j1() + m.j2()) / 2.0 > static_cast<double>(j));
            CHECK(m.j1() >= 1);
        }
        BernoulliModel b(j);
        CHECK(1.0 / b.arrival_probability() > static_cast<double>(j));
    }
}

TEST_CASE("seed derivation separates streams") {
    CHECK(derive_seed(1, 0, 0) != derive_seed(1, 0, 1));
    CHECK(derive_seed(1, 0, 0) != derive_seed(1, 1, 0));
    CHECK(derive_seed(1, 0, 0) != derive_seed(2, 0, 0));
    CHECK(derive_seed(1, 3, 4) == derive_seed(1, 3, 4));
    CHECK(std::string(generator_name()) == "mt19937_64");
}
