#include <doctest.h>

#include <random>

#include "test_helpers.hpp"
#include "wastefactor/core.hpp"
#include "wastefactor/units.hpp"

using namespace wastefactor;
using wftest::rel_close;

TEST_CASE("units round trips") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        const double lin = wftest::log_uniform(rng, 1e-12, 1e12);
        CHECK(rel_close(LinearRatio(lin).to_db().value, linear_to_db(lin), 1e-15));
        CHECK(rel_close(LinearRatio::from_db(LinearRatio(lin).to_db()).value(), lin, 1e-12));
        CHECK(rel_close(Power::from_dbm(Power(lin).dbm()).w(), lin, 1e-12));
    }
    CHECK(Power::from_dbm(30.0).w() == doctest::Approx(1.0));
    CHECK(Power::from_dbw(0.0).w() == doctest::Approx(1.0));
    CHECK_THROWS_AS(LinearRatio(0.0), std::invalid_argument);
    CHECK_THROWS_AS(LinearRatio(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(Power(-1e-3), std::invalid_argument);
    CHECK_THROWS_AS(linear_to_db(0.0), std::domain_error);
}

TEST_CASE("stage invariants") {
    CHECK_THROWS_AS(Stage(0.999, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Stage(2.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Stage(2.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(Stage(std::nan(""), 1.0), std::invalid_argument);
    CHECK_NOTHROW(Stage(1.0, 1e-9));

    const Stage p = Stage::passive(8.0);
    CHECK(p.w() == 8.0);
    CHECK(p.g() == 1.0 / 8.0);
    CHECK(Stage::passive_db(10.0).w() == doctest::Approx(10.0));
    CHECK_THROWS_AS(Stage::passive(0.5), std::invalid_argument);
    CHECK_THROWS_AS(Stage::passive_db(-1.0), std::invalid_argument);
}

TEST_CASE("cascade examples") {
    const Stage two = cascade({Stage(2, 10), Stage(4, 5)});
    CHECK(two.w() == doctest::Approx(4.2).epsilon(1e-12));
    CHECK(two.g() == doctest::Approx(50.0));

    CHECK(cascade({Stage(1, 7)}).w() == 1.0);
    CHECK(cascade({Stage(1, 3), Stage(1, 2)}).w() == 1.0);

    const Stage three = cascade({Stage(1.5, 2), Stage(2, 4), Stage(3, 10)});
    CHECK(three.w() == doctest::Approx(3.1125).epsilon(1e-12));
    CHECK(three.g() == doctest::Approx(80.0));

    CHECK_THROWS_AS(cascade(std::span<const Stage>{}), std::invalid_argument);
}

TEST_CASE("power_flow examples") {
    const std::vector<Stage> stages{Stage(2, 10, "a"), Stage(4, 5, "b")};
    const CascadeReport r = power_flow(stages, 1.0);
    REQUIRE(r.stages.size() == 2);
    CHECK(r.stages[0].p_out_w == doctest::Approx(10.0));
    CHECK(r.stages[1].p_out_w == doctest::Approx(50.0));
    CHECK(r.stages[0].p_consumed_w == doctest::Approx(19.0));
    CHECK(r.stages[1].p_consumed_w == doctest::Approx(190.0));
    CHECK(r.p_consumed_path_w == doctest::Approx(210.0));
    CHECK(r.w == doctest::Approx(4.2));
    CHECK(r.p_wasted_w == doctest::Approx(160.0));
    CHECK(r.stages[0].label == "a");

    for (double g0 : {1e-3, 0.5, 1.0, 7.0, 1e4}) {
        const std::vector<Stage> ideal{Stage(1.0, g0)};
        const auto ri = power_flow(ideal, 1.0);
        CHECK(ri.stages[0].p_consumed_w == doctest::Approx(g0 - 1.0));
        CHECK(ri.p_wasted_w == 0.0);
    }
    const std::vector<Stage> ideal_chain{Stage(1, 3), Stage(1, 0.1), Stage(1, 40)};
    CHECK(power_flow(ideal_chain, 2.5).p_wasted_w == 0.0);
    CHECK_THROWS_AS(power_flow(stages, 0.0), std::invalid_argument);
}

TEST_CASE("wasted and total power") {
    CHECK(wasted_power(3.5, 120.0) == doctest::Approx(300.0));
    CHECK(wasted_power(1.0, 77.0) == 0.0);
    CHECK(wasted_power(4.2, 50.0) == doctest::Approx(160.0));
    CHECK(total_consumed_power(3.5, 120.0, 80.0) == doctest::Approx(500.0));
    CHECK(total_consumed_power(3.0, 120.0, 140.0) == doctest::Approx(500.0));
    CHECK(total_consumed_power(1.0, 0.0, 42.0) == 42.0);
    CHECK_THROWS_AS(wasted_power(0.9, 1.0), std::invalid_argument);
}

TEST_CASE("property: cascade equals power-flow oracle") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto stages = wftest::random_cascade(rng);
        const Stage c = cascade(stages);
        const CascadeReport r = power_flow(stages, 1.0);
        REQUIRE(rel_close(c.w(), r.w, 1e-9));
        REQUIRE(rel_close(c.g(), r.g, 1e-9));
        // Per-stage accounting adds up to the totals.
        double sum = r.p_source_w;
        for (const auto& s : r.stages) sum += s.p_consumed_w;
        REQUIRE(rel_close(sum, r.p_consumed_path_w, 1e-9));
        REQUIRE(rel_close(r.p_consumed_path_w, c.w() * r.p_signal_w, 1e-9));
        REQUIRE(rel_close(r.p_wasted_w, (c.w() - 1.0) * r.p_signal_w, 1e-9));
    }
}

TEST_CASE("property: associativity") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto a = wftest::random_cascade(rng, 1, 3);
        const auto b = wftest::random_cascade(rng, 1, 3);
        const auto c = wftest::random_cascade(rng, 1, 3);
        std::vector<Stage> all(a);
        all.insert(all.end(), b.begin(), b.end());
        all.insert(all.end(), c.begin(), c.end());
        std::vector<Stage> ab(a);
        ab.insert(ab.end(), b.begin(), b.end());
        const Stage nested = cascade({cascade(ab), cascade(c)});
        const Stage right = cascade({cascade(a), cascade({cascade(b), cascade(c)})});
        const Stage flat = cascade(all);
        REQUIRE(rel_close(nested.w(), flat.w(), 1e-12));
        REQUIRE(rel_close(right.w(), flat.w(), 1e-12));
        REQUIRE(rel_close(nested.g(), flat.g(), 1e-12));
    }
}

TEST_CASE("property: monotone in every stage W") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> bump(1e-3, 5.0);
    for (int trial = 0; trial < 500; ++trial) {
        auto stages = wftest::random_cascade(rng, 1, 6);
        const double base = cascade(stages).w();
        std::uniform_int_distribution<std::size_t> pick(0, stages.size() - 1);
        const std::size_t i = pick(rng);
        stages[i] = Stage(stages[i].w() * (1.0 + bump(rng)), stages[i].g());
        REQUIRE(cascade(stages).w() > base);
    }
}

TEST_CASE("property: sink gain divides upstream waste") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        auto stages = wftest::random_cascade(rng, 2, 8);
        const double k = wftest::log_uniform(rng, 1e-3, 1e3);
        const Stage last = stages.back();
        const double before = cascade(stages).w();
        const double upstream = before - last.w();
        stages.back() = Stage(last.w(), last.g() * k);
        const double after = cascade(stages).w();
        const double scaled = after - last.w();
        // Absolute tolerance: the subtraction cancels when W_last dominates.
        REQUIRE(std::abs(scaled - upstream / k) <= 1e-12 * std::max(before, after) * std::max(1.0, 1.0 / k));
    }
}
