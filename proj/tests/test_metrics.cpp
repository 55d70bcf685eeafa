#include <doctest.h>

#include <set>
#include <stdexcept>

#include "wastefactor/metrics.hpp"

using namespace wastefactor;

TEST_CASE("standards-body EE ratios") {
    CHECK(ee_bs(10.0, 50.0 + 2.0 * 10.0) == doctest::Approx(0.142857).epsilon(1e-6));
    CHECK(ee_bs(50.0, 50.0 + 4.0 * 50.0) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(ee_bs(0.0, 123.0) == 0.0);
    CHECK_THROWS_AS(ee_bs(1.0, 0.0), std::invalid_argument);

    CHECK(ee_ru(120.0, 500.0) == doctest::Approx(0.24));
    CHECK(ee_site(42.0, 42.0) == 1.0);
    CHECK(ee_network(5.0, 10.0) == 0.5);
    CHECK_THROWS_AS(ee_site(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ee_network(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("two RUs: same EE, different W") {
    const EquipmentReading ru_a{std::nullopt, 120.0, 240.0, 140.0, 1.0};
    const EquipmentReading ru_b{std::nullopt, 120.0, 300.0, 80.0, 1.0};
    CHECK(ee_ru(ru_a) == doctest::Approx(0.24));
    CHECK(ee_ru(ru_b) == doctest::Approx(0.24));
    CHECK(ru_a.waste_factor() == 3.0);
    CHECK(ru_b.waste_factor() == 3.5);
    CHECK(ru_a.p_consumed_total_w() == 500.0);

    const EquipmentReading idle{std::nullopt, 0.0, 0.0, 50.0, 1.0};
    CHECK_THROWS_AS(idle.waste_factor(), std::invalid_argument);
    const EquipmentReading bad_duration{std::nullopt, 1.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(bad_duration.validate(), std::invalid_argument);
}

TEST_CASE("EE ordering can invert path-energy ordering") {
    // BS-A: 10 GB at 2 Wh/GB path energy; BS-B: 50 GB at 4 Wh/GB; both 50 Wh fixed.
    const double ee_a = ee_bs(10.0, 50.0 + 2.0 * 10.0);
    const double ee_b = ee_bs(50.0, 50.0 + 4.0 * 50.0);
    CHECK(ee_b > ee_a);
    CHECK(4.0 > 2.0);  // B spends more path energy per GB
}

TEST_CASE("strategy quadrants") {
    using F = StrategyFigure;
    CHECK(classify_strategy(true, false, F::RateW) == Strategy::Optimal);
    CHECK(classify_strategy(true, true, F::RateW) == Strategy::OptimizeScheduledPower);
    CHECK(classify_strategy(false, true, F::RateW) == Strategy::DeployEfficientHardwareSmallerCells);
    CHECK(classify_strategy(false, false, F::RateW) == Strategy::IncreasePowerBandwidthCA);

    CHECK(classify_strategy(false, false, F::PowerW) == Strategy::Optimal);
    CHECK(classify_strategy(true, true, F::PowerW) == Strategy::OptimizeScheduledPower);
    CHECK(classify_strategy(true, false, F::PowerW) == Strategy::ShutdownEfficientCooling);
    CHECK(classify_strategy(false, true, F::PowerW) == Strategy::DeployEfficientHardware);

    // Each figure uses four distinct cells.
    for (auto fig : {F::RateW, F::PowerW}) {
        std::set<Strategy> cells;
        for (bool a : {false, true})
            for (bool w : {false, true}) cells.insert(classify_strategy(a, w, fig));
        CHECK(cells.size() == 4);
    }
    CHECK(to_string(Strategy::DeployEfficientHardwareSmallerCells) == "deploy_efficient_hardware_smaller_cells");
    CHECK(to_string(F::PowerW) == "power_w");
}

TEST_CASE("EE versus WF sweep") {
    std::vector<double> grid;
    for (double p = 10.0; p <= 120.0; p += 10.0) grid.push_back(p);
    const auto rows = ee_vs_wf_sweep(Stage(3.5, 1.0), 140.0, grid);
    REQUIRE(rows.size() == grid.size());
    CHECK(rows.front().ee_ru == doctest::Approx(10.0 / 175.0));
    CHECK(rows.back().ee_ru == doctest::Approx(120.0 / 560.0));
    for (const auto& r : rows) CHECK(r.wf_db == doctest::Approx(5.4407).epsilon(1e-4));

    const auto no_np = ee_vs_wf_sweep(Stage(3.5, 1.0), 0.0, grid);
    for (const auto& r : no_np) CHECK(r.ee_ru == doctest::Approx(1.0 / 3.5));

    const std::vector<double> single{42.0};
    CHECK(ee_vs_wf_sweep(Stage(2.0, 1.0), 10.0, single).size() == 1);
    CHECK_THROWS_AS(ee_vs_wf_sweep(Stage(2.0, 1.0), 10.0, std::span<const double>{}), std::invalid_argument);
}

TEST_CASE("property: EE load dependence with constant WF") {
    for (double w : {1.0, 1.7, 3.5, 12.0}) {
        for (double np : {1.0, 80.0, 140.0, 1e4}) {
            std::vector<double> grid;
            for (double p = 0.5; p < 1000.0; p *= 1.7) grid.push_back(p);
            const auto rows = ee_vs_wf_sweep(Stage(w, 1.0), np, grid);
            for (std::size_t i = 1; i < rows.size(); ++i) {
                REQUIRE(rows[i].ee_ru > rows[i - 1].ee_ru);
                REQUIRE(rows[i].wf_db == rows[0].wf_db);
            }
        }
    }
}
