#include <doctest.h>

#include <cmath>
#include <random>

#include "test_helpers.hpp"
#include "wastefactor/components.hpp"
#include "wastefactor/units.hpp"

using namespace wastefactor;
using wftest::rel_close;

TEST_CASE("passive devices") {
    const auto mix = stage_of(Mixer{8.2, 0.0}).stage;
    CHECK(mix.w() == doctest::Approx(std::pow(10.0, 0.82)));
    CHECK(mix.g() == doctest::Approx(1.0 / mix.w()));
    CHECK(stage_of(Mixer{3.0, 1.0}).stage.wf_db() == doctest::Approx(4.0));

    CHECK(stage_of(PhaseShifter{3.5, 14.0, std::nullopt}).stage.wf_db() == doctest::Approx(17.5));
    CHECK(stage_of(PhaseShifter{6.0, std::nullopt, std::nullopt}).stage.wf_db() == doctest::Approx(6.0));
    // VSWR 1.5 -> |Gamma| = 0.2 -> 13.98 dB reflection term.
    CHECK(stage_of(PhaseShifter{3.5, std::nullopt, 1.5}).stage.wf_db() ==
          doctest::Approx(3.5 - 20.0 * std::log10(0.2)));
    // An explicit reflection loss wins over a VSWR.
    CHECK(stage_of(PhaseShifter{3.5, 14.0, 3.0}).stage.wf_db() == doctest::Approx(17.5));

    CHECK(stage_of(GenericPassive{10.0}).stage.w() == doctest::Approx(10.0));
    CHECK_THROWS_AS(stage_of(GenericPassive{-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(stage_of(Mixer{-0.1, 0.0}), std::invalid_argument);
}

TEST_CASE("antenna") {
    CHECK(reflection_coefficient(1.5) == doctest::Approx(0.2));
    CHECK(reflection_coefficient(1.0) == 0.0);
    CHECK_THROWS_AS(reflection_coefficient(0.9), std::invalid_argument);

    const auto with = stage_of(Antenna{0.6, 1.5, true}).stage;
    CHECK(with.w() == doctest::Approx(1.7361).epsilon(1e-4));
    CHECK(with.w() == doctest::Approx(1.0 / (0.6 * 0.96)));
    CHECK(with.g() == doctest::Approx(1.0 / with.w()));

    for (double eta : {0.1, 0.5, 0.6, 0.7, 1.0}) {
        CHECK(stage_of(Antenna{eta, 2.0, false}).stage.w() == 1.0 / eta);
    }
    CHECK_THROWS_AS(stage_of(Antenna{0.0, 1.5, true}), std::invalid_argument);
    CHECK_THROWS_AS(stage_of(Antenna{1.2, 1.5, true}), std::invalid_argument);

    CHECK(mismatch_loss_db(1.5) == doctest::Approx(-10.0 * std::log10(0.96)));
    CHECK(return_loss_db(1.5) == doctest::Approx(13.979).epsilon(1e-4));
}

TEST_CASE("active devices") {
    const auto pa = stage_of(PowerAmplifier{PaeRating{0.48, 50.0}, 2.5});
    CHECK(pa.stage.w() == doctest::Approx(2.0833).epsilon(1e-4));
    CHECK(pa.stage.gain_db() == doctest::Approx(50.0));
    CHECK(pa.non_path_w == 2.5);

    const auto op = stage_of(PowerAmplifier{OperatingPoint{10.0, 1.0, 8.0}, 0.0}).stage;
    CHECK(op.w() == doctest::Approx(1.375));
    CHECK(op.g() == doctest::Approx(8.0));

    const auto generic = stage_of(GenericActive{10.0, 1.0, 8.0}).stage;
    CHECK(generic.w() == doctest::Approx(1.375));
    CHECK(generic.g() == doctest::Approx(8.0));
    CHECK(stage_of(GenericActive{10.0, 1.0, 11.0}).stage.w() == 1.0);
    CHECK_THROWS_AS(stage_of(GenericActive{10.0, 1.0, 11.5}), std::invalid_argument);
    CHECK_THROWS_AS(stage_of(GenericActive{10.0, 0.0, 8.0}), std::invalid_argument);

    const auto dac = stage_of(Dac{0.91}).stage;
    CHECK(dac.w() == doctest::Approx(1.0 / 0.91));
    CHECK(dac.g() == 1.0);

    const auto adc = stage_of(Adc{1e-12, 1e9, 10});
    CHECK(adc.stage.w() == 1.0);
    CHECK(adc.stage.g() == 1.0);
    // 1e-12 J * 1e9 /s * 2^10 = 1.024 W.
    CHECK(adc.non_path_w == doctest::Approx(1.024));

    const auto lna = stage_of(Lna{20.0, LnaIdeal{}, 0.01});
    CHECK(lna.stage.w() == 1.0);
    CHECK(lna.stage.gain_db() == doctest::Approx(20.0));
    CHECK(lna.non_path_w == 0.01);

    // FoM model: W = G / (FoM * SNR_in * (F-1) G N_in).
    const double n_in = 1e-12, fom = 1e9, snr = 10.0, f = 2.0;
    const auto fom_lna = stage_of(Lna{20.0, LnaFom{fom, f, snr, n_in}, 0.0}).stage;
    CHECK(fom_lna.w() == doctest::Approx(100.0 / (fom * snr * (f - 1.0) * 100.0 * n_in)));
    CHECK_THROWS_AS(stage_of(Lna{20.0, LnaFom{1e15, f, snr, n_in}, 0.0}), std::invalid_argument);
}

TEST_CASE("Walker PAE form") {
    // PAE#2 from the same operating point: (8-1)/10 = 0.7.
    CHECK(pae_from_walker(0.7, 1.0, 10.0, 8.0) == doctest::Approx(1.375));
    CHECK(pae_from_walker(0.6, 1e-9, 10.0, 1e12) == doctest::Approx(1.0 / 0.6).epsilon(1e-9));
    CHECK(pae_from_walker(1.0, 0.0, 1.0, 1e15) == doctest::Approx(1.0));
    CHECK_THROWS_AS(pae_from_walker(0.7, 1.0, 10.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(pae_from_walker(0.0, 1.0, 10.0, 8.0), std::invalid_argument);

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double p_in = wftest::log_uniform(rng, 1e-3, 1.0);
        const double g = wftest::log_uniform(rng, 1.5, 1e4);
        const double p_out = p_in * g;
        const double p_dc = (p_out - p_in) / (0.05 + 0.95 * u(rng));
        const double pae2 = (p_out - p_in) / p_dc;
        const double direct = stage_of(GenericActive{p_dc, p_in, p_out}).stage.w();
        REQUIRE(rel_close(pae_from_walker(pae2, p_in, p_dc, g), direct, 1e-12));
    }
}

namespace {

// Reference hardware values written out by hand, independently of reference_ru/reference_ue.
std::vector<Stage> table_ru_stages(double antenna_eta) {
    return {Stage(1.0 / 0.91, 1.0), Stage::passive_db(8.2), Stage::passive_db(17.5),
            Stage(1.0 / 0.48, 1e5), Stage::passive(1.0 / antenna_eta)};
}

std::vector<Stage> table_ue_stages(double antenna_eta) {
    return {Stage::passive(1.0 / antenna_eta), Stage(1.0, 100.0), Stage::passive_db(6.0), Stage::passive_db(6.7)};
}

}  // namespace

TEST_CASE("reference RU and UE chains") {
    const auto ru_off = build_ru(reference_ru(false));
    const auto ru_on = build_ru(reference_ru(true));
    const auto ue_off = build_ue(reference_ue(false));
    const auto ue_on = build_ue(reference_ue(true));

    CHECK(ru_off.stage.w() >= 3.45);
    CHECK(ru_off.stage.w() <= 3.55);
    CHECK(ru_off.stage.w() == doctest::Approx(3.48).epsilon(1e-3));
    CHECK(ru_on.stage.w() == doctest::Approx(3.624).epsilon(1e-3));
    CHECK(ue_off.stage.w() >= 18.4);
    CHECK(ue_off.stage.w() <= 18.8);
    CHECK(ue_on.stage.w() == doctest::Approx(18.71).epsilon(1e-3));

    // Rounded hand closures: RU (mismatch off) and UE (mismatch on).
    const double ru_closure = 1.0 / 0.6 + 1.0833 / 0.6 + (56.23 - 1.0) / 0.6e5 + (6.607 - 1.0) / (0.01778 * 0.6e5) +
                              0.0989 / (0.1514 * 0.01778 * 0.6e5);
    CHECK(ru_off.stage.w() == doctest::Approx(ru_closure).epsilon(1e-3));
    const double ue_closure = 4.677 + 2.981 / 0.2138 + 0.488 / (0.2138 * 0.2512 * 100.0);
    CHECK(ue_on.stage.w() == doctest::Approx(ue_closure).epsilon(1e-3));

    CHECK(rel_close(ru_off.stage.w(), cascade(table_ru_stages(0.6)).w(), 1e-12));
    CHECK(rel_close(ru_on.stage.w(), cascade(table_ru_stages(0.576)).w(), 1e-12));
    CHECK(rel_close(ue_off.stage.w(), cascade(table_ue_stages(0.7)).w(), 1e-12));
    CHECK(rel_close(ue_on.stage.w(), cascade(table_ue_stages(0.672)).w(), 1e-12));
    CHECK(rel_close(ru_off.stage.g(), cascade(table_ru_stages(0.6)).g(), 1e-12));
    CHECK(ru_off.stages.size() == 5);
    CHECK(ue_off.stages.size() == 4);
}

TEST_CASE("chain edge cases") {
    RuSpec ideal;
    ideal.pa = PowerAmplifier{PaeRating{1.0, 30.0}, 0.0};
    CHECK(build_ru(ideal).stage.w() == doctest::Approx(1.0));

    UeSpec mixer_only;
    mixer_only.mixer = Mixer{5.0, 1.0};
    mixer_only.lna = Lna{20.0, LnaIdeal{}, 0.0};
    CHECK(build_ue(mixer_only).stage.w() == doctest::Approx(std::pow(10.0, 0.6)));

    // Ideal LNA: its own term in the UE cascade is exactly zero.
    UeSpec ue = reference_ue(false);
    const auto r = power_flow(build_ue(ue).stages, 1.0);
    CHECK(r.stages[1].p_wasted_w == 0.0);

    RuSpec with_np = reference_ru(false);
    with_np.n_tx = 4;
    with_np.pa.quiescent_w = 0.5;
    with_np.lo_power_w = 0.2;
    const auto np = build_ru(with_np);
    CHECK(np.non_path_w == doctest::Approx(4 * 0.5 + 0.2));
    CHECK(np.stage.w() == doctest::Approx(build_ru(reference_ru(false)).stage.w()));

    UeSpec with_adc = reference_ue(false);
    with_adc.adc = Adc{1e-12, 1e9, 10};
    CHECK(build_ue(with_adc).non_path_w == doctest::Approx(1.024));
    CHECK(build_ue(with_adc).stage.w() == build_ue(reference_ue(false)).stage.w());

    RuSpec bad_n = reference_ru(false);
    bad_n.n_tx = 0;
    CHECK_THROWS_AS(build_ru(bad_n), std::invalid_argument);
}

TEST_CASE("end_to_end closed form equals cascade") {
    std::mt19937_64 rng(66);
    std::uniform_real_distribution<double> wd(1.0, 50.0);
    for (int i = 0; i < 1000; ++i) {
        const Stage ru(wd(rng), wftest::log_uniform(rng, 1e-2, 1e6));
        const Stage ch = Stage::passive(wftest::log_uniform(rng, 1.0, 1e12));
        const Stage ue(wd(rng), wftest::log_uniform(rng, 1e-2, 1e4));
        const Stage closed = end_to_end(ru, ch, ue);
        const Stage folded = cascade({ru, ch, ue});
        REQUIRE(rel_close(closed.w(), folded.w(), 1e-12));
        REQUIRE(rel_close(closed.g(), folded.g(), 1e-12));
    }
    CHECK(end_to_end(Stage(3.5, 1e3), Stage(1.0, 1.0), Stage(1.0, 1.0)).w() == doctest::Approx(3.5));
}

TEST_CASE("strategy sweep") {
    const Stage ru = build_ru(reference_ru(false)).stage;
    const Stage ue = build_ue(reference_ue(false)).stage;
    std::vector<double> grid;
    for (double x = 60.0; x <= 120.0; x += 5.0) grid.push_back(x);
    const auto rows = strategy_sweep(ru, ue, grid);
    REQUIRE(rows.size() == grid.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].baseline_db - rows[i].half_w_ru_db == doctest::Approx(3.0103).epsilon(0.02 / 3.0));
        CHECK(std::abs(rows[i].baseline_db - rows[i].half_w_ue_db) < 0.01);
        CHECK(rows[i].baseline_db - rows[i].double_g_ue_db == doctest::Approx(3.0103).epsilon(0.02 / 3.0));
        if (i > 0 && grid[i] > 80.0) {
            CHECK(std::abs((rows[i].baseline_db - rows[i - 1].baseline_db) - 5.0) < 0.01);
        }
    }
    // Halving never drives a stage below the physical floor.
    const auto floor_rows = strategy_sweep(Stage(1.5, 10.0), Stage(1.2, 10.0), grid);
    CHECK(floor_rows.front().half_w_ru_db <= floor_rows.front().baseline_db);
}
