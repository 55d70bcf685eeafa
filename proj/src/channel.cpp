#include "wastefactor/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "wastefactor/units.hpp"

namespace wastefactor {

void PathLossModel::validate() const {
    if (!(frequency_hz > 0.0)) throw std::invalid_argument(fmt::format("frequency must be > 0 Hz, got {}", frequency_hz));
    if (!(ple > 0.0)) throw std::invalid_argument(fmt::format("path-loss exponent must be > 0, got {}", ple));
    if (!(sigma_db >= 0.0)) throw std::invalid_argument(fmt::format("shadowing sigma must be >= 0 dB, got {}", sigma_db));
}

double fspl_1m(double frequency_hz) {
    if (!(frequency_hz > 0.0)) throw std::invalid_argument(fmt::format("frequency must be > 0 Hz, got {}", frequency_hz));
    return 20.0 * std::log10(4.0 * std::numbers::pi * frequency_hz / kSpeedOfLight);
}

double path_loss(const PathLossModel& model, double distance_m, double shadow_db) {
    model.validate();
    const double d = std::max(distance_m, 1.0);
    return fspl_1m(model.frequency_hz) + 10.0 * model.ple * std::log10(d) + shadow_db;
}

double aperture_gain(const ApertureAntenna& antenna, double frequency_hz) {
    if (!(antenna.efficiency > 0.0 && antenna.efficiency <= 1.0)) {
        throw std::invalid_argument(fmt::format("antenna efficiency must be in (0, 1], got {}", antenna.efficiency));
    }
    if (!(antenna.physical_area_m2 > 0.0)) {
        throw std::invalid_argument(fmt::format("antenna area must be > 0 m^2, got {}", antenna.physical_area_m2));
    }
    if (!(frequency_hz > 0.0)) throw std::invalid_argument(fmt::format("frequency must be > 0 Hz, got {}", frequency_hz));
    const double lambda = kSpeedOfLight / frequency_hz;
    return 10.0 * std::log10(4.0 * std::numbers::pi * antenna.effective_area_m2() / (lambda * lambda));
}

EffectiveChannel effective_channel(double pl_db, double g_tx_db, double g_rx_db) {
    const double eff_db = pl_db - g_tx_db - g_rx_db;
    const double loss = db_to_linear(eff_db);
    const bool clamped = loss < 1.0;
    return EffectiveChannel{Stage(clamped ? 1.0 : loss, 1.0 / loss, "channel"), eff_db, clamped};
}

double noise_power_dbm(double bandwidth_hz, double noise_figure_db) {
    if (!(bandwidth_hz > 0.0)) throw std::invalid_argument(fmt::format("bandwidth must be > 0 Hz, got {}", bandwidth_hz));
    return kThermalNoiseDbmPerHz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

}  // namespace wastefactor
