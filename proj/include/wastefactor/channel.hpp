#pragma once

#include "wastefactor/core.hpp"

namespace wastefactor {

inline constexpr double kSpeedOfLight = 3.0e8;  ///< m/s, rounded
inline constexpr double kThermalNoiseDbmPerHz = -174.0;

/**
 * @brief Close-in free-space reference model anchored at 1 m.
 *
 * PL(d) = FSPL(1 m) + 10 n log10(d) + X_sigma, with d clamped to >= 1 m.
 */
struct PathLossModel {
    double frequency_hz = 0.0;
    double ple = 2.0;
    double sigma_db = 0.0;

    void validate() const;
};

/// Aperture antenna; effective area is efficiency * physical area.
struct ApertureAntenna {
    double efficiency = 1.0;
    double physical_area_m2 = 0.0;

    double effective_area_m2() const { return efficiency * physical_area_m2; }
};

/// 20 log10(4 pi f / c).
double fspl_1m(double frequency_hz);

/// Path loss in dB at `distance_m` (clamped to 1 m) with a shadowing draw in dB.
double path_loss(const PathLossModel& model, double distance_m, double shadow_db);

/// 10 log10(4 pi A_e / lambda^2).
double aperture_gain(const ApertureAntenna& antenna, double frequency_hz);

struct EffectiveChannel {
    Stage stage;
    double effective_loss_db = 0.0;
    bool clamped = false;  ///< antenna gains exceeded path loss; W held at 1
};

/**
 * Channel stage from path loss and endpoint antenna gains.
 * W = 10^((PL - G_tx - G_rx)/10). When that would fall below 1 the waste
 * factor is clamped to 1 and `clamped` is set; the gain keeps its true value
 * 10^(-(PL - G_tx - G_rx)/10) so received power is not distorted.
 */
EffectiveChannel effective_channel(double pl_db, double g_tx_db, double g_rx_db);

/// Thermal noise power in dBm: -174 + 10 log10(BW) + NF.
double noise_power_dbm(double bandwidth_hz, double noise_figure_db);

}  // namespace wastefactor
