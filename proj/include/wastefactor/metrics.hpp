#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wastefactor/core.hpp"

namespace wastefactor {

/**
 * @brief Steady-state power readings of one piece of equipment.
 *
 * Powers are averages over `duration_h`, so energy = power * duration.
 */
struct EquipmentReading {
    std::optional<double> data_volume_gb;
    double p_signal_w = 0.0;
    double p_non_signal_w = 0.0;
    double p_non_path_w = 0.0;
    double duration_h = 1.0;

    void validate() const;
    double p_consumed_path_w() const { return p_signal_w + p_non_signal_w; }
    double p_consumed_total_w() const { return p_signal_w + p_non_signal_w + p_non_path_w; }
    double energy_wh(double power_w) const { return power_w * duration_h; }
    /// W = P_consumed,path / P_signal. Throws when p_signal is zero.
    double waste_factor() const;
};

/// Data volume per unit energy, GB/Wh.
double ee_bs(double data_volume_gb, double energy_wh);
/// Output signal energy over total RU energy.
double ee_ru(double p_signal_energy_wh, double total_energy_wh);
double ee_site(double e_bs_wh, double e_site_wh);
double ee_network(double useful_output, double e_network_wh);

/// EE of a reading, computed through ee_ru on its energies.
double ee_ru(const EquipmentReading& reading);

/// Which decision chart a classification refers to.
enum class StrategyFigure { RateW, PowerW };

enum class Strategy {
    Optimal,
    OptimizeScheduledPower,
    DeployEfficientHardwareSmallerCells,
    IncreasePowerBandwidthCA,
    ShutdownEfficientCooling,
    DeployEfficientHardware,
};

/**
 * Quadrant of the rate-vs-W or power-vs-W decision chart. `axis1_high` is
 * the caller's verdict on rate (RateW) or consumed power (PowerW).
 */
Strategy classify_strategy(bool axis1_high, bool w_high, StrategyFigure figure);
std::string_view to_string(Strategy s);
std::string_view to_string(StrategyFigure f);

struct EeSweepRow {
    double p_signal_w = 0.0;
    double ee_ru = 0.0;
    double wf_db = 0.0;
};

/// EE and WF of one RU across output power levels; WF stays constant.
std::vector<EeSweepRow> ee_vs_wf_sweep(const Stage& ru, double p_non_path_w, std::span<const double> p_signal_grid_w);

}  // namespace wastefactor
