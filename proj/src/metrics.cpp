#include "wastefactor/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace wastefactor {

namespace {

double ratio(double num, double den, const char* what) {
    if (!(den > 0.0)) throw std::invalid_argument(fmt::format("{}: denominator must be > 0, got {}", what, den));
    if (!(num >= 0.0)) throw std::invalid_argument(fmt::format("{}: numerator must be >= 0, got {}", what, num));
    return num / den;
}

}  // namespace

void EquipmentReading::validate() const {
    if (data_volume_gb && !(*data_volume_gb >= 0.0)) throw std::invalid_argument("data volume must be >= 0 GB");
    if (!(p_signal_w >= 0.0) || !(p_non_signal_w >= 0.0) || !(p_non_path_w >= 0.0)) {
        throw std::invalid_argument("reading powers must be >= 0 W");
    }
    if (!(duration_h > 0.0)) throw std::invalid_argument(fmt::format("duration must be > 0 h, got {}", duration_h));
}

double EquipmentReading::waste_factor() const {
    validate();
    if (!(p_signal_w > 0.0)) throw std::invalid_argument("waste factor undefined without signal power");
    return p_consumed_path_w() / p_signal_w;
}

double ee_bs(double data_volume_gb, double energy_wh) { return ratio(data_volume_gb, energy_wh, "EE_BS"); }
double ee_ru(double p_signal_energy_wh, double total_energy_wh) {
    return ratio(p_signal_energy_wh, total_energy_wh, "EE_RU");
}
double ee_site(double e_bs_wh, double e_site_wh) { return ratio(e_bs_wh, e_site_wh, "EE_site"); }
double ee_network(double useful_output, double e_network_wh) {
    return ratio(useful_output, e_network_wh, "EE_network");
}

double ee_ru(const EquipmentReading& reading) {
    reading.validate();
    return ee_ru(reading.energy_wh(reading.p_signal_w), reading.energy_wh(reading.p_consumed_total_w()));
}

Strategy classify_strategy(bool axis1_high, bool w_high, StrategyFigure figure) {
    if (figure == StrategyFigure::RateW) {
        if (axis1_high) return w_high ? Strategy::OptimizeScheduledPower : Strategy::Optimal;
        return w_high ? Strategy::DeployEfficientHardwareSmallerCells : Strategy::IncreasePowerBandwidthCA;
    }
    // Power vs W: high power with high W is a scheduling problem; low power
    // with high W points at the hardware itself.
    if (axis1_high) return w_high ? Strategy::OptimizeScheduledPower : Strategy::ShutdownEfficientCooling;
    return w_high ? Strategy::DeployEfficientHardware : Strategy::Optimal;
}

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::Optimal: return "optimal";
        case Strategy::OptimizeScheduledPower: return "optimize_scheduled_power";
        case Strategy::DeployEfficientHardwareSmallerCells: return "deploy_efficient_hardware_smaller_cells";
        case Strategy::IncreasePowerBandwidthCA: return "increase_power_bandwidth_ca";
        case Strategy::ShutdownEfficientCooling: return "shutdown_efficient_cooling";
        case Strategy::DeployEfficientHardware: return "deploy_efficient_hardware";
    }
    return "unknown";
}

std::string_view to_string(StrategyFigure f) { return f == StrategyFigure::RateW ? "rate_w" : "power_w"; }

std::vector<EeSweepRow> ee_vs_wf_sweep(const Stage& ru, double p_non_path_w, std::span<const double> p_signal_grid_w) {
    if (p_signal_grid_w.empty()) throw std::invalid_argument("EE sweep: empty signal-power grid");
    if (!(p_non_path_w >= 0.0)) throw std::invalid_argument("EE sweep: non-path power must be >= 0");
    std::vector<EeSweepRow> rows;
    rows.reserve(p_signal_grid_w.size());
    for (double p : p_signal_grid_w) {
        if (!(p > 0.0)) throw std::invalid_argument(fmt::format("EE sweep: signal power must be > 0, got {}", p));
        const double total = total_consumed_power(ru.w(), p, p_non_path_w);
        rows.push_back(EeSweepRow{p, ee_ru(p, total), ru.wf_db()});
    }
    return rows;
}

}  // namespace wastefactor
