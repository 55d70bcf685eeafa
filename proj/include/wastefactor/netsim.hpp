#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "wastefactor/channel.hpp"

namespace wastefactor {

enum class AntennaMode { Omni, Directional };

/// What to do with a UE that has no BS inside the serving radius.
enum class FallbackMode {
    Nearest,    ///< serve it from the nearest BS (horizontal distance)
    Strongest,  ///< serve it from the BS with the lowest effective path loss
    Exclude,    ///< leave it unserved and out of the W and SNR statistics
};

/// How a UE's required receive power is split across its serving links.
enum class PowerAllocation {
    Equal,         ///< same transmit power on every serving link
    Proportional,  ///< transmit power proportional to link gain
};

std::string_view to_string(AntennaMode m);
std::string_view to_string(FallbackMode m);
std::string_view to_string(PowerAllocation a);
AntennaMode antenna_mode_from_string(std::string_view s);
FallbackMode fallback_mode_from_string(std::string_view s);
PowerAllocation power_allocation_from_string(std::string_view s);

/// Close-in model parameters of one supported carrier.
struct PathLossRow {
    double frequency_ghz = 0.0;
    double ple = 2.0;
    double sigma_db = 0.0;
};

/// Reference row for a carrier (3.5, 17 or 28 GHz), if tabulated.
std::optional<PathLossRow> reference_path_loss(double frequency_ghz);

/**
 * @brief Full configuration of one distributed MU-MIMO drop.
 *
 * Defaults describe a 28 GHz downlink deployment with
 * directional aperture antennas.
 */
struct Scenario {
    int n_ue = 1024;
    int n_bs = 1;
    double region_radius_m = 1000.0;
    double bs_height_m = 15.0;
    double ue_height_m = 1.5;
    double min_bs_separation_m = 200.0;
    double serving_radius_m = 200.0;
    double bandwidth_hz = 400e6;
    double target_snr_db = 10.0;
    double ue_noise_figure_db = 5.0;
    double per_link_cap_dbm = 10.0;
    double per_bs_budget_dbm = 50.0;
    double w_bs = 15.0;
    double g_bs_db = 30.0;
    double w_ue = 33.0;
    double g_ue_db = 11.0;
    double p_non_path_bs_w = 140.0;
    double p_non_path_ue_w = 1.0;

    double frequency_hz = 28e9;
    AntennaMode antenna_mode = AntennaMode::Directional;
    double ple = 2.02;
    double sigma_db = 8.98;
    ApertureAntenna bs_antenna{0.8, 1.0};
    ApertureAntenna ue_antenna{0.8, 9e-4};

    FallbackMode fallback = FallbackMode::Nearest;
    PowerAllocation allocation = PowerAllocation::Equal;
    bool shadowing = true;
    bool normalize_non_path_by_area = true;  ///< divide non-path power by the area too
    bool record_per_ue = false;
    std::uint64_t seed = 1;

    /// Copy with frequency and propagation row set from the reference table.
    /// Throws std::invalid_argument for an untabulated frequency.
    Scenario at_frequency(double frequency_ghz) const;

    PathLossModel path_loss_model() const { return PathLossModel{frequency_hz, ple, sigma_db}; }
    double bs_antenna_gain_db() const;
    double ue_antenna_gain_db() const;
    double target_rx_power_w() const;
    double noise_power_w() const;
    double area_km2() const;
    void validate() const;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Layout {
    std::vector<Point> bs;
    std::vector<Point> ue;
};

/**
 * UEs uniform in the disk, BSs by sequential rejection sampling against the
 * minimum separation. BS k depends only on (seed, k), so the first k sites
 * of a larger deployment coincide with a smaller one.
 */
Layout generate_layout(const Scenario& scenario);

/// Serving BS indices per UE: all BSs within the serving radius (horizontal
/// distance), else the fallback. `effective_loss_db[u][b]` is needed only for
/// FallbackMode::Strongest.
std::vector<std::vector<int>> assign_serving_sets(const Layout& layout, double serving_radius_m, FallbackMode fallback,
                                                  const std::vector<std::vector<double>>* effective_loss_db = nullptr);

/// One BS-to-UE link with its effective channel.
struct Link {
    int bs = 0;
    double loss = 1.0;  ///< effective path loss, linear (1/G_C); may be < 1
};

struct PowerControlResult {
    std::vector<std::vector<double>> tx_w;  ///< per UE, per serving link
    std::vector<double> rx_w;               ///< per UE, combined received power
    int n_capped_links = 0;
    int n_scaled_bs = 0;
};

/**
 * Set transmit powers so each UE receives `target_rx_w` summed over its links
 * (non-coherent), then clip links at `cap_w` and scale down any BS whose
 * link powers exceed `budget_w`.
 */
PowerControlResult power_control(const std::vector<std::vector<Link>>& links, int n_bs, double target_rx_w,
                                 double cap_w, double budget_w, PowerAllocation allocation);

struct SnrStats {
    double mean_db = 0.0;
    double p5_db = 0.0;
    double fraction_meeting_target = 0.0;
};

struct UeDiagnostics {
    int n_links = 0;
    double rx_w = 0.0;
    double snr_db = 0.0;
    double w_parallel = 1.0;
};

/// Independent bottom-up power bookkeeping against the composed W.
struct PowerAudit {
    double top_down_w = 0.0;   ///< W_system * P_out
    double bottom_up_w = 0.0;  ///< sum of standalone stage consumption plus source power
    double relative_error() const;
};

struct DropResult {
    double w_system = 1.0;
    double wf_system_db = 0.0;
    double w_first_stage = 1.0;
    double p_out_w = 0.0;
    double p_consumed_path_w = 0.0;
    double p_non_path_w = 0.0;
    double p_total_per_km2_w = 0.0;
    double p_signal_path_per_km2_w = 0.0;
    double p_non_path_per_km2_w = 0.0;
    SnrStats snr;
    PowerAudit audit;
    int n_served_ue = 0;
    int n_fallback_ue = 0;
    int n_links = 0;
    int n_clamped_links = 0;
    int n_capped_links = 0;
    int n_scaled_bs = 0;
    std::vector<UeDiagnostics> per_ue;
};

/// Evaluate given per-UE link lists (empty list = unserved UE).
DropResult evaluate_links(const Scenario& scenario, const std::vector<std::vector<Link>>& links);

/// Layout, shadowing, serving sets and evaluation for one seeded drop.
DropResult evaluate_drop(const Scenario& scenario);

// ---------------------------------------------------------------- campaigns

struct CampaignGrid {
    Scenario base;
    std::vector<double> frequencies_ghz{3.5, 17.0, 28.0};
    std::vector<AntennaMode> modes{AntennaMode::Omni, AntennaMode::Directional};
    std::vector<int> n_bs{1, 5, 10, 15, 20};
    int n_seeds = 20;
    std::optional<double> omni_per_link_cap_dbm;  ///< overrides the cap for omni cells
};

struct DropRecord {
    double frequency_ghz = 0.0;
    AntennaMode mode = AntennaMode::Directional;
    int n_bs = 1;
    std::uint64_t seed = 0;
    DropResult result;
};

struct CellSummary {
    double frequency_ghz = 0.0;
    AntennaMode mode = AntennaMode::Directional;
    int n_bs = 1;
    int n_seeds = 0;
    double wf_mean_db = 0.0;  ///< dB of the mean linear W
    double wf_std_db = 0.0;   ///< sample std of per-seed WF in dB
    double p_total_mean_kw_per_km2 = 0.0;
    double p_total_std_kw_per_km2 = 0.0;
    double p_nonpath_kw_per_km2 = 0.0;
    double mean_snr_db = 0.0;
    double frac_ue_meeting_target = 0.0;
    double max_audit_error = 0.0;
};

struct CampaignResult {
    std::vector<DropRecord> drops;  ///< ordered by frequency, mode, n_bs, seed
    std::vector<CellSummary> cells;
};

/// Scenario for one grid cell and seed index.
Scenario cell_scenario(const CampaignGrid& grid, double frequency_ghz, AntennaMode mode, int n_bs, int seed_index);

/// Run every drop of the grid on `jobs` worker threads (0 = hardware
/// concurrency). Output is independent of `jobs`.
CampaignResult run_campaign(const CampaignGrid& grid, int jobs = 0);

void write_drops_csv(std::ostream& out, const CampaignResult& result);
void write_aggregate_csv(std::ostream& out, const CampaignResult& result);

}  // namespace wastefactor
