#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "wastefactor/components.hpp"
#include "wastefactor/metrics.hpp"
#include "wastefactor/netsim.hpp"

namespace wastefactor {

/// Malformed or invalid configuration; the message carries file:line.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
};

struct ConfigSection {
    std::string name;
    int line = 0;
    std::vector<ConfigEntry> entries;
};

/**
 * @brief Sectioned key = value document.
 *
 * `#` and `;` start comments, `[name]` opens a section and some sections
 * (stage, reading, bs_reading, strategy) may repeat. Keys carry their unit as
 * a suffix (`_db`, `_dbm`, `_w`, `_ghz`, `_m`, `_hz`).
 */
struct ConfigDocument {
    std::string source;
    std::vector<ConfigSection> sections;

    /// The single section with this name, or nullptr. Throws if repeated.
    const ConfigSection* find(const std::string& name) const;
    std::vector<const ConfigSection*> all(const std::string& name) const;
};

ConfigDocument parse_config(std::istream& in, const std::string& source_name = "<config>");
ConfigDocument load_config(const std::filesystem::path& path);

/**
 * @brief Typed access to one section that tracks which keys were read.
 *
 * `finish()` rejects every key that no accessor asked for.
 */
class SectionReader {
public:
    SectionReader(const ConfigDocument& doc, const ConfigSection* section);

    bool has(const std::string& key) const;
    double number(const std::string& key, double fallback);
    std::optional<double> number(const std::string& key);
    int integer(const std::string& key, int fallback);
    std::uint64_t unsigned64(const std::string& key, std::uint64_t fallback);
    bool flag(const std::string& key, bool fallback);
    std::string text(const std::string& key, const std::string& fallback);
    std::optional<std::vector<double>> numbers(const std::string& key);
    std::optional<std::vector<std::string>> words(const std::string& key);

    [[noreturn]] void fail(const std::string& key, const std::string& message) const;
    std::string where(const std::string& key) const;
    void finish() const;

private:
    const ConfigEntry* entry(const std::string& key);

    const ConfigDocument& doc_;
    const ConfigSection* section_;
    std::set<std::string> used_;
};

/// RU spec from [ru]; absent keys keep the reference hardware values.
RuSpec ru_spec_from(const ConfigDocument& doc);
/// UE spec from [ue]; absent keys keep the reference hardware values.
UeSpec ue_spec_from(const ConfigDocument& doc);
/// Scenario from [scenario] and [channel].
Scenario scenario_from(const ConfigDocument& doc);
/// Campaign grid from [sweep] on top of scenario_from().
CampaignGrid campaign_from(const ConfigDocument& doc);
/// Channel waste figures from [sweep] (wf_c_start_db, wf_c_stop_db, wf_c_step_db).
std::vector<double> wf_c_grid_from(const ConfigDocument& doc);

struct CascadeInput {
    std::vector<Stage> stages;
    double source_power_w = 1.0;
};
/// Stage list from [cascade] and repeated [stage]; nullopt when no [stage] exists.
std::optional<CascadeInput> cascade_from(const ConfigDocument& doc);

struct NamedReading {
    std::string name;
    EquipmentReading reading;
};
struct BsLoad {
    std::string name;
    double data_volume_gb = 0.0;
    double non_path_energy_wh = 0.0;
    double path_energy_per_gb_wh = 0.0;
    double energy_wh() const { return non_path_energy_wh + path_energy_per_gb_wh * data_volume_gb; }
};
struct EeSweepInput {
    double w = 1.0;
    double p_non_path_w = 0.0;
    std::vector<double> p_signal_w;
};
struct StrategyQuery {
    std::string name;
    StrategyFigure figure = StrategyFigure::RateW;
    bool axis_high = false;
    bool w_high = false;
};
struct MetricsInput {
    std::vector<NamedReading> readings;
    std::vector<BsLoad> bs_loads;
    std::optional<EeSweepInput> ee_sweep;
    std::vector<StrategyQuery> strategies;
};
MetricsInput metrics_from(const ConfigDocument& doc);

/// Run every schema reader so unknown keys and bad values anywhere in the
/// document are reported, whichever command consumes it.
void check_config(const ConfigDocument& doc);

}  // namespace wastefactor
