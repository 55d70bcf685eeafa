#pragma once

#include <filesystem>
#include <istream>
#include <span>
#include <vector>

namespace wastefactor {

/// One measurement: delivered signal power and total consumed power, watts.
struct PowerSample {
    double p_signal_w = 0.0;
    double p_total_w = 0.0;
};

/**
 * @brief Straight-line fit p_total = w * p_signal + p_non_path.
 *
 * The slope is the waste factor and the intercept the non-path power. Fits
 * with slope < 1 or a negative intercept are kept but marked non-physical.
 */
struct WasteFit {
    double w = 0.0;
    double p_non_path_w = 0.0;
    double r_squared = 0.0;
    int n_samples = 0;
    bool physical = true;
};

/// Ordinary least squares. Throws std::invalid_argument with fewer than two
/// samples or when every sample has the same signal power.
WasteFit fit_waste_factor(std::span<const PowerSample> samples);

/**
 * Read a power log. Header must name one signal column (`p_signal_w` or
 * `p_signal_dbm`) and one total column (`p_total_w` or `p_total_dbm`);
 * extra columns are ignored, blank and `#` lines skipped. Errors carry the
 * offending line number.
 */
std::vector<PowerSample> load_power_log(const std::filesystem::path& path);
std::vector<PowerSample> parse_power_log(std::istream& in, const std::string& source_name = "<input>");

}  // namespace wastefactor
