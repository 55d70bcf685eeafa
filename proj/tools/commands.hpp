#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace wfcalc {

enum class Format { Csv, Json };

/// Bad command-line usage; maps to exit code 2 like configuration errors.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int cmd_cascade(const std::string& config_path, Format format, std::ostream& out);
int cmd_system(const std::string& config_path, Format format, std::ostream& out);
int cmd_fit(const std::string& csv_path, Format format, std::ostream& out);
int cmd_metrics(const std::string& config_path, Format format, std::ostream& out);

struct SimulateOptions {
    int seeds = 20;
    int jobs = 0;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed_override;
};
int cmd_simulate(const std::string& config_path, const SimulateOptions& opts, std::ostream& out);

}  // namespace wfcalc
