#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wastefactor/core.hpp"

namespace wastefactor {

// ---------------------------------------------------------------- devices

/// Passive mixer. W = G^-1 = 10^((L_con + L_ins)/10).
struct Mixer {
    double conversion_loss_db = 0.0;
    double insertion_loss_db = 0.0;
};

/**
 * @brief Phase shifter, total loss = reflection loss + insertion loss (dB).
 *
 * An explicit `reflection_loss_db` is used verbatim. Without it, a given VSWR
 * contributes -20 log10 |Gamma|; with neither, the reflection term is 0 dB.
 */
struct PhaseShifter {
    double insertion_loss_db = 0.0;
    std::optional<double> reflection_loss_db;
    std::optional<double> vswr;
};

/// Antenna as a device: efficiency only. Directive gain belongs to the channel.
struct Antenna {
    double radiation_efficiency = 1.0;
    double vswr = 1.0;
    bool include_mismatch = true;
};

/// PA rated by power-added efficiency and small-signal gain.
struct PaeRating {
    double pae = 1.0;
    double gain_db = 0.0;
};

/// Measured operating point of an active device.
struct OperatingPoint {
    double p_dc_w = 0.0;
    double p_in_w = 0.0;
    double p_out_w = 0.0;
};

struct PowerAmplifier {
    std::variant<PaeRating, OperatingPoint> rating = PaeRating{};
    double quiescent_w = 0.0;  ///< standby draw, booked as non-path power
};

/// LNA treated as an ideal (W = 1) high-gain amplifier.
struct LnaIdeal {};

/// LNA power from its figure of merit: P_LNA = G / (FoM (F - 1)).
struct LnaFom {
    double fom_per_w = 0.0;    ///< FoM_LNA in 1/W
    double noise_factor = 1.0; ///< F, linear
    double snr_in = 1.0;       ///< input SNR, linear
    double input_noise_w = 0.0;///< N_in
};

struct Lna {
    double gain_db = 0.0;
    std::variant<LnaIdeal, LnaFom> model = LnaIdeal{};
    double quiescent_w = 0.0;
};

/// DAC: W = 1/efficiency, unity gain.
struct Dac {
    double efficiency = 1.0;
};

/// ADC: off the signal path; its power FoM * f_s * 2^bits is non-path.
struct Adc {
    double fom_j = 0.0;
    double sample_rate_hz = 0.0;
    int bits = 1;
};

struct GenericActive {
    double p_dc_w = 0.0;
    double p_in_w = 0.0;
    double p_out_w = 0.0;
};

struct GenericPassive {
    double loss_db = 0.0;
};

using DeviceSpec =
    std::variant<Mixer, PhaseShifter, Antenna, PowerAmplifier, Lna, Dac, Adc, GenericActive, GenericPassive>;

/// Signal-path stage of a device plus the power it draws off the path.
struct DeviceStage {
    Stage stage;
    double non_path_w = 0.0;
};

/// Throws std::invalid_argument when the spec violates its numeric ranges.
DeviceStage stage_of(const DeviceSpec& spec, std::string label = {});

/// Gamma = (VSWR - 1)/(VSWR + 1). Throws for VSWR < 1.
double reflection_coefficient(double vswr);
/// -10 log10(1 - |Gamma|^2): power lost to mismatch.
double mismatch_loss_db(double vswr);
/// -20 log10 |Gamma|. Infinite for a perfect match.
double return_loss_db(double vswr);

/// W from Walker's PAE definition, (1/PAE2)(1 + P_in/P_DC)(1 - 1/G).
double pae_from_walker(double pae2, double p_in_w, double p_dc_w, double gain);

// ---------------------------------------------------------------- RU / UE

struct RuSpec {
    Dac dac;
    Mixer mixer;
    PhaseShifter phase_shifter;
    PowerAmplifier pa;
    Antenna antenna;
    int n_tx = 1;
    std::optional<double> lo_power_w;
};

struct UeSpec {
    Antenna antenna;
    Lna lna;
    PhaseShifter phase_shifter;
    Mixer mixer;
    std::optional<Adc> adc;
    int n_rx = 1;
    std::optional<double> lo_power_w;
};

struct ChainResult {
    Stage stage;
    double non_path_w = 0.0;
    std::vector<Stage> stages;  ///< source-first, one chain
};

/// Transmitter: DAC -> mixer -> phase shifter -> PA -> antenna.
ChainResult build_ru(const RuSpec& spec);
/// Receiver: antenna -> LNA -> phase shifter -> mixer (ADC off-path).
ChainResult build_ue(const UeSpec& spec);

/// Component values of the reference RU and UE hardware.
RuSpec reference_ru(bool include_mismatch);
UeSpec reference_ue(bool include_mismatch);

/// RU -> channel -> UE, in closed form.
Stage end_to_end(const Stage& ru, const Stage& channel, const Stage& ue);

/// Lossy channel stage for a given waste figure in dB.
Stage channel_stage_db(double wf_c_db);

/// System WF under four hardware strategies at one channel loss.
struct StrategyRow {
    double wf_c_db = 0.0;
    double baseline_db = 0.0;
    double half_w_ru_db = 0.0;
    double half_w_ue_db = 0.0;
    double double_g_ue_db = 0.0;
};

/// Halving a W that would drop below 1 clamps it to 1.
std::vector<StrategyRow> strategy_sweep(const Stage& ru, const Stage& ue, std::span<const double> wf_c_db);

}  // namespace wastefactor
