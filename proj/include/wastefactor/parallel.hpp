#pragma once

#include <span>
#include <vector>

#include "wastefactor/core.hpp"

namespace wastefactor {

/// How parallel signals add at a combining point.
enum class CombiningMode {
    NonCoherent,  ///< received powers add
    Coherent,     ///< phase-aligned amplitudes add, power = (sum sqrt P)^2
};

/**
 * @brief One parallel cascade feeding a combining point.
 *
 * `weight` is the relative received power of this branch. Only ratios
 * matter; raw received powers in watts are fine.
 */
struct Branch {
    Stage stage;
    double weight = 1.0;
};

/**
 * Waste factor of a parallel group referenced to the combined input of the
 * next stage. Non-coherent gives the weight-averaged W; coherent divides by
 * (sum sqrt(weight))^2 and may therefore fall below the smallest branch W.
 * Throws std::invalid_argument when the group is empty, a weight is negative
 * or all weights are zero.
 */
double combine_branches(std::span<const Branch> branches, CombiningMode mode);

/// Parallel group followed by a single terminal stage.
/// W = W_terminal + (W_parallel - 1) / G_terminal, G = G_terminal.
Stage miso_compose(std::span<const Branch> branches, CombiningMode mode, const Stage& terminal);

/// Gain of a bank of parallel receivers fed with the given powers.
double parallel_gain(std::span<const double> received_powers_w, std::span<const double> gains, CombiningMode mode);

/**
 * Received power at each of N outputs from M transmitters.
 * `channel_w[i][j]` is the channel waste factor from input i to output j;
 * +infinity marks a dead link.
 */
std::vector<double> received_power_matrix(std::span<const double> tx_powers_w,
                                          const std::vector<std::vector<double>>& channel_w,
                                          CombiningMode mode);

/// First-stage waste factor of an M-input N-output system: received-power
/// weighted mean of each output's parallel waste factor.
double mino_first_stage(std::span<const double> received_powers_w, std::span<const double> w_parallel);

/// Overall W of an M-input N-output system: the first stage cascaded with the
/// bank of parallel receivers described by (w, g).
double mino_compose(double first_stage_w, const Stage& parallel_rx);

}  // namespace wastefactor
