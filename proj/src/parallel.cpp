#include "wastefactor/parallel.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace wastefactor {

namespace {

void check_weight(double weight, std::size_t index) {
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
        throw std::invalid_argument(fmt::format("branch {}: weight must be finite and >= 0, got {}", index, weight));
    }
}

}  // namespace

double combine_branches(std::span<const Branch> branches, CombiningMode mode) {
    if (branches.empty()) {
        throw std::invalid_argument("combine_branches: no branches");
    }
    double weighted_w = 0.0;
    double sum_weight = 0.0;
    double sum_amplitude = 0.0;
    for (std::size_t i = 0; i < branches.size(); ++i) {
        const double gamma = branches[i].weight;
        check_weight(gamma, i);
        weighted_w += gamma * branches[i].stage.w();
        sum_weight += gamma;
        sum_amplitude += std::sqrt(gamma);
    }
    if (sum_weight <= 0.0) {
        throw std::invalid_argument("combine_branches: all branch weights are zero");
    }
    switch (mode) {
        case CombiningMode::NonCoherent:
            return weighted_w / sum_weight;
        case CombiningMode::Coherent:
            return weighted_w / (sum_amplitude * sum_amplitude);
    }
    throw std::logic_error("combine_branches: unknown combining mode");
}

Stage miso_compose(std::span<const Branch> branches, CombiningMode mode, const Stage& terminal) {
    const double w_parallel = combine_branches(branches, mode);
    return Stage(terminal.w() + (w_parallel - 1.0) / terminal.g(), terminal.g(), terminal.label());
}

double parallel_gain(std::span<const double> received_powers_w, std::span<const double> gains, CombiningMode mode) {
    if (received_powers_w.empty() || received_powers_w.size() != gains.size()) {
        throw std::invalid_argument(fmt::format("parallel_gain: need equal non-empty lists, got {} powers and {} gains",
                                                received_powers_w.size(), gains.size()));
    }
    double sum_p = 0.0;
    double sum_pg = 0.0;
    double sum_amplitude = 0.0;
    for (std::size_t i = 0; i < gains.size(); ++i) {
        const double p = received_powers_w[i];
        const double g = gains[i];
        if (!(p >= 0.0)) throw std::invalid_argument(fmt::format("parallel_gain: power {} is negative", i));
        if (!(g > 0.0)) throw std::invalid_argument(fmt::format("parallel_gain: gain {} must be > 0", i));
        sum_p += p;
        sum_pg += p * g;
        sum_amplitude += std::sqrt(p * g);
    }
    if (sum_p <= 0.0) {
        throw std::invalid_argument("parallel_gain: all received powers are zero");
    }
    switch (mode) {
        case CombiningMode::NonCoherent:
            return sum_pg / sum_p;
        case CombiningMode::Coherent:
            return sum_amplitude * sum_amplitude / sum_p;
    }
    throw std::logic_error("parallel_gain: unknown combining mode");
}

std::vector<double> received_power_matrix(std::span<const double> tx_powers_w,
                                          const std::vector<std::vector<double>>& channel_w,
                                          CombiningMode mode) {
    if (channel_w.size() != tx_powers_w.size()) {
        throw std::invalid_argument(fmt::format("received_power_matrix: {} transmit powers but {} matrix rows",
                                                tx_powers_w.size(), channel_w.size()));
    }
    if (channel_w.empty()) {
        return {};
    }
    const std::size_t n_out = channel_w.front().size();
    std::vector<double> acc(n_out, 0.0);
    for (std::size_t i = 0; i < channel_w.size(); ++i) {
        if (channel_w[i].size() != n_out) {
            throw std::invalid_argument(fmt::format("received_power_matrix: row {} has {} columns, expected {}", i,
                                                    channel_w[i].size(), n_out));
        }
        const double p_t = tx_powers_w[i];
        if (!(p_t >= 0.0)) {
            throw std::invalid_argument(fmt::format("received_power_matrix: transmit power {} is negative", i));
        }
        for (std::size_t j = 0; j < n_out; ++j) {
            const double w = channel_w[i][j];
            if (!(w >= 1.0)) {
                throw std::invalid_argument(fmt::format("received_power_matrix: channel W[{}][{}] = {} < 1", i, j, w));
            }
            const double p = std::isinf(w) ? 0.0 : p_t / w;
            acc[j] += mode == CombiningMode::Coherent ? std::sqrt(p) : p;
        }
    }
    if (mode == CombiningMode::Coherent) {
        for (double& a : acc) a *= a;
    }
    return acc;
}

double mino_first_stage(std::span<const double> received_powers_w, std::span<const double> w_parallel) {
    if (received_powers_w.size() != w_parallel.size()) {
        throw std::invalid_argument("mino_first_stage: list lengths differ");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < w_parallel.size(); ++j) {
        const double p = received_powers_w[j];
        if (!(p >= 0.0)) throw std::invalid_argument(fmt::format("mino_first_stage: power {} is negative", j));
        if (p == 0.0) continue;  // dead output, ignored
        num += p * w_parallel[j];
        den += p;
    }
    if (den <= 0.0) {
        throw std::invalid_argument("mino_first_stage: total received power is zero");
    }
    return num / den;
}

double mino_compose(double first_stage_w, const Stage& parallel_rx) {
    if (!(first_stage_w >= 1.0)) {
        throw std::invalid_argument(fmt::format("mino_compose: first-stage W must be >= 1, got {}", first_stage_w));
    }
    return parallel_rx.w() + (first_stage_w - 1.0) / parallel_rx.g();
}

}  // namespace wastefactor
