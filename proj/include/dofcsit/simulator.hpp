#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "dofcsit/rng.hpp"
#include "dofcsit/scheme.hpp"

namespace dofcsit {

/// One realization of the channels of both users across all subbands.
/// h/g are the true unit-norm channels, h_hat/g_hat the transmitter-side
/// estimates, with estimation error variance P^{-a_j} resp. P^{-b_j}.
struct ChannelDraw {
    std::vector<Eigen::Vector2cd> h, g;
    std::vector<Eigen::Vector2cd> h_hat, g_hat;
    std::vector<double> sigma1_sq, sigma2_sq;
};

struct SimConfig {
    std::vector<double> snr_grid_db;  // strictly ascending
    int trials = 1000;
    std::uint64_t seed = 0;
    int fit_points = 3;  // top-of-grid points used for the slope fit
};

/// Ergodic rate of one message in one decoding context (user, subband).
struct ContextRate {
    int user = 0;
    int subband = 0;
    double rate_bits = 0.0;  // mean over trials of log2(1 + SINR)
    double mean_sinr = 0.0;
};

/// Per-message simulation outcome at one SNR. The deliverable rate is the
/// minimum over the contexts that must decode the message (both users for
/// common messages, one for privates).
struct MessageRate {
    std::string message;
    SymbolKind kind = SymbolKind::Common1;
    double rate_prelog = 0.0;
    double deliverable_rate = 0.0;
    std::vector<ContextRate> contexts;
};

struct SweepResult {
    std::vector<double> snr_grid_db;
    std::vector<std::vector<MessageRate>> per_snr;  // [snr index][message]
    std::vector<double> user1_rate_per_use;         // R_1 / L at each SNR
    std::vector<double> user2_rate_per_use;         // R_2 / L
    DofPair fitted;                                 // least-squares slopes vs log2 P
    std::vector<std::pair<std::string, double>> decode_margin;  // at the top SNR
};

/// Unit vector orthogonal to v: [-conj(v2), conj(v1)] / ||v||.
Eigen::Vector2cd ortho(const Eigen::Vector2cd& v);

/// Draws the channels of one trial: isotropic unit-norm truths, Gaussian
/// estimation errors scaled by the profile's quality exponents at SNR P.
ChannelDraw draw_channels(CounterRng& rng, const CsitProfile& profile, double P);

/// Runs `trials` independent channel draws and walks both users' SIC
/// orders, computing log2(1 + SINR) per decode step with not-yet-decoded,
/// not-known symbols as interference. Results are a pure function of
/// (plan, P, trials, stream_key) for any worker count: trials are summed
/// in fixed-size blocks whose partials are reduced in block order.
std::vector<MessageRate> evaluate_plan(const TransmissionPlan& plan, double P, int trials,
                                       std::uint64_t stream_key, int workers = 1);

/// Evaluates the plan across the SNR grid, attributes common-message rate
/// to the plan's owner, and fits per-user DoF slopes over the top
/// fit_points grid entries.
SweepResult sweep(const TransmissionPlan& plan, const SimConfig& cfg, int workers = 1);

}  // namespace dofcsit
