#include "dofcsit/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

namespace dofcsit {

namespace {

// Trials per summation block. Block partials are reduced in block order,
// which keeps the result bit-identical for any number of workers.
constexpr int kBlock = 256;

struct FlatStep {
    int user;     // 1 or 2
    int subband;  // 1-based
    int symbol;   // index into plan.symbols
    const std::vector<int>* interference;
};

std::vector<FlatStep> flatten(const TransmissionPlan& plan) {
    std::vector<FlatStep> steps;
    for (int user = 1; user <= 2; ++user) {
        for (int j = 1; j <= plan.profile.L; ++j) {
            for (const DecodeStep& s : plan.decode_order[user - 1][j - 1]) {
                steps.push_back({user, j, s.symbol, &s.interference});
            }
        }
    }
    return steps;
}

int precoder_slot(PrecoderKind p) {
    switch (p) {
        case PrecoderKind::AntennaOne: return 0;
        case PrecoderKind::NullUser2: return 1;
        case PrecoderKind::NullUser1: return 2;
    }
    return 0;
}

}  // namespace

Eigen::Vector2cd ortho(const Eigen::Vector2cd& v) {
    const double n = v.norm();
    if (n <= 0.0) throw ZeroVector("cannot take the orthogonal of a zero vector");
    return Eigen::Vector2cd(-std::conj(v(1)) / n, std::conj(v(0)) / n);
}

ChannelDraw draw_channels(CounterRng& rng, const CsitProfile& profile, double P) {
    ChannelDraw d;
    d.h.reserve(profile.L);
    for (int j = 0; j < profile.L; ++j) {
        const double s1 = std::pow(P, -profile.a[j]);
        const double s2 = std::pow(P, -profile.b[j]);
        d.sigma1_sq.push_back(s1);
        d.sigma2_sq.push_back(s2);

        Eigen::Vector2cd h(rng.next_cgauss(), rng.next_cgauss());
        h.normalize();
        Eigen::Vector2cd g(rng.next_cgauss(), rng.next_cgauss());
        g.normalize();
        // Estimate = truth minus an independent error with per-entry
        // variance sigma^2, so E|h^H h_hat_perp|^2 scales as P^{-a_j}.
        const Eigen::Vector2cd h_err =
            std::sqrt(s1) * Eigen::Vector2cd(rng.next_cgauss(), rng.next_cgauss());
        const Eigen::Vector2cd g_err =
            std::sqrt(s2) * Eigen::Vector2cd(rng.next_cgauss(), rng.next_cgauss());
        d.h.push_back(h);
        d.g.push_back(g);
        d.h_hat.push_back(h - h_err);
        d.g_hat.push_back(g - g_err);
    }
    return d;
}

std::vector<MessageRate> evaluate_plan(const TransmissionPlan& plan, double P, int trials,
                                       std::uint64_t stream_key, int workers) {
    if (trials < 1) throw OutOfRange("trials must be >= 1");
    const std::vector<FlatStep> steps = flatten(plan);
    const int n_steps = static_cast<int>(steps.size());
    const int L = plan.profile.L;

    std::vector<double> allocated(plan.symbols.size());
    for (size_t i = 0; i < plan.symbols.size(); ++i) {
        allocated[i] = plan.symbols[i].allocated_power(P);
    }

    const int n_blocks = (trials + kBlock - 1) / kBlock;
    // Per block: n_steps rate sums followed by n_steps SINR sums.
    std::vector<double> partial(static_cast<size_t>(n_blocks) * n_steps * 2, 0.0);

    auto run_block = [&](int block) {
        double* rate_sum = partial.data() + static_cast<size_t>(block) * n_steps * 2;
        double* sinr_sum = rate_sum + n_steps;
        const int t_end = std::min(trials, (block + 1) * kBlock);
        std::vector<double> coef(static_cast<size_t>(2 * L * 3));
        for (int t = block * kBlock; t < t_end; ++t) {
            CounterRng rng(CounterRng::derive(stream_key, 0, static_cast<std::uint64_t>(t)));
            const ChannelDraw draw = draw_channels(rng, plan.original, P);
            // |channel^H precoder|^2 per user, subband and precoder kind.
            for (int j = 0; j < L; ++j) {
                const Eigen::Vector2cd e1(1.0, 0.0);
                const Eigen::Vector2cd w_u = ortho(draw.g_hat[j]);
                const Eigen::Vector2cd w_v = ortho(draw.h_hat[j]);
                for (int user = 0; user < 2; ++user) {
                    const Eigen::Vector2cd& c = user == 0 ? draw.h[j] : draw.g[j];
                    double* slot = &coef[(user * L + j) * 3];
                    slot[0] = std::norm(c.dot(e1));
                    slot[1] = std::norm(c.dot(w_u));
                    slot[2] = std::norm(c.dot(w_v));
                }
            }
            for (int i = 0; i < n_steps; ++i) {
                const FlatStep& step = steps[i];
                const double* slot = &coef[((step.user - 1) * L + step.subband - 1) * 3];
                const SymbolSpec& sym = plan.symbols[step.symbol];
                const double signal = allocated[step.symbol] * slot[precoder_slot(sym.precoder)];
                double denom = 1.0;
                for (int tsym : *step.interference) {
                    denom += allocated[tsym] * slot[precoder_slot(plan.symbols[tsym].precoder)];
                }
                const double sinr = signal / denom;
                rate_sum[i] += std::log2(1.0 + sinr);
                sinr_sum[i] += sinr;
            }
        }
    };

    int n_workers = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    n_workers = std::clamp(n_workers, 1, n_blocks);
    if (n_workers == 1) {
        for (int b = 0; b < n_blocks; ++b) run_block(b);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int w = 0; w < n_workers; ++w) {
            pool.emplace_back([&] {
                for (int b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1)) run_block(b);
            });
        }
        for (std::thread& th : pool) th.join();
    }

    std::vector<double> rate(n_steps, 0.0), sinr(n_steps, 0.0);
    for (int b = 0; b < n_blocks; ++b) {
        const double* rate_sum = partial.data() + static_cast<size_t>(b) * n_steps * 2;
        for (int i = 0; i < n_steps; ++i) {
            rate[i] += rate_sum[i];
            sinr[i] += rate_sum[n_steps + i];
        }
    }

    // Group decode steps into messages; the two transmissions of a u0
    // message fold into one entry with two contexts.
    std::vector<MessageRate> messages;
    std::map<std::string, size_t> by_label;
    for (int i = 0; i < n_steps; ++i) {
        const SymbolSpec& sym = plan.symbols[steps[i].symbol];
        const std::string label = sym.label();
        auto [it, inserted] = by_label.try_emplace(label, messages.size());
        if (inserted) {
            messages.push_back({label, sym.kind, sym.rate_prelog, 0.0, {}});
        }
        messages[it->second].contexts.push_back(
            {steps[i].user, steps[i].subband, rate[i] / trials, sinr[i] / trials});
    }
    for (MessageRate& m : messages) {
        m.deliverable_rate = m.contexts.front().rate_bits;
        for (const ContextRate& c : m.contexts) {
            m.deliverable_rate = std::min(m.deliverable_rate, c.rate_bits);
        }
    }
    return messages;
}

SweepResult sweep(const TransmissionPlan& plan, const SimConfig& cfg, int workers) {
    if (cfg.fit_points < 2) throw GridTooSmall("fit_points must be >= 2");
    if (static_cast<int>(cfg.snr_grid_db.size()) < cfg.fit_points) {
        throw GridTooSmall("SNR grid has " + std::to_string(cfg.snr_grid_db.size()) +
                           " points, need at least " + std::to_string(cfg.fit_points));
    }
    for (size_t i = 1; i < cfg.snr_grid_db.size(); ++i) {
        if (cfg.snr_grid_db[i] <= cfg.snr_grid_db[i - 1]) {
            throw OutOfRange("SNR grid must be strictly ascending");
        }
    }

    SweepResult result;
    result.snr_grid_db = cfg.snr_grid_db;
    for (size_t s = 0; s < cfg.snr_grid_db.size(); ++s) {
        const double P = std::pow(10.0, cfg.snr_grid_db[s] / 10.0);
        const std::uint64_t key = CounterRng::derive(cfg.seed, static_cast<std::uint64_t>(s) + 1);
        result.per_snr.push_back(evaluate_plan(plan, P, cfg.trials, key, workers));

        double r1 = 0.0, r2 = 0.0;
        for (const MessageRate& m : result.per_snr.back()) {
            switch (m.kind) {
                case SymbolKind::PrivateUser1: r1 += m.deliverable_rate; break;
                case SymbolKind::PrivateUser2: r2 += m.deliverable_rate; break;
                case SymbolKind::Common1:
                case SymbolKind::Common2:
                    (plan.common_owner == 1 ? r1 : r2) += m.deliverable_rate;
                    break;
            }
        }
        result.user1_rate_per_use.push_back(r1 / plan.profile.L);
        result.user2_rate_per_use.push_back(r2 / plan.profile.L);
    }

    // Ordinary least squares of R_k/L against log2 P over the last
    // fit_points grid entries; the slope is the empirical DoF.
    const auto fit_slope = [&](const std::vector<double>& y) {
        const size_t n = result.snr_grid_db.size();
        const size_t first = n - static_cast<size_t>(cfg.fit_points);
        double mx = 0.0, my = 0.0;
        for (size_t i = first; i < n; ++i) {
            mx += std::log2(std::pow(10.0, result.snr_grid_db[i] / 10.0));
            my += y[i];
        }
        mx /= cfg.fit_points;
        my /= cfg.fit_points;
        double sxx = 0.0, sxy = 0.0;
        for (size_t i = first; i < n; ++i) {
            const double dx = std::log2(std::pow(10.0, result.snr_grid_db[i] / 10.0)) - mx;
            sxx += dx * dx;
            sxy += dx * (y[i] - my);
        }
        return sxy / sxx;
    };
    result.fitted = {fit_slope(result.user1_rate_per_use), fit_slope(result.user2_rate_per_use)};

    const double log2_p_top = std::log2(std::pow(10.0, result.snr_grid_db.back() / 10.0));
    for (const MessageRate& m : result.per_snr.back()) {
        result.decode_margin.emplace_back(m.message,
                                          m.deliverable_rate - m.rate_prelog * log2_p_top);
    }
    return result;
}

}  // namespace dofcsit
