#include "dofcsit/region.hpp"

#include <algorithm>
#include <cmath>

namespace dofcsit {

namespace {

// Polygon for d1, d2 <= box and d1 + d2 <= sum_cap in the nonnegative
// quadrant, counterclockwise from the origin, duplicates merged.
DofRegion make_region(double box, double sum_cap) {
    DofRegion r;
    r.min_avg = sum_cap - box;
    r.halfplanes = {HalfPlane{1.0, 0.0, box}, HalfPlane{0.0, 1.0, box},
                    HalfPlane{1.0, 1.0, sum_cap}};
    const double cut = std::clamp(sum_cap - box, 0.0, box);
    const DofPair candidates[] = {
        {0.0, 0.0}, {box, 0.0}, {box, cut}, {cut, box}, {0.0, box}};
    for (const DofPair& v : candidates) {
        if (!r.vertices.empty()) {
            const DofPair& last = r.vertices.back();
            if (std::abs(last.d1 - v.d1) <= kEqualityTol && std::abs(last.d2 - v.d2) <= kEqualityTol)
                continue;
        }
        r.vertices.push_back(v);
    }
    return r;
}

double check_order(double alpha, double beta) {
    if (beta < alpha) {
        throw OrderViolation("expected alpha <= beta, got alpha = " + std::to_string(alpha) +
                             ", beta = " + std::to_string(beta));
    }
    return beta - alpha;
}

}  // namespace

DofRegion dof_region(const CsitProfile& profile) {
    const GapSummary g = gaps(profile);
    return make_region(1.0, 1.0 + std::min(g.a_mean, g.b_mean));
}

bool contains(const DofRegion& region, DofPair point, double tol) {
    if (point.d1 < -tol || point.d2 < -tol) return false;
    for (const HalfPlane& h : region.halfplanes) {
        if (h.a * point.d1 + h.b * point.d2 > h.rhs + tol) return false;
    }
    return true;
}

Weights weights(const CsitProfile& profile) {
    const GapSummary g = gaps(profile);
    Weights w;
    double max_sum = 0.0;
    for (int j = 0; j < profile.L; ++j) {
        w.r_bar += std::min(profile.a[j], profile.b[j]);
        max_sum += std::max(profile.a[j], profile.b[j]);
    }
    double q_plus_sum = 0.0, q_minus_sum = 0.0;
    for (const auto& [subband, q] : g.q_plus) q_plus_sum += q;
    for (const auto& [subband, q] : g.q_minus) q_minus_sum += q;
    w.r_hat = 2.0 * std::min(q_plus_sum, q_minus_sum);
    w.r_hat_prime = std::abs(q_plus_sum - q_minus_sum);
    w.r_tilde = profile.L - max_sum + w.r_hat_prime;
    return w;
}

DofRegion compose_weighted(const Weights& w, int L) {
    for (double v : {w.r_bar, w.r_hat, w.r_tilde, w.r_hat_prime}) {
        if (v < -kEqualityTol) throw NegativeWeight("weights must be nonnegative");
    }
    // Support-function sum of the scaled basis regions: the per-user cap is
    // (r_bar + r_hat + r_tilde)/L and the sum cap 2*r_bar/L + 1.5*r_hat/L
    // + r_tilde/L, which collapses to box + (r_bar + r_hat/2)/L.
    const double box = (w.r_bar + w.r_hat + w.r_tilde) / L;
    const double sum_cap = (2.0 * w.r_bar + 1.5 * w.r_hat + w.r_tilde) / L;
    return make_region(box, sum_cap);
}

double sum_dof_optimal(double alpha, double beta) {
    check_order(alpha, beta);
    return (2.0 + alpha + beta) / 2.0;
}

double sum_dof_suboptimal(double alpha, double beta) {
    const double gap = check_order(alpha, beta);
    const double fdma_use = std::max(2.0 - 3.0 * beta + alpha, 0.0);
    return (2.0 * beta + 2.0 * alpha + 2.0 * gap + fdma_use) / (3.0 * beta - alpha + fdma_use);
}

}  // namespace dofcsit
