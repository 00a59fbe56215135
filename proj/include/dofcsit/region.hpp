#pragma once

#include <array>
#include <vector>

#include "dofcsit/csit_profile.hpp"

namespace dofcsit {

/// Halfplane constraint a*d1 + b*d2 <= rhs.
struct HalfPlane {
    double a = 0.0;
    double b = 0.0;
    double rhs = 0.0;
};

/// The optimal DoF region of a profile: d1 <= 1, d2 <= 1 and
/// d1 + d2 <= 1 + min(a_e, b_e), intersected with the nonnegative quadrant.
/// Vertices are kept counterclockwise from the origin with degenerate
/// corners merged; the halfplane list and the vertex list are redundant
/// representations of the same polygon.
struct DofRegion {
    double min_avg = 0.0;
    std::array<HalfPlane, 3> halfplanes{};
    std::vector<DofPair> vertices;
};

/// Channel-use weights of the PP / alternating PN-NP / NN subchannel
/// classes. r_hat_prime is the one-sided PN (or NP) leftover that gets
/// merged into the NN share, so r_bar + r_hat + r_tilde = L.
struct Weights {
    double r_bar = 0.0;
    double r_hat = 0.0;
    double r_tilde = 0.0;
    double r_hat_prime = 0.0;
};

DofRegion dof_region(const CsitProfile& profile);

bool contains(const DofRegion& region, DofPair point, double tol);

Weights weights(const CsitProfile& profile);

/// Rebuilds the region as the weighted (Minkowski) sum of the three basis
/// regions: the unit square, the 3/2-sum triangle and the simplex, scaled
/// by r_bar/L, r_hat/L and r_tilde/L. Equals dof_region(profile) whenever
/// the weights came from weights(profile). (r_bar + r_hat/2)/L is the
/// fraction of channel use on which exactly one user's CSIT is
/// effectively perfect, which is what the sum-rate bound rides on.
DofRegion compose_weighted(const Weights& w, int L);

/// Sum DoF of the optimal two-subband scheme with swapped qualities
/// (a1 = b2 = beta, a2 = b1 = alpha): (2 + alpha + beta) / 2.
double sum_dof_optimal(double alpha, double beta);

/// Sum DoF of the earlier scheme that retransmits overheard symbols in
/// extra channel uses; strictly below sum_dof_optimal when 3*beta - alpha > 2.
double sum_dof_suboptimal(double alpha, double beta);

}  // namespace dofcsit
