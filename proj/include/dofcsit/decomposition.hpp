#pragma once

#include <map>
#include <vector>

#include "dofcsit/csit_profile.hpp"

namespace dofcsit {

/// Channel-use split of one subband into PP / PN / NP / NN subchannel
/// states; the four shares always sum to one channel use.
struct SubchannelUse {
    int subband = 0;  // 1-based
    double pp = 0.0;  // min(a_j, b_j)
    double pn = 0.0;  // a_j - b_j when user 1 is stronger, else 0
    double np = 0.0;  // b_j - a_j when user 2 is stronger, else 0
    double nn = 0.0;  // 1 - max(a_j, b_j)
};

/// One twice-transmitted common message: user 1 decodes it in the donor
/// subband (a > b there), user 2 in the receiver subband (b > a).
struct U0Message {
    int id = 0;  // 1-based generation order
    double rate_prelog = 0.0;
    int donor = 0;
    int receiver = 0;
};

/// The full common-message-II schedule. per_subband[j] lists the message
/// ids carried in subband j from the strongest power layer down; with
/// generation order equal to power order the lists are ascending in id.
struct U0Schedule {
    std::vector<U0Message> messages;
    std::map<int, std::vector<int>> per_subband;
};

enum class ReducePolicy {
    /// Shrink the surplus user's gaps, largest gap first (ties by lower
    /// index), never below min(a_j, b_j).
    LargestGap,
    /// Deepen the deficit-side subbands instead (lowest index first,
    /// floor 0), falling back to the largest-gap shrink for any remainder.
    LowestIndex,
};

const char* to_string(ReducePolicy policy);

/// Balancing reduction of an unequal-average profile: for a_e > b_e the
/// a-qualities are lowered so that the sums match (mirrored on b for
/// a_e < b_e). deltas records the per-subband amount removed.
struct Reduction {
    CsitProfile original;
    CsitProfile reduced;
    std::map<int, double> deltas;
};

std::vector<SubchannelUse> decompose(const CsitProfile& profile);

/// Greedy pairing of residual PN use against NP use: repeatedly match the
/// lowest-index subband with leftover q+ to the lowest-index one with
/// leftover q-, emitting a message of the smaller residual rate.
/// Requires a balanced profile; reduce first otherwise.
U0Schedule pair_u0(const CsitProfile& profile);

Reduction reduce_to_balanced(const CsitProfile& profile,
                             ReducePolicy policy = ReducePolicy::LargestGap);

}  // namespace dofcsit
