#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "dofcsit/common.hpp"

namespace dofcsit {

/// CSIT quality profile of a two-user broadcast channel with L subbands.
/// a[j] and b[j] are the quality exponents of user 1 and user 2 in subband
/// j+1: the transmitter-side channel estimate of user k has error variance
/// P^{-a[j]} (resp. P^{-b[j]}), so 1 means perfect CSIT and 0 means none.
struct CsitProfile {
    int L = 0;
    std::vector<double> a;
    std::vector<double> b;
};

/// Per-subband quality gaps and averages. Subband indices are 1-based.
/// plus_set holds subbands where user 1 has strictly better CSIT
/// (a_j > b_j beyond kEqualityTol), minus_set the mirror, equal_set the rest.
struct GapSummary {
    std::vector<int> plus_set;
    std::vector<int> minus_set;
    std::vector<int> equal_set;
    std::map<int, double> q_plus;   // subband -> a_j - b_j, strictly positive
    std::map<int, double> q_minus;  // subband -> b_j - a_j, strictly positive
    double a_mean = 0.0;            // a_e
    double b_mean = 0.0;            // b_e
};

enum class ProblemKind {
    Balanced,      // a_e = b_e (the P_L class)
    SurplusUser1,  // a_e > b_e (Q_L+)
    SurplusUser2,  // a_e < b_e (Q_L-)
};

const char* to_string(ProblemKind kind);

/// Partition of {1..L} into balanced groups, each solvable independently.
/// exhaustive is false when L exceeded the subset-search budget and the
/// trivial single-group partition was returned instead.
struct BalancedPartition {
    std::vector<std::vector<int>> groups;
    bool exhaustive = true;
};

struct ProblemClass {
    ProblemKind kind = ProblemKind::Balanced;
    std::optional<BalancedPartition> balanced_partition;
};

/// Checks lengths and [0,1] ranges and returns the profile. Values within
/// kEqualityTol outside [0,1] are clamped; anything further is rejected.
CsitProfile validate_profile(int L, std::span<const double> a, std::span<const double> b);

GapSummary gaps(const CsitProfile& profile);

ProblemClass classify(const CsitProfile& profile);

/// Splits a balanced profile into minimal balanced groups (sum of a equals
/// sum of b within kBalanceTol, no proper balanced subset) by exhaustive
/// subset search, smallest subsets first, lexicographic within a size.
/// Throws NotBalanced on an unbalanced profile.
BalancedPartition split_separable(const CsitProfile& profile);

}  // namespace dofcsit
