#include "dofcsit/csit_profile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dofcsit {

namespace {

constexpr int kMaxExhaustiveLen = 20;

double clamp_quality(double v, int subband, char user) {
    if (v >= -kEqualityTol && v < 0.0) return 0.0;
    if (v > 1.0 && v <= 1.0 + kEqualityTol) return 1.0;
    if (!(v >= 0.0 && v <= 1.0)) {
        throw OutOfRange("quality " + std::string(1, user) + "_" + std::to_string(subband) +
                         " = " + std::to_string(v) + " outside [0, 1]");
    }
    return v;
}

double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Signed a-vs-b imbalance of an index subset (0-based indices).
double subset_imbalance(const CsitProfile& p, const std::vector<int>& subset) {
    double s = 0.0;
    for (int i : subset) s += p.a[i] - p.b[i];
    return s;
}

// Visits k-element combinations of {0..n-1} in lexicographic order.
// Returns false once all combinations are exhausted.
bool next_combination(std::vector<int>& c, int n) {
    int k = static_cast<int>(c.size());
    for (int i = k - 1; i >= 0; --i) {
        if (c[i] < n - (k - i)) {
            ++c[i];
            for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

const char* to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::Balanced: return "balanced";
        case ProblemKind::SurplusUser1: return "surplus-user1";
        case ProblemKind::SurplusUser2: return "surplus-user2";
    }
    return "unknown";
}

CsitProfile validate_profile(int L, std::span<const double> a, std::span<const double> b) {
    if (L < 1) throw LengthMismatch("subband count must be >= 1, got " + std::to_string(L));
    if (static_cast<int>(a.size()) != L || static_cast<int>(b.size()) != L) {
        throw LengthMismatch("expected " + std::to_string(L) + " qualities per user, got " +
                             std::to_string(a.size()) + " and " + std::to_string(b.size()));
    }
    CsitProfile p;
    p.L = L;
    p.a.resize(L);
    p.b.resize(L);
    for (int j = 0; j < L; ++j) {
        p.a[j] = clamp_quality(a[j], j + 1, 'a');
        p.b[j] = clamp_quality(b[j], j + 1, 'b');
    }
    return p;
}

GapSummary gaps(const CsitProfile& profile) {
    GapSummary g;
    for (int j = 0; j < profile.L; ++j) {
        const double diff = profile.a[j] - profile.b[j];
        const int subband = j + 1;
        if (diff > kEqualityTol) {
            g.plus_set.push_back(subband);
            g.q_plus[subband] = diff;
        } else if (diff < -kEqualityTol) {
            g.minus_set.push_back(subband);
            g.q_minus[subband] = -diff;
        } else {
            g.equal_set.push_back(subband);
        }
    }
    g.a_mean = mean(profile.a);
    g.b_mean = mean(profile.b);
    return g;
}

ProblemClass classify(const CsitProfile& profile) {
    const GapSummary g = gaps(profile);
    ProblemClass c;
    if (std::abs(g.a_mean - g.b_mean) <= kEqualityTol) {
        c.kind = ProblemKind::Balanced;
        c.balanced_partition = split_separable(profile);
    } else if (g.a_mean > g.b_mean) {
        c.kind = ProblemKind::SurplusUser1;
    } else {
        c.kind = ProblemKind::SurplusUser2;
    }
    return c;
}

BalancedPartition split_separable(const CsitProfile& profile) {
    const GapSummary g = gaps(profile);
    if (std::abs(g.a_mean - g.b_mean) > kEqualityTol) {
        throw NotBalanced("split_separable requires equal average qualities");
    }

    BalancedPartition result;
    if (profile.L > kMaxExhaustiveLen) {
        std::vector<int> all(profile.L);
        std::iota(all.begin(), all.end(), 1);
        result.groups.push_back(std::move(all));
        result.exhaustive = false;
        return result;
    }

    std::vector<int> remaining(profile.L);  // 0-based
    std::iota(remaining.begin(), remaining.end(), 0);

    while (!remaining.empty()) {
        const int m = static_cast<int>(remaining.size());
        std::vector<int> group;  // 0-based indices into the profile
        for (int size = 1; size <= m && group.empty(); ++size) {
            std::vector<int> comb(size);
            std::iota(comb.begin(), comb.end(), 0);
            do {
                std::vector<int> candidate(size);
                for (int i = 0; i < size; ++i) candidate[i] = remaining[comb[i]];
                if (std::abs(subset_imbalance(profile, candidate)) <= kBalanceTol) {
                    group = std::move(candidate);
                    break;
                }
            } while (next_combination(comb, m));
        }
        // The remaining set itself is balanced, so the search cannot come up
        // empty; keep a fallback against tolerance stacking anyway.
        if (group.empty()) group = remaining;

        std::vector<int> one_based(group.size());
        std::transform(group.begin(), group.end(), one_based.begin(), [](int i) { return i + 1; });
        result.groups.push_back(std::move(one_based));

        std::vector<int> rest;
        rest.reserve(remaining.size() - group.size());
        for (int i : remaining) {
            if (std::find(group.begin(), group.end(), i) == group.end()) rest.push_back(i);
        }
        remaining = std::move(rest);
    }
    return result;
}

}  // namespace dofcsit
