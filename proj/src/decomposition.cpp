#include "dofcsit/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dofcsit {

namespace {

// Residuals below this are treated as exhausted; repeated subtraction of
// decimal-grid gaps cannot accumulate error anywhere near it.
constexpr double kResidualTol = 1e-12;

struct Surplus {
    // View of the profile with `strong` the user whose qualities get
    // reduced (a for Q+, b for Q-).
    std::vector<double>* strong;
    const std::vector<double>* weak;
    double total;  // sum(strong) - sum(weak), > 0
};

void shrink_largest_gap(Surplus& s, std::map<int, double>& deltas) {
    const int L = static_cast<int>(s.strong->size());
    std::vector<int> order(L);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        return (*s.strong)[i] - (*s.weak)[i] > (*s.strong)[j] - (*s.weak)[j];
    });
    for (int j : order) {
        if (s.total <= kResidualTol) break;
        const double floor = std::min((*s.strong)[j], (*s.weak)[j]);
        const double take = std::min(s.total, (*s.strong)[j] - floor);
        if (take <= 0.0) continue;
        (*s.strong)[j] -= take;
        deltas[j + 1] += take;
        s.total -= take;
    }
}

void deepen_lowest_index(Surplus& s, std::map<int, double>& deltas) {
    const int L = static_cast<int>(s.strong->size());
    for (int j = 0; j < L && s.total > kResidualTol; ++j) {
        if ((*s.strong)[j] - (*s.weak)[j] >= -kEqualityTol) continue;  // not a deficit subband
        const double take = std::min(s.total, (*s.strong)[j]);
        if (take <= 0.0) continue;
        (*s.strong)[j] -= take;
        deltas[j + 1] += take;
        s.total -= take;
    }
}

}  // namespace

const char* to_string(ReducePolicy policy) {
    switch (policy) {
        case ReducePolicy::LargestGap: return "largest-gap";
        case ReducePolicy::LowestIndex: return "lowest-index";
    }
    return "unknown";
}

std::vector<SubchannelUse> decompose(const CsitProfile& profile) {
    const GapSummary g = gaps(profile);
    std::vector<SubchannelUse> uses;
    uses.reserve(profile.L);
    for (int j = 0; j < profile.L; ++j) {
        SubchannelUse u;
        u.subband = j + 1;
        u.pp = std::min(profile.a[j], profile.b[j]);
        if (auto it = g.q_plus.find(j + 1); it != g.q_plus.end()) u.pn = it->second;
        if (auto it = g.q_minus.find(j + 1); it != g.q_minus.end()) u.np = it->second;
        u.nn = 1.0 - std::max(profile.a[j], profile.b[j]);
        uses.push_back(u);
    }
    return uses;
}

U0Schedule pair_u0(const CsitProfile& profile) {
    const GapSummary g = gaps(profile);
    if (std::abs(g.a_mean - g.b_mean) > kEqualityTol) {
        throw Unbalanced("pair_u0 requires equal average qualities; reduce first");
    }

    std::map<int, double> plus = g.q_plus;    // residual q+ by subband
    std::map<int, double> minus = g.q_minus;  // residual q- by subband

    U0Schedule schedule;
    int next_id = 1;
    while (!plus.empty() && !minus.empty()) {
        auto donor = plus.begin();
        auto receiver = minus.begin();
        U0Message msg;
        msg.id = next_id++;
        msg.rate_prelog = std::min(donor->second, receiver->second);
        msg.donor = donor->first;
        msg.receiver = receiver->first;
        schedule.per_subband[msg.donor].push_back(msg.id);
        schedule.per_subband[msg.receiver].push_back(msg.id);
        schedule.messages.push_back(msg);

        donor->second -= msg.rate_prelog;
        receiver->second -= msg.rate_prelog;
        if (donor->second <= kResidualTol) plus.erase(donor);
        if (receiver->second <= kResidualTol) minus.erase(receiver);
    }
    return schedule;
}

Reduction reduce_to_balanced(const CsitProfile& profile, ReducePolicy policy) {
    const GapSummary g = gaps(profile);
    Reduction r;
    r.original = profile;
    r.reduced = profile;
    if (std::abs(g.a_mean - g.b_mean) <= kEqualityTol) return r;

    const bool user1_surplus = g.a_mean > g.b_mean;
    Surplus s{user1_surplus ? &r.reduced.a : &r.reduced.b,
              user1_surplus ? &r.reduced.b : &r.reduced.a,
              std::abs(g.a_mean - g.b_mean) * profile.L};

    if (policy == ReducePolicy::LowestIndex) deepen_lowest_index(s, r.deltas);
    shrink_largest_gap(s, r.deltas);
    if (s.total > kBalanceTol) {
        throw InternalImbalance("reduction left unconsumed surplus " + std::to_string(s.total));
    }
    return r;
}

}  // namespace dofcsit
