#include "dofcsit/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dofcsit {

namespace {

bool is_present(double rate) { return rate > kEqualityTol; }

// Power exponent of symbol t as seen by user `user` in its subband:
// beamforming orthogonal to that user's channel estimate pushes the
// received power down by the estimate's quality exponent.
double effective_exponent(const SymbolSpec& t, int user, const CsitProfile& original) {
    const int jj = t.subband - 1;
    if (user == 1 && t.precoder == PrecoderKind::NullUser1) return t.power_hi - original.a[jj];
    if (user == 2 && t.precoder == PrecoderKind::NullUser2) return t.power_hi - original.b[jj];
    return t.power_hi;
}

struct SubbandSymbols {
    int common1 = -1;
    int private_u = -1;
    int private_v = -1;
    std::vector<int> u0_layers;  // top of the stack first
};

std::vector<SubbandSymbols> index_by_subband(const TransmissionPlan& plan) {
    std::vector<SubbandSymbols> out(plan.profile.L);
    for (int i = 0; i < static_cast<int>(plan.symbols.size()); ++i) {
        const SymbolSpec& s = plan.symbols[i];
        SubbandSymbols& slot = out[s.subband - 1];
        switch (s.kind) {
            case SymbolKind::Common1: slot.common1 = i; break;
            case SymbolKind::PrivateUser1: slot.private_u = i; break;
            case SymbolKind::PrivateUser2: slot.private_v = i; break;
            case SymbolKind::Common2: slot.u0_layers.push_back(i); break;
        }
    }
    return out;
}

}  // namespace

const char* to_string(SymbolKind kind) {
    switch (kind) {
        case SymbolKind::Common1: return "common1";
        case SymbolKind::PrivateUser1: return "private_user1";
        case SymbolKind::PrivateUser2: return "private_user2";
        case SymbolKind::Common2: return "common2";
    }
    return "unknown";
}

const char* to_string(PrecoderKind precoder) {
    switch (precoder) {
        case PrecoderKind::AntennaOne: return "antenna1";
        case PrecoderKind::NullUser2: return "null_user2";
        case PrecoderKind::NullUser1: return "null_user1";
    }
    return "unknown";
}

std::string SymbolSpec::label() const {
    switch (kind) {
        case SymbolKind::Common1: return "c" + std::to_string(subband);
        case SymbolKind::PrivateUser1: return "u" + std::to_string(subband);
        case SymbolKind::PrivateUser2: return "v" + std::to_string(subband);
        case SymbolKind::Common2: return "u0(" + std::to_string(u0_id) + ")";
    }
    return "?";
}

double SymbolSpec::allocated_power(double P) const {
    const double lo = power_lo == kPowerFloor ? 0.0 : std::pow(P, power_lo);
    return (std::pow(P, power_hi) - lo) / share;
}

TransmissionPlan synthesize(const CsitProfile& profile, int common_owner, ReducePolicy policy) {
    if (common_owner != 1 && common_owner != 2) {
        throw OutOfRange("common_owner must be 1 or 2");
    }
    TransmissionPlan plan;
    Reduction reduction = reduce_to_balanced(profile, policy);
    plan.original = std::move(reduction.original);
    plan.profile = std::move(reduction.reduced);
    plan.policy = policy;
    plan.common_owner = common_owner;
    plan.schedule = pair_u0(plan.profile);

    const GapSummary g = gaps(plan.profile);
    const auto side_of = [&](int subband) {
        if (g.q_plus.count(subband)) return +1;
        if (g.q_minus.count(subband)) return -1;
        return 0;
    };

    for (int j = 1; j <= plan.profile.L; ++j) {
        const double aj = plan.profile.a[j - 1];
        const double bj = plan.profile.b[j - 1];
        const double top = std::max(aj, bj);

        if (is_present(1.0 - top)) {
            plan.symbols.push_back({SymbolKind::Common1, j, 0, 1.0, top, 1, 1.0 - top,
                                    PrecoderKind::AntennaOne});
        }
        // u0 stack, strongest layer first, from the top of the in-band power.
        double hi = top;
        if (auto it = plan.schedule.per_subband.find(j); it != plan.schedule.per_subband.end()) {
            for (int id : it->second) {
                const double width = plan.schedule.messages[id - 1].rate_prelog;
                plan.symbols.push_back({SymbolKind::Common2, j, id, hi, hi - width, 2, width,
                                        PrecoderKind::AntennaOne});
                hi -= width;
            }
        }
        if (is_present(bj)) {
            plan.symbols.push_back({SymbolKind::PrivateUser1, j, 0, bj, kPowerFloor, 2, bj,
                                    PrecoderKind::NullUser2});
        }
        if (is_present(aj)) {
            plan.symbols.push_back({SymbolKind::PrivateUser2, j, 0, aj, kPowerFloor, 2, aj,
                                    PrecoderKind::NullUser1});
        }
    }

    const std::vector<SubbandSymbols> by_subband = index_by_subband(plan);
    for (int user = 1; user <= 2; ++user) {
        auto& per_user = plan.decode_order[user - 1];
        per_user.resize(plan.profile.L);
        for (int j = 1; j <= plan.profile.L; ++j) {
            const SubbandSymbols& slot = by_subband[j - 1];
            const int own = user == 1 ? slot.private_u : slot.private_v;
            const int other = user == 1 ? slot.private_v : slot.private_u;
            const bool capable = side_of(j) == (user == 1 ? +1 : -1);
            std::vector<DecodeStep>& steps = per_user[j - 1];

            std::vector<int> pending;  // not yet decoded, in stack order
            if (slot.common1 >= 0) pending.push_back(slot.common1);
            pending.insert(pending.end(), slot.u0_layers.begin(), slot.u0_layers.end());
            if (own >= 0) pending.push_back(own);

            auto interference_after = [&](size_t step_idx) {
                std::vector<int> interf(pending.begin() + step_idx + 1, pending.end());
                if (other >= 0) interf.push_back(other);
                return interf;
            };

            for (size_t i = 0; i < pending.size(); ++i) {
                const SymbolSpec& sym = plan.symbols[pending[i]];
                if (sym.kind == SymbolKind::Common2 && !capable) continue;
                DecodeStep step;
                step.symbol = pending[i];
                step.interference = interference_after(i);
                if (!capable && sym.kind != SymbolKind::Common1) {
                    // Own private on the weaker side: the u0 values were
                    // recovered in this user's capable subbands already.
                    step.known = slot.u0_layers;
                }
                steps.push_back(std::move(step));
            }
        }
    }
    return plan;
}

DofPair rate_accounting(const TransmissionPlan& plan) {
    double privates_user1 = 0.0, privates_user2 = 0.0, common1 = 0.0;
    for (const SymbolSpec& s : plan.symbols) {
        if (s.kind == SymbolKind::PrivateUser1) privates_user1 += s.rate_prelog;
        if (s.kind == SymbolKind::PrivateUser2) privates_user2 += s.rate_prelog;
        if (s.kind == SymbolKind::Common1) common1 += s.rate_prelog;
    }
    double common2 = 0.0;
    for (const U0Message& m : plan.schedule.messages) common2 += m.rate_prelog;

    const double L = plan.profile.L;
    const double commons = common1 + common2;
    DofPair d;
    d.d1 = (privates_user1 + (plan.common_owner == 1 ? commons : 0.0)) / L;
    d.d2 = (privates_user2 + (plan.common_owner == 2 ? commons : 0.0)) / L;
    return d;
}

std::vector<PlanCheck> validate_plan(const TransmissionPlan& plan) {
    std::vector<PlanCheck> checks;
    const std::vector<SubbandSymbols> by_subband = index_by_subband(plan);
    const GapSummary g = gaps(plan.profile);
    char buf[160];

    for (int j = 1; j <= plan.profile.L; ++j) {
        const SubbandSymbols& slot = by_subband[j - 1];
        const double aj = plan.profile.a[j - 1];
        const double bj = plan.profile.b[j - 1];

        // Power telescoping: the stack uses the full budget P, up to the
        // constant-power bottom privates that were omitted at zero rate
        // (an absent private would carry P^0 / 2).
        PlanCheck power{"power_telescoping", "subband " + std::to_string(j), true, ""};
        const double missing = (is_present(bj) ? 0.0 : 0.5) + (is_present(aj) ? 0.0 : 0.5);
        for (double P : {7.0, 320.0}) {
            double total = 0.0;
            for (const SymbolSpec& s : plan.symbols) {
                if (s.subband == j) total += s.allocated_power(P);
            }
            if (std::abs(total + missing - P) > kBalanceTol * P) {
                power.pass = false;
                std::snprintf(buf, sizeof buf, "allocated %.12g of budget %.12g at P=%g",
                              total + missing, P, P);
                power.detail = buf;
            }
        }
        checks.push_back(power);

        // u0 widths must fill the quality gap exactly.
        PlanCheck tau{"u0_width_sum", "subband " + std::to_string(j), true, ""};
        double width_sum = 0.0;
        for (int idx : slot.u0_layers) width_sum += plan.symbols[idx].rate_prelog;
        if (std::abs(width_sum - std::abs(aj - bj)) > kBalanceTol) {
            tau.pass = false;
            std::snprintf(buf, sizeof buf, "widths sum to %.12g, gap is %.12g", width_sum,
                          std::abs(aj - bj));
            tau.detail = buf;
        }
        checks.push_back(tau);
    }

    // Every u0 message appears in exactly two subbands, one per side.
    for (const U0Message& m : plan.schedule.messages) {
        PlanCheck twice{"u0_double_transmission", "u0(" + std::to_string(m.id) + ")", true, ""};
        int plus_hits = 0, minus_hits = 0, other_hits = 0;
        for (const SymbolSpec& s : plan.symbols) {
            if (s.kind != SymbolKind::Common2 || s.u0_id != m.id) continue;
            if (g.q_plus.count(s.subband)) ++plus_hits;
            else if (g.q_minus.count(s.subband)) ++minus_hits;
            else ++other_hits;
        }
        if (plus_hits != 1 || minus_hits != 1 || other_hits != 0) {
            twice.pass = false;
            std::snprintf(buf, sizeof buf, "%d transmissions on the a>b side, %d on the b>a side",
                          plus_hits, minus_hits);
            twice.detail = buf;
        }
        checks.push_back(twice);
    }

    // SIC well-formedness per user and subband.
    for (int user = 1; user <= 2; ++user) {
        for (int j = 1; j <= plan.profile.L; ++j) {
            PlanCheck sic{"decode_order", "user " + std::to_string(user) + ", subband " +
                          std::to_string(j), true, ""};
            std::set<int> done;
            for (const DecodeStep& step : plan.decode_order[user - 1][j - 1]) {
                const SymbolSpec& sym = plan.symbols[step.symbol];
                const double threshold =
                    sym.power_lo == kPowerFloor ? 0.0 : std::max(sym.power_lo, 0.0);
                std::set<int> known(step.known.begin(), step.known.end());
                std::set<int> interf(step.interference.begin(), step.interference.end());
                for (int t = 0; t < static_cast<int>(plan.symbols.size()); ++t) {
                    if (plan.symbols[t].subband != j || t == step.symbol) continue;
                    if (done.count(t) || known.count(t)) continue;
                    if (!interf.count(t)) {
                        sic.pass = false;
                        sic.detail = plan.symbols[t].label() + " unaccounted while decoding " +
                                     sym.label();
                        continue;
                    }
                    const double eff = effective_exponent(plan.symbols[t], user, plan.original);
                    if (eff > threshold + kBalanceTol) {
                        sic.pass = false;
                        std::snprintf(buf, sizeof buf,
                                      "%s at exponent %.6g masks %s (decodable above %.6g)",
                                      plan.symbols[t].label().c_str(), eff, sym.label().c_str(),
                                      threshold);
                        sic.detail = buf;
                    }
                }
                done.insert(step.symbol);
            }
            checks.push_back(sic);
        }
    }

    // Decode coverage: both users decode every common message; each user
    // decodes every private intended for it.
    PlanCheck coverage{"decode_coverage", "plan", true, ""};
    for (int user = 1; user <= 2; ++user) {
        std::set<int> decoded;
        for (const auto& steps : plan.decode_order[user - 1]) {
            for (const DecodeStep& step : steps) decoded.insert(step.symbol);
        }
        for (int i = 0; i < static_cast<int>(plan.symbols.size()); ++i) {
            const SymbolKind kind = plan.symbols[i].kind;
            const bool needed =
                kind == SymbolKind::Common1 ||
                (kind == SymbolKind::Common2 &&
                 ((user == 1 && g.q_plus.count(plan.symbols[i].subband)) ||
                  (user == 2 && g.q_minus.count(plan.symbols[i].subband)))) ||
                (user == 1 && kind == SymbolKind::PrivateUser1) ||
                (user == 2 && kind == SymbolKind::PrivateUser2);
            if (needed && !decoded.count(i)) {
                coverage.pass = false;
                coverage.detail = plan.symbols[i].label() + " never decoded by user " +
                                  std::to_string(user);
            }
        }
    }
    checks.push_back(coverage);
    return checks;
}

}  // namespace dofcsit
