#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "dofcsit/decomposition.hpp"

namespace dofcsit {

enum class SymbolKind {
    Common1,       // c_j: top-power message decoded by both users in one subband
    PrivateUser1,  // u_j: beamformed orthogonal to user 2's channel estimate
    PrivateUser2,  // v_j: beamformed orthogonal to user 1's channel estimate
    Common2,       // u0(i): transmitted in two subbands, decoded once per user
};

enum class PrecoderKind {
    AntennaOne,  // [1, 0]^T, no precoding
    NullUser2,   // unit vector orthogonal to user 2's channel estimate
    NullUser1,   // unit vector orthogonal to user 1's channel estimate
};

const char* to_string(SymbolKind kind);
const char* to_string(PrecoderKind precoder);

/// power_lo sentinel: the symbol's power interval extends down to zero.
inline constexpr double kPowerFloor = -std::numeric_limits<double>::infinity();

/// One layer of a subband's superposition stack. The allocated power is
/// (P^power_hi - P^power_lo) / share, with share 2 for the symbols that
/// split the in-band power budget with a beamformed partner.
struct SymbolSpec {
    SymbolKind kind = SymbolKind::Common1;
    int subband = 0;  // 1-based
    int u0_id = 0;    // message id for Common2, 0 otherwise
    double power_hi = 0.0;
    double power_lo = kPowerFloor;
    int share = 1;
    double rate_prelog = 0.0;
    PrecoderKind precoder = PrecoderKind::AntennaOne;

    std::string label() const;  // "c1", "u2", "v3", "u0(1)"
    double allocated_power(double P) const;
};

/// One SIC step: decode `symbol`, treating `interference` as noise;
/// `known` lists symbols whose values were recovered elsewhere and are
/// subtracted before this subband is processed.
struct DecodeStep {
    int symbol = -1;  // index into TransmissionPlan::symbols
    std::vector<int> interference;
    std::vector<int> known;
};

struct TransmissionPlan {
    CsitProfile profile;   // the balanced profile the stacks are built on
    CsitProfile original;  // as supplied by the caller
    ReducePolicy policy = ReducePolicy::LargestGap;
    U0Schedule schedule;
    int common_owner = 1;  // which user the common-message rate counts for
    std::vector<SymbolSpec> symbols;
    /// decode_order[user-1][subband-1]: SIC steps of that user there.
    std::array<std::vector<std::vector<DecodeStep>>, 2> decode_order;
};

/// Builds the full transmission plan for any valid profile: balancing
/// reduction, ZFBF privates, the layered u0 stack per subband and the
/// leftover top-power common message, plus both users' decode orders.
TransmissionPlan synthesize(const CsitProfile& profile, int common_owner,
                            ReducePolicy policy = ReducePolicy::LargestGap);

/// Rate pre-logs per user, normalized per channel use. Common messages
/// count for the plan's owner; each u0 counts once despite being sent twice.
DofPair rate_accounting(const TransmissionPlan& plan);

struct PlanCheck {
    std::string name;
    std::string where;
    bool pass = true;
    std::string detail;
};

/// Structural checks: per-subband power telescoping, u0 width sums,
/// double transmission of every u0, decode coverage and SIC
/// well-formedness (interference weaker than the decoded layer, after
/// accounting for beamforming nulls at the decoding user).
std::vector<PlanCheck> validate_plan(const TransmissionPlan& plan);

}  // namespace dofcsit
