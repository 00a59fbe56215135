#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>

#include "dofcsit/region.hpp"
#include "dofcsit/scheme.hpp"
#include "dofcsit/simulator.hpp"

namespace dofcsit::io {

using ordered_json = nlohmann::ordered_json;

/// Rounds through a 15-significant-digit decimal representation, the
/// precision every file format uses. Decimal inputs survive unchanged.
double dec15(double v);

/// "%.15g" with a "." decimal point regardless of locale.
std::string fmt15(double v);

CsitProfile profile_from_json(const ordered_json& j);
ordered_json profile_to_json(const CsitProfile& profile);

/// Reads a profile document ({"L": n, "a": [...], "b": [...]}); throws
/// ParseError with the offending file and field on malformed input.
CsitProfile load_profile(const std::filesystem::path& path);
void save_profile(const CsitProfile& profile, const std::filesystem::path& path);

/// Region + weights + classification + composition-identity residual.
ordered_json region_report(const CsitProfile& profile);

/// Subchannel decomposition, balancing reduction and u0 schedule.
ordered_json decompose_report(const CsitProfile& profile, ReducePolicy policy);

ordered_json plan_to_json(const TransmissionPlan& plan);
ordered_json checks_to_json(const std::vector<PlanCheck>& checks);

/// CSV with one row per (snr_db, message, decode context).
std::string sweep_csv(const SweepResult& result);

/// Fitted slopes vs the plan's analytic targets, and per-message margins.
ordered_json sweep_summary(const TransmissionPlan& plan, const SweepResult& result,
                           double slope_tol);

/// One comparison row of the two-subband sum-DoF formulas.
struct CompareRow {
    double alpha = 0.0;
    double beta = 0.0;
    double d_sub = 0.0;
    double d_opt = 0.0;
    double gap = 0.0;
    bool strict_gap_region = false;  // 3*beta - alpha > 2
};

std::vector<CompareRow> compare_grid(double step);
std::string compare_csv(const std::vector<CompareRow>& rows);

// Command runners behind the CLI; each writes machine-readable output to
// `out`, prints a short human summary to stdout, and returns the process
// exit code (0 iff all internal checks pass).
int cmd_region(const std::filesystem::path& profile, const std::filesystem::path& out);
int cmd_decompose(const std::filesystem::path& profile, const std::filesystem::path& out,
                  ReducePolicy policy);
int cmd_synth(const std::filesystem::path& profile, int owner, ReducePolicy policy,
              const std::filesystem::path& out);
int cmd_simulate(const std::filesystem::path& profile, int owner, ReducePolicy policy,
                 const SimConfig& cfg, const std::filesystem::path& out_csv, int workers = 0);
int cmd_compare(double step, const std::string& pairs, const std::filesystem::path& out);

}  // namespace dofcsit::io
