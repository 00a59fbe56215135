#include "dofcsit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace dofcsit::io {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw Error("write failed: " + path.string());
}

ordered_json vertices_json(const DofRegion& region) {
    ordered_json verts = ordered_json::array();
    for (const DofPair& v : region.vertices) {
        verts.push_back({dec15(v.d1), dec15(v.d2)});
    }
    return verts;
}

ordered_json schedule_json(const U0Schedule& schedule) {
    ordered_json msgs = ordered_json::array();
    for (const U0Message& m : schedule.messages) {
        msgs.push_back({{"id", m.id},
                        {"rate_prelog", dec15(m.rate_prelog)},
                        {"donor", m.donor},
                        {"receiver", m.receiver}});
    }
    ordered_json stacks = ordered_json::object();
    for (const auto& [subband, ids] : schedule.per_subband) {
        stacks[std::to_string(subband)] = ids;
    }
    return {{"messages", std::move(msgs)}, {"per_subband", std::move(stacks)}};
}

}  // namespace

double dec15(double v) { return std::strtod(fmt15(v).c_str(), nullptr); }

std::string fmt15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

CsitProfile profile_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("L") || !j.contains("a") || !j.contains("b")) {
        throw ParseError("profile document needs fields L, a and b");
    }
    try {
        const int L = j.at("L").get<int>();
        const auto a = j.at("a").get<std::vector<double>>();
        const auto b = j.at("b").get<std::vector<double>>();
        return validate_profile(L, a, b);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed profile field: ") + e.what());
    }
}

ordered_json profile_to_json(const CsitProfile& profile) {
    ordered_json a = ordered_json::array(), b = ordered_json::array();
    for (double v : profile.a) a.push_back(dec15(v));
    for (double v : profile.b) b.push_back(dec15(v));
    return {{"L", profile.L}, {"a", std::move(a)}, {"b", std::move(b)}};
}

CsitProfile load_profile(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open profile file " + path.string());
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    try {
        return profile_from_json(j);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void save_profile(const CsitProfile& profile, const std::filesystem::path& path) {
    write_text(path, profile_to_json(profile).dump(2) + "\n");
}

ordered_json region_report(const CsitProfile& profile) {
    const DofRegion region = dof_region(profile);
    const Weights w = weights(profile);
    const DofRegion composed = compose_weighted(w, profile.L);
    const ProblemClass cls = classify(profile);

    double residual = 0.0;
    for (size_t i = 0; i < std::max(region.vertices.size(), composed.vertices.size()); ++i) {
        if (i >= region.vertices.size() || i >= composed.vertices.size()) {
            residual = std::numeric_limits<double>::infinity();
            break;
        }
        residual = std::max(residual, std::abs(region.vertices[i].d1 - composed.vertices[i].d1));
        residual = std::max(residual, std::abs(region.vertices[i].d2 - composed.vertices[i].d2));
    }

    ordered_json j;
    j["profile"] = profile_to_json(profile);
    j["class"] = to_string(cls.kind);
    if (cls.balanced_partition) {
        j["balanced_groups"] = cls.balanced_partition->groups;
        j["group_search_exhaustive"] = cls.balanced_partition->exhaustive;
    }
    j["min_avg"] = dec15(region.min_avg);
    j["vertices"] = vertices_json(region);
    j["weights"] = {{"r_bar", dec15(w.r_bar)},
                    {"r_hat", dec15(w.r_hat)},
                    {"r_tilde", dec15(w.r_tilde)},
                    {"r_hat_prime", dec15(w.r_hat_prime)}};
    j["composition_residual"] = residual;
    return j;
}

ordered_json decompose_report(const CsitProfile& profile, ReducePolicy policy) {
    const Reduction reduction = reduce_to_balanced(profile, policy);
    ordered_json uses = ordered_json::array();
    for (const SubchannelUse& u : decompose(profile)) {
        uses.push_back({{"subband", u.subband},
                        {"pp", dec15(u.pp)},
                        {"pn", dec15(u.pn)},
                        {"np", dec15(u.np)},
                        {"nn", dec15(u.nn)}});
    }
    ordered_json deltas = ordered_json::object();
    for (const auto& [subband, delta] : reduction.deltas) {
        deltas[std::to_string(subband)] = dec15(delta);
    }
    ordered_json j;
    j["profile"] = profile_to_json(profile);
    j["subchannels"] = std::move(uses);
    j["reduce_policy"] = to_string(policy);
    j["reduced_profile"] = profile_to_json(reduction.reduced);
    j["reduction_deltas"] = std::move(deltas);
    j["schedule"] = schedule_json(pair_u0(reduction.reduced));
    return j;
}

ordered_json plan_to_json(const TransmissionPlan& plan) {
    ordered_json j;
    j["original"] = profile_to_json(plan.original);
    j["profile"] = profile_to_json(plan.profile);
    j["reduce_policy"] = to_string(plan.policy);
    j["common_owner"] = plan.common_owner;
    j["schedule"] = schedule_json(plan.schedule);

    ordered_json subbands = ordered_json::array();
    for (int sb = 1; sb <= plan.profile.L; ++sb) {
        ordered_json symbols = ordered_json::array();
        for (const SymbolSpec& s : plan.symbols) {
            if (s.subband != sb) continue;
            ordered_json sym;
            sym["label"] = s.label();
            sym["kind"] = to_string(s.kind);
            sym["power_hi"] = dec15(s.power_hi);
            if (s.power_lo == kPowerFloor) {
                sym["power_lo"] = "floor";
            } else {
                sym["power_lo"] = dec15(s.power_lo);
            }
            sym["share"] = s.share;
            sym["rate_prelog"] = dec15(s.rate_prelog);
            sym["precoder"] = to_string(s.precoder);
            symbols.push_back(std::move(sym));
        }
        subbands.push_back({{"subband", sb}, {"symbols", std::move(symbols)}});
    }
    j["subbands"] = std::move(subbands);

    ordered_json orders = ordered_json::object();
    for (int user = 1; user <= 2; ++user) {
        ordered_json per_subband = ordered_json::object();
        for (int sb = 1; sb <= plan.profile.L; ++sb) {
            ordered_json steps = ordered_json::array();
            for (const DecodeStep& step : plan.decode_order[user - 1][sb - 1]) {
                ordered_json interf = ordered_json::array();
                for (int t : step.interference) interf.push_back(plan.symbols[t].label());
                ordered_json known = ordered_json::array();
                for (int t : step.known) known.push_back(plan.symbols[t].label());
                steps.push_back({{"symbol", plan.symbols[step.symbol].label()},
                                 {"interference", std::move(interf)},
                                 {"known", std::move(known)}});
            }
            per_subband[std::to_string(sb)] = std::move(steps);
        }
        orders["user" + std::to_string(user)] = std::move(per_subband);
    }
    j["decode_order"] = std::move(orders);

    const DofPair d = rate_accounting(plan);
    j["rate_accounting"] = {dec15(d.d1), dec15(d.d2)};
    return j;
}

ordered_json checks_to_json(const std::vector<PlanCheck>& checks) {
    ordered_json j = ordered_json::array();
    for (const PlanCheck& c : checks) {
        ordered_json row = {{"check", c.name}, {"where", c.where}, {"pass", c.pass}};
        if (!c.pass) row["detail"] = c.detail;
        j.push_back(std::move(row));
    }
    return j;
}

std::string sweep_csv(const SweepResult& result) {
    std::string csv = "snr_db,message_id,context,rate_bits\n";
    for (size_t s = 0; s < result.snr_grid_db.size(); ++s) {
        for (const MessageRate& m : result.per_snr[s]) {
            for (const ContextRate& c : m.contexts) {
                csv += fmt15(result.snr_grid_db[s]);
                csv += ',' + m.message + ",user" + std::to_string(c.user) + "@sb" +
                       std::to_string(c.subband) + ',' + fmt15(c.rate_bits) + '\n';
            }
        }
    }
    return csv;
}

ordered_json sweep_summary(const TransmissionPlan& plan, const SweepResult& result,
                           double slope_tol) {
    const DofPair target = rate_accounting(plan);
    const bool pass = std::abs(result.fitted.d1 - target.d1) <= slope_tol &&
                      std::abs(result.fitted.d2 - target.d2) <= slope_tol;
    ordered_json margins = ordered_json::object();
    for (const auto& [message, margin] : result.decode_margin) {
        margins[message] = dec15(margin);
    }
    ordered_json per_snr = ordered_json::array();
    for (size_t s = 0; s < result.snr_grid_db.size(); ++s) {
        per_snr.push_back({{"snr_db", dec15(result.snr_grid_db[s])},
                           {"user1_rate_per_use", dec15(result.user1_rate_per_use[s])},
                           {"user2_rate_per_use", dec15(result.user2_rate_per_use[s])}});
    }
    ordered_json j;
    j["fitted"] = {dec15(result.fitted.d1), dec15(result.fitted.d2)};
    j["target"] = {dec15(target.d1), dec15(target.d2)};
    j["slope_tol"] = slope_tol;
    j["pass"] = pass;
    j["per_snr"] = std::move(per_snr);
    j["decode_margin"] = std::move(margins);
    return j;
}

std::vector<CompareRow> compare_grid(double step) {
    if (step <= 0.0) throw OutOfRange("grid step must be positive");
    std::vector<CompareRow> rows;
    const int n = static_cast<int>(std::round(1.0 / step));
    for (int ia = 0; ia <= n; ++ia) {
        for (int ib = ia; ib <= n; ++ib) {
            CompareRow row;
            row.alpha = ia * step;
            row.beta = ib * step;
            row.d_sub = sum_dof_suboptimal(row.alpha, row.beta);
            row.d_opt = sum_dof_optimal(row.alpha, row.beta);
            row.gap = row.d_opt - row.d_sub;
            row.strict_gap_region = 3.0 * row.beta - row.alpha > 2.0 + kEqualityTol;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
    std::string csv = "alpha,beta,d_sub,d_opt,gap,strict_gap_region\n";
    for (const CompareRow& r : rows) {
        csv += fmt15(r.alpha) + ',' + fmt15(r.beta) + ',' + fmt15(r.d_sub) + ',' +
               fmt15(r.d_opt) + ',' + fmt15(r.gap) + ',' + (r.strict_gap_region ? "1" : "0") +
               '\n';
    }
    return csv;
}

int cmd_region(const std::filesystem::path& profile_path, const std::filesystem::path& out) {
    const CsitProfile profile = load_profile(profile_path);
    const ordered_json report = region_report(profile);
    write_text(out, report.dump(2) + "\n");

    std::cout << "class: " << report["class"].get<std::string>()
              << "  min_avg: " << fmt15(report["min_avg"].get<double>()) << "\n";
    std::cout << "vertices:";
    for (const auto& v : report["vertices"]) {
        std::cout << " (" << fmt15(v[0].get<double>()) << ", " << fmt15(v[1].get<double>()) << ")";
    }
    std::cout << "\nweights: r_bar=" << fmt15(report["weights"]["r_bar"].get<double>())
              << " r_hat=" << fmt15(report["weights"]["r_hat"].get<double>())
              << " r_tilde=" << fmt15(report["weights"]["r_tilde"].get<double>())
              << " r_hat_prime=" << fmt15(report["weights"]["r_hat_prime"].get<double>()) << "\n";
    const double residual = report["composition_residual"].get<double>();
    std::cout << "composition residual: " << fmt15(residual) << "\n";
    return residual <= kBalanceTol ? 0 : 1;
}

int cmd_decompose(const std::filesystem::path& profile_path, const std::filesystem::path& out,
                  ReducePolicy policy) {
    const CsitProfile profile = load_profile(profile_path);
    const ordered_json report = decompose_report(profile, policy);
    write_text(out, report.dump(2) + "\n");
    std::cout << report["schedule"]["messages"].size() << " common-II message(s), reduction on "
              << report["reduction_deltas"].size() << " subband(s)\n";
    return 0;
}

int cmd_synth(const std::filesystem::path& profile_path, int owner, ReducePolicy policy,
              const std::filesystem::path& out) {
    const CsitProfile profile = load_profile(profile_path);
    const TransmissionPlan plan = synthesize(profile, owner, policy);
    const std::vector<PlanCheck> checks = validate_plan(plan);

    ordered_json j = plan_to_json(plan);
    j["checks"] = checks_to_json(checks);
    write_text(out, j.dump(2) + "\n");

    int failures = 0;
    for (const PlanCheck& c : checks) {
        if (!c.pass) {
            ++failures;
            std::cout << "FAIL " << c.name << " (" << c.where << "): " << c.detail << "\n";
        }
    }
    const DofPair d = rate_accounting(plan);
    std::cout << plan.symbols.size() << " symbols, " << plan.schedule.messages.size()
              << " common-II message(s), rate accounting (" << fmt15(d.d1) << ", " << fmt15(d.d2)
              << "), " << failures << " failed check(s)\n";
    return failures == 0 ? 0 : 1;
}

int cmd_simulate(const std::filesystem::path& profile_path, int owner, ReducePolicy policy,
                 const SimConfig& cfg, const std::filesystem::path& out_csv, int workers) {
    const CsitProfile profile = load_profile(profile_path);
    const TransmissionPlan plan = synthesize(profile, owner, policy);
    const SweepResult result = sweep(plan, cfg, workers);

    write_text(out_csv, sweep_csv(result));
    const ordered_json summary = sweep_summary(plan, result, 0.1);
    std::filesystem::path summary_path = out_csv;
    summary_path.replace_extension(".summary.json");
    write_text(summary_path, summary.dump(2) + "\n");

    std::cout << "fitted (" << fmt15(result.fitted.d1) << ", " << fmt15(result.fitted.d2)
              << "), target (" << fmt15(summary["target"][0].get<double>()) << ", "
              << fmt15(summary["target"][1].get<double>()) << "), "
              << (summary["pass"].get<bool>() ? "pass" : "FAIL") << "\n";
    return summary["pass"].get<bool>() ? 0 : 1;
}

int cmd_compare(double step, const std::string& pairs, const std::filesystem::path& out) {
    std::vector<CompareRow> rows;
    if (pairs.empty()) {
        rows = compare_grid(step);
    } else {
        std::stringstream list(pairs);
        std::string token;
        while (std::getline(list, token, ',')) {
            const size_t colon = token.find(':');
            if (colon == std::string::npos) throw ParseError("pair must look like alpha:beta");
            const double alpha = std::strtod(token.substr(0, colon).c_str(), nullptr);
            const double beta = std::strtod(token.substr(colon + 1).c_str(), nullptr);
            try {
                CompareRow row{alpha, beta, sum_dof_suboptimal(alpha, beta),
                               sum_dof_optimal(alpha, beta), 0.0, false};
                row.gap = row.d_opt - row.d_sub;
                row.strict_gap_region = 3.0 * beta - alpha > 2.0 + kEqualityTol;
                rows.push_back(row);
            } catch (const OrderViolation& e) {
                std::cerr << "warning: skipping pair " << token << ": " << e.what() << "\n";
            }
        }
    }
    write_text(out, compare_csv(rows));

    int dominance_violations = 0;
    for (const CompareRow& r : rows) {
        if (r.gap < -kEqualityTol) ++dominance_violations;
    }
    std::cout << rows.size() << " rows, "
              << std::count_if(rows.begin(), rows.end(),
                               [](const CompareRow& r) { return r.strict_gap_region; })
              << " in the strict-gap region\n";
    return dominance_violations == 0 ? 0 : 1;
}

}  // namespace dofcsit::io
