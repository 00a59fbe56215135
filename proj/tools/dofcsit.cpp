#include <CLI11.hpp>
#include <iostream>

#include "dofcsit/io.hpp"

namespace {

enum class Command { Region, Decompose, Synth, Simulate, Compare };

// Everything one invocation needs, assembled from flags and (optionally)
// a config file. sim is populated only for the simulate command.
struct RunManifest {
    Command command = Command::Region;
    std::filesystem::path profile_path;
    std::filesystem::path output_path;
    std::optional<dofcsit::SimConfig> sim;
    int owner = 1;
    dofcsit::ReducePolicy reduce_policy = dofcsit::ReducePolicy::LargestGap;
};

dofcsit::ReducePolicy parse_policy(const std::string& name) {
    if (name == "largest-gap") return dofcsit::ReducePolicy::LargestGap;
    if (name == "lowest-index") return dofcsit::ReducePolicy::LowestIndex;
    throw CLI::ValidationError("--reduce-policy", "expected largest-gap or lowest-index");
}

int dispatch(const RunManifest& manifest, double step, const std::string& pairs) {
    switch (manifest.command) {
        case Command::Region:
            return dofcsit::io::cmd_region(manifest.profile_path, manifest.output_path);
        case Command::Decompose:
            return dofcsit::io::cmd_decompose(manifest.profile_path, manifest.output_path,
                                              manifest.reduce_policy);
        case Command::Synth:
            return dofcsit::io::cmd_synth(manifest.profile_path, manifest.owner,
                                          manifest.reduce_policy, manifest.output_path);
        case Command::Simulate:
            return dofcsit::io::cmd_simulate(manifest.profile_path, manifest.owner,
                                             manifest.reduce_policy, *manifest.sim,
                                             manifest.output_path);
        case Command::Compare:
            return dofcsit::io::cmd_compare(step, pairs, manifest.output_path);
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DoF-region analysis, transmission-plan synthesis and link simulation\n"
                 "for the two-user multi-subband MISO broadcast channel with imperfect\n"
                 "per-subband transmitter CSI"};
    app.require_subcommand(1);
    // Config file keys live in a section per subcommand, e.g. [simulate].
    app.set_config("--config");
    app.fallthrough();

    std::string profile_path, out_path, policy_name = "largest-gap", pairs;
    int owner = 1;
    std::vector<double> snr_db = {20, 30, 40, 50, 60};
    int trials = 2000;
    std::uint64_t seed = 1;
    int fit_points = 3;
    double step = 0.01;

    auto add_profile = [&](CLI::App* cmd) {
        cmd->add_option("--profile", profile_path, "profile file (JSON: L, a, b)")
            ->required()
            ->check(CLI::ExistingFile);
    };
    auto add_out = [&](CLI::App* cmd, const char* what) {
        cmd->add_option("--out", out_path, what)->required();
    };
    auto add_policy = [&](CLI::App* cmd) {
        cmd->add_option("--reduce-policy", policy_name, "largest-gap | lowest-index")
            ->check(CLI::IsMember({"largest-gap", "lowest-index"}));
    };
    auto add_owner = [&](CLI::App* cmd) {
        cmd->add_option("--owner", owner, "user the common messages count for")
            ->check(CLI::IsMember({1, 2}));
    };

    CLI::App* region = app.add_subcommand("region", "DoF region, weights and composition check");
    add_profile(region);
    add_out(region, "region report (JSON)");

    CLI::App* decompose =
        app.add_subcommand("decompose", "subchannel decomposition and u0 schedule");
    add_profile(decompose);
    add_out(decompose, "decomposition report (JSON)");
    add_policy(decompose);

    CLI::App* synth = app.add_subcommand("synth", "synthesize and validate a transmission plan");
    add_profile(synth);
    add_out(synth, "plan file (JSON)");
    add_owner(synth);
    add_policy(synth);

    CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo SNR sweep of the plan");
    add_profile(simulate);
    add_out(simulate, "sweep CSV (summary JSON written alongside)");
    add_owner(simulate);
    add_policy(simulate);
    simulate->add_option("--snr-db", snr_db, "ascending SNR grid in dB")->delimiter(',');
    simulate->add_option("--trials", trials, "Monte-Carlo trials per SNR point")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--seed", seed, "simulation seed");
    simulate->add_option("--fit-points", fit_points, "top grid points used for the slope fit")
        ->check(CLI::PositiveNumber);

    CLI::App* compare =
        app.add_subcommand("compare", "optimal vs suboptimal two-subband sum DoF table");
    add_out(compare, "comparison CSV");
    compare->add_option("--step", step, "alpha/beta grid step")->check(CLI::PositiveNumber);
    compare->add_option("--pairs", pairs, "explicit alpha:beta list instead of the grid");

    CLI11_PARSE(app, argc, argv);

    try {
        RunManifest manifest;
        manifest.profile_path = profile_path;
        manifest.output_path = out_path;
        manifest.owner = owner;
        manifest.reduce_policy = parse_policy(policy_name);
        if (region->parsed()) manifest.command = Command::Region;
        if (decompose->parsed()) manifest.command = Command::Decompose;
        if (synth->parsed()) manifest.command = Command::Synth;
        if (compare->parsed()) manifest.command = Command::Compare;
        if (simulate->parsed()) {
            manifest.command = Command::Simulate;
            manifest.sim = dofcsit::SimConfig{snr_db, trials, seed, fit_points};
        }
        return dispatch(manifest, step, pairs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
