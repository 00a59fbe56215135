#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "dofcsit/io.hpp"
#include "test_support.hpp"

using namespace dofcsit;
namespace fs = std::filesystem;
using test::ProfileGen;
using test::make_profile;

namespace {

const fs::path kProfileDir = DOFCSIT_PROFILE_DIR;

fs::path temp_file(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "dofcsit_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("profile round-trips field-exact through its file format") {
    ProfileGen gen(0x10aa);
    for (int trial = 0; trial < 50; ++trial) {
        const CsitProfile p = gen.any();
        const fs::path path = temp_file("roundtrip.profile");
        io::save_profile(p, path);
        const CsitProfile back = io::load_profile(path);
        CHECK(back.L == p.L);
        CHECK(back.a == p.a);
        CHECK(back.b == p.b);
    }
}

TEST_CASE("shipped profiles parse to their documented values") {
    const CsitProfile fig4 = io::load_profile(kProfileDir / "fig4.profile");
    CHECK(fig4.L == 4);
    CHECK(fig4.a == std::vector<double>{0.7, 0.6, 0.4, 0.3});
    const CsitProfile q2 = io::load_profile(kProfileDir / "q2.profile");
    CHECK(q2.a == std::vector<double>{0.9, 0.5});
    CHECK(q2.b == std::vector<double>{0.4, 0.7});
    for (const char* name : {"fig5a.profile", "fig5b.profile", "p2_unmatched.profile",
                             "p3.profile"}) {
        CHECK_NOTHROW(io::load_profile(kProfileDir / name));
    }
}

TEST_CASE("malformed profile files raise ParseError") {
    const fs::path empty = temp_file("empty.profile");
    std::ofstream(empty).close();
    CHECK_THROWS_AS(io::load_profile(empty), ParseError);

    const fs::path missing = temp_file("missing.profile");
    std::ofstream(missing) << "{\"L\": 2, \"a\": [0.5, 0.5]}";
    CHECK_THROWS_AS(io::load_profile(missing), ParseError);

    const fs::path bad_length = temp_file("bad_length.profile");
    std::ofstream(bad_length) << "{\"L\": 3, \"a\": [0.5], \"b\": [0.5]}";
    CHECK_THROWS_AS(io::load_profile(bad_length), LengthMismatch);

    CHECK_THROWS_AS(io::load_profile(temp_file("does_not_exist.profile")), ParseError);
}

TEST_CASE("region report carries corners, weights and a tiny residual") {
    const io::ordered_json report =
        io::region_report(io::load_profile(kProfileDir / "fig4.profile"));
    CHECK(report["min_avg"].get<double>() == 0.5);
    CHECK(report["weights"]["r_bar"].get<double>() == 1.4);
    CHECK(report["weights"]["r_hat"].get<double>() == 1.2);
    CHECK(report["weights"]["r_tilde"].get<double>() == 1.4);
    CHECK(report["composition_residual"].get<double>() <= 1e-9);

    bool corner_there = false;
    for (const auto& v : report["vertices"]) {
        if (v[0].get<double>() == 1.0 && v[1].get<double>() == 0.5) corner_there = true;
    }
    CHECK(corner_there);

    const io::ordered_json matched =
        io::region_report(io::load_profile(kProfileDir / "fig5a.profile"));
    CHECK(matched["weights"]["r_hat"].get<double>() == 0.0);
}

TEST_CASE("comparison table rows at the pinned points") {
    const std::vector<io::CompareRow> rows = io::compare_grid(0.1);
    for (const io::CompareRow& r : rows) {
        CHECK(r.gap >= -1e-12);
        CHECK(r.strict_gap_region == (3 * r.beta - r.alpha > 2 + 1e-12));
        if (r.alpha == 0.0 && r.beta == 1.0) {
            CHECK(r.d_sub == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
            CHECK(r.d_opt == doctest::Approx(1.5).epsilon(1e-15));
            CHECK(r.gap == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
        }
        if (r.alpha == 0.3 && r.beta == 0.7) {
            CHECK(std::abs(r.gap) <= 1e-12);
            CHECK_FALSE(r.strict_gap_region);
        }
    }
}

TEST_CASE("commands succeed on the shipped inputs") {
    // cmd_region exits 0 only when the composition residual is <= 1e-9.
    for (const char* name : {"fig4.profile", "fig5a.profile", "fig5b.profile",
                             "p2_unmatched.profile", "q2.profile", "p3.profile"}) {
        CHECK(io::cmd_region(kProfileDir / name, temp_file("region.json")) == 0);
    }
    CHECK(io::cmd_decompose(kProfileDir / "p3.profile", temp_file("p3.decomp.json"),
                            ReducePolicy::LargestGap) == 0);
    CHECK(io::cmd_synth(kProfileDir / "p2_unmatched.profile", 1, ReducePolicy::LargestGap,
                        temp_file("p2.plan.json")) == 0);
    CHECK(io::cmd_compare(0.05, "", temp_file("compare.csv")) == 0);
    CHECK(io::cmd_compare(0.0, "0:1,0.9:0.1,0.3:0.7", temp_file("pairs.csv")) == 0);
}

TEST_CASE("the two reduction policies give distinct plans with equal accounting") {
    const fs::path plan_a = temp_file("q2_largest.plan.json");
    const fs::path plan_b = temp_file("q2_lowest.plan.json");
    CHECK(io::cmd_synth(kProfileDir / "q2.profile", 1, ReducePolicy::LargestGap, plan_a) == 0);
    CHECK(io::cmd_synth(kProfileDir / "q2.profile", 1, ReducePolicy::LowestIndex, plan_b) == 0);

    const io::ordered_json a = io::ordered_json::parse(slurp(plan_a));
    const io::ordered_json b = io::ordered_json::parse(slurp(plan_b));
    CHECK(a["profile"] != b["profile"]);
    CHECK(a["rate_accounting"] == b["rate_accounting"]);
}

TEST_CASE("simulate writes byte-identical CSV for a repeated configuration") {
    const SimConfig cfg{{20, 30, 40}, 300, 17, 2};
    const fs::path csv1 = temp_file("sweep1.csv");
    const fs::path csv2 = temp_file("sweep2.csv");
    CHECK(io::cmd_simulate(kProfileDir / "p2_unmatched.profile", 1, ReducePolicy::LargestGap, cfg,
                           csv1, 1) == 0);
    CHECK(io::cmd_simulate(kProfileDir / "p2_unmatched.profile", 1, ReducePolicy::LargestGap, cfg,
                           csv2, 4) == 0);
    const std::string text1 = slurp(csv1);
    CHECK(text1 == slurp(csv2));
    CHECK(text1.rfind("snr_db,message_id,context,rate_bits\n", 0) == 0);
    CHECK(slurp(csv1.parent_path() / "sweep1.summary.json") ==
          slurp(csv2.parent_path() / "sweep2.summary.json"));
}

TEST_CASE("plan files keep the documented field names") {
    const fs::path path = temp_file("fields.plan.json");
    REQUIRE(io::cmd_synth(kProfileDir / "p3.profile", 2, ReducePolicy::LargestGap, path) == 0);
    const io::ordered_json plan = io::ordered_json::parse(slurp(path));
    REQUIRE(plan.contains("subbands"));
    const auto& symbol = plan["subbands"][0]["symbols"][0];
    for (const char* field :
         {"label", "kind", "power_hi", "power_lo", "share", "rate_prelog", "precoder"}) {
        CHECK(symbol.contains(field));
    }
    CHECK(plan["common_owner"].get<int>() == 2);
    bool floor_seen = false;
    for (const auto& sb : plan["subbands"]) {
        for (const auto& sym : sb["symbols"]) {
            if (sym["power_lo"].is_string()) {
                CHECK(sym["power_lo"].get<std::string>() == "floor");
                floor_seen = true;
            }
        }
    }
    CHECK(floor_seen);
}
