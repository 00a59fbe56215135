#include <doctest.h>

#include <cmath>
#include <numeric>

#include "dofcsit/decomposition.hpp"
#include "dofcsit/region.hpp"
#include "test_support.hpp"

using namespace dofcsit;
using test::ProfileGen;
using test::make_profile;

namespace {

const CsitProfile fig4 = make_profile({0.7, 0.6, 0.4, 0.3}, {0.3, 0.4, 0.7, 0.6});
const CsitProfile p3 = make_profile({0.8, 0.6, 0.2}, {0.5, 0.4, 0.7});
const CsitProfile q2 = make_profile({0.9, 0.5}, {0.4, 0.7});

}  // namespace

TEST_CASE("decompose splits a subband into the four states") {
    const std::vector<SubchannelUse> uses = decompose(fig4);
    CHECK(uses[0].pp == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(uses[0].pn == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(uses[0].np == 0.0);
    CHECK(uses[0].nn == doctest::Approx(0.3).epsilon(1e-12));

    const std::vector<SubchannelUse> perfect = decompose(make_profile({1}, {1}));
    CHECK(perfect[0].pp == 1.0);
    CHECK(perfect[0].pn + perfect[0].np + perfect[0].nn == 0.0);

    const std::vector<SubchannelUse> np_state = decompose(make_profile({0}, {1}));
    CHECK(np_state[0].np == 1.0);
    CHECK(np_state[0].pp + np_state[0].pn + np_state[0].nn == 0.0);
}

TEST_CASE("decompose shares sum to one channel use and reproduce the weights") {
    ProfileGen gen(0xdec0);
    for (int trial = 0; trial < 200; ++trial) {
        const CsitProfile p = gen.any();
        const std::vector<SubchannelUse> uses = decompose(p);
        double pp = 0.0, pn = 0.0, np = 0.0, total = 0.0;
        for (const SubchannelUse& u : uses) {
            CHECK(std::abs(u.pp + u.pn + u.np + u.nn - 1.0) <= 1e-12);
            CHECK((u.pn == 0.0 || u.np == 0.0));
            pp += u.pp;
            pn += u.pn;
            np += u.np;
            total += u.pp + u.pn + u.np + u.nn;
        }
        const Weights w = weights(p);
        CHECK(std::abs(pp - w.r_bar) <= 1e-9);
        CHECK(std::abs(2.0 * std::min(pn, np) - w.r_hat) <= 1e-9);
        CHECK(std::abs(total - p.L) <= 1e-9);
    }
}

TEST_CASE("pair_u0 walks the residual gaps lowest index first") {
    const U0Schedule s = pair_u0(p3);
    REQUIRE(s.messages.size() == 2);
    CHECK(s.messages[0].rate_prelog == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(s.messages[0].donor == 1);
    CHECK(s.messages[0].receiver == 3);
    CHECK(s.messages[1].rate_prelog == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(s.messages[1].donor == 2);
    CHECK(s.messages[1].receiver == 3);
    CHECK(s.per_subband.at(3) == std::vector<int>{1, 2});
}

TEST_CASE("pair_u0 on a matched profile emits nothing") {
    const U0Schedule s = pair_u0(make_profile({0.7, 0.3}, {0.7, 0.3}));
    CHECK(s.messages.empty());
    CHECK(s.per_subband.empty());
}

TEST_CASE("pair_u0 on the swapped two-subband profile emits one message") {
    const U0Schedule s = pair_u0(make_profile({0.7, 0.3}, {0.3, 0.7}));
    REQUIRE(s.messages.size() == 1);
    CHECK(s.messages[0].rate_prelog == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(s.messages[0].donor == 1);
    CHECK(s.messages[0].receiver == 2);
}

TEST_CASE("pair_u0 rejects unbalanced profiles") {
    CHECK_THROWS_AS(pair_u0(q2), Unbalanced);
}

TEST_CASE("pair_u0 message count and rate totals") {
    ProfileGen gen(0xdec1);
    for (int trial = 0; trial < 200; ++trial) {
        const CsitProfile p = gen.balanced();
        const GapSummary g = gaps(p);
        const U0Schedule s = pair_u0(p);

        double total = 0.0;
        for (const U0Message& m : s.messages) {
            CHECK(m.rate_prelog > 0.0);
            CHECK(g.q_plus.count(m.donor) == 1);
            CHECK(g.q_minus.count(m.receiver) == 1);
            total += m.rate_prelog;
        }
        CHECK(std::abs(total - weights(p).r_hat / 2) <= 1e-9);
        if (!s.messages.empty()) {
            CHECK(static_cast<int>(s.messages.size()) <=
                  static_cast<int>(g.plus_set.size() + g.minus_set.size()) - 1);
        }

        // Per-subband widths fill the quality gap; ids appear exactly twice.
        std::map<int, int> appearances;
        for (const auto& [subband, ids] : s.per_subband) {
            double width = 0.0;
            for (int id : ids) {
                width += s.messages[id - 1].rate_prelog;
                appearances[id] += 1;
            }
            CHECK(std::abs(width - std::abs(p.a[subband - 1] - p.b[subband - 1])) <= 1e-9);
        }
        for (const U0Message& m : s.messages) CHECK(appearances[m.id] == 2);
    }
}

TEST_CASE("reduce_to_balanced shrinks the largest gap first") {
    const Reduction r = reduce_to_balanced(q2);
    CHECK(r.reduced.a[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(r.reduced.a[1] == 0.5);
    CHECK(r.reduced.b == q2.b);
    CHECK(r.deltas.at(1) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("reduce_to_balanced can deepen the receiver side instead") {
    const Reduction r = reduce_to_balanced(q2, ReducePolicy::LowestIndex);
    CHECK(r.reduced.a[0] == 0.9);
    CHECK(r.reduced.a[1] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(r.deltas.at(2) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("the single-subband reduction lands on the weaker quality") {
    const Reduction r = reduce_to_balanced(make_profile({0.8}, {0.5}));
    CHECK(r.reduced.a[0] == doctest::Approx(0.5).epsilon(1e-12));
    // No receiver subband exists, so both policies coincide.
    const Reduction alt = reduce_to_balanced(make_profile({0.8}, {0.5}), ReducePolicy::LowestIndex);
    CHECK(alt.reduced.a[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("reducing a balanced profile is the identity") {
    const Reduction r = reduce_to_balanced(fig4);
    CHECK(r.reduced.a == fig4.a);
    CHECK(r.reduced.b == fig4.b);
    CHECK(r.deltas.empty());
}

TEST_CASE("reduction invariants across random profiles and both policies") {
    ProfileGen gen(0xdec2);
    for (int trial = 0; trial < 300; ++trial) {
        const CsitProfile p = gen.any();
        const GapSummary g = gaps(p);
        for (ReducePolicy policy : {ReducePolicy::LargestGap, ReducePolicy::LowestIndex}) {
            const Reduction r = reduce_to_balanced(p, policy);
            const GapSummary reduced = gaps(r.reduced);
            CHECK(std::abs(reduced.a_mean - reduced.b_mean) <= 1e-9);

            double removed = 0.0;
            for (const auto& [subband, delta] : r.deltas) {
                CHECK(delta >= 0.0);
                removed += delta;
            }
            CHECK(std::abs(removed - p.L * std::abs(g.a_mean - g.b_mean)) <= 1e-9);
            for (int j = 0; j < p.L; ++j) {
                CHECK(r.reduced.a[j] <= p.a[j] + 1e-15);
                CHECK(r.reduced.b[j] <= p.b[j] + 1e-15);
            }

            // The region depends only on the weaker sum, which is untouched.
            const DofRegion before = dof_region(p);
            const DofRegion after = dof_region(r.reduced);
            CHECK(std::abs(before.min_avg - after.min_avg) <= 1e-9);
        }
    }
}
