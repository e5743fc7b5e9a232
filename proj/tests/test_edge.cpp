#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rebel/edge.hpp"

using namespace rebel;

namespace {

SweepPlan edge_plan(Family f, double alpha, int window, double T) {
    SweepPlan p;
    p.spec = make_spec(f, Representation::Interface, alpha);
    p.n_sites = window;
    p.total_time = T;
    p.bins = 4;
    p.alpha_begin = p.alpha_end = alpha;
    p.seed = 17;
    return p;
}

// two-sample Kolmogorov-Smirnov statistic
double ks_stat(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i;
        else ++j;
        d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    return d;
}

}  // namespace

TEST_CASE("frame keeps its anchor occupied") {
    ModelSpec spec = make_spec(Family::TwoSidedRV, Representation::Interface, 0.45);
    FrameSim sim(spec, 128, 3);
    for (int e = 0; e < 50000; ++e) {
        sim.step(0.45);
        REQUIRE(sim.at(0) == 1);
    }
}

TEST_CASE("one-sided alpha=1: every event advances the anchor by one") {
    ModelSpec spec = make_spec(Family::OneSidedRV, Representation::Interface, 1.0);
    FrameSim sim(spec, 128, 9);
    for (int e = 0; e < 1000; ++e) sim.step(1.0);
    CHECK(sim.displacement() == 1000);
    CHECK(sim.particles() == 1);
    CHECK(sim.restarts() == 0);
}

TEST_CASE("one-sided alpha=0: the anchor never advances") {
    ModelSpec spec = make_spec(Family::OneSidedRV, Representation::Interface, 0.0);
    FrameSim sim(spec, 128, 5);
    for (int e = 0; e < 20000; ++e) sim.step(0.0);
    CHECK(sim.displacement() == 0);
}

TEST_CASE("window floor") {
    ModelSpec spec = make_spec(Family::OneSidedRV, Representation::Interface, 0.5);
    CHECK_THROWS_AS(FrameSim(spec, 32, 1), std::invalid_argument);
}

TEST_CASE("restarts stay rare at a wide window") {
    ModelSpec spec = make_spec(Family::OneSidedRV, Representation::Interface, 0.5);
    FrameSim sim(spec, 2048, 21);
    double t = 0;
    while (t < 2e4) t += sim.step(0.5);
    CHECK(sim.restarts() == 0);
}

TEST_CASE("edge sweep bins account for displacement and time") {
    SweepPlan p = edge_plan(Family::OneSidedRV, 1.0, 128, 1e4);
    auto bins = edge_speed_sweep(p, EdgeSide::Left);
    REQUIRE(bins.size() == 4);
    double total = 0;
    for (const auto& b : bins) {
        total += b.elapsed;
        CHECK(b.speed() == doctest::Approx(1.0).epsilon(0.05));
    }
    CHECK(total == doctest::Approx(p.total_time - p.effective_burn_in()));
}

TEST_CASE("right edge is the negated mirror simulation") {
    SweepPlan p = edge_plan(Family::OneSidedRV, 1.0, 128, 5e3);
    auto reps = edge_replicas(p, EdgeSide::Right, 4, 1);
    auto curve = edge_speed_curve(reps, EdgeSide::Right);
    REQUIRE(!curve.empty());
    // at alpha=1 the one-sided process translates rightward at speed 1,
    // so the right edge speed is +1 like the left
    for (const auto& pt : curve) CHECK(pt.value == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("two-sided speeds are antisymmetric below the critical point") {
    SweepPlan p = edge_plan(Family::TwoSidedRV, 0.2, 256, 2e3);
    p.seed = 4;
    auto l = edge_speed_curve(edge_replicas(p, EdgeSide::Left, 6, 1), EdgeSide::Left);
    auto r = edge_speed_curve(edge_replicas(p, EdgeSide::Right, 6, 1), EdgeSide::Right);
    REQUIRE(!l.empty());
    REQUIRE(!r.empty());
    double vl = l.back().value, vr = r.back().value;
    double se = std::hypot(l.back().stderr_, r.back().stderr_);
    CHECK(vl < 0);   // left edge moves left while the blob grows
    CHECK(vr > 0);
    CHECK(std::abs(vl + vr) < 4 * se + 0.05);
}

TEST_CASE("frame displacement law matches a whole-ring simulation") {
    // short horizon, wide window: drop-off cannot trigger, so the framed
    // process is the ring process seen from its leftmost particle
    const double horizon = 15.0;
    const int trials = 200;
    ModelSpec spec = make_spec(Family::OneSidedRV, Representation::Interface, 0.5);

    std::vector<double> frame_disp, ring_disp;
    for (int s = 0; s < trials; ++s) {
        FrameSim sim(spec, 256, 1000 + s);
        // both loops apply the first event whose time crosses the horizon
        while (sim.time() < horizon) sim.step(0.5);
        CHECK(sim.dropped() == 0);
        frame_disp.push_back(static_cast<double>(sim.displacement()));
    }
    for (int s = 0; s < trials; ++s) {
        std::vector<std::uint8_t> bits(512, 0);
        bits[256] = 1;
        SimState st(RingConfig::from_bits(bits), 5000 + s);
        while (st.time() < horizon) step(st, spec, 0.5);
        int leftmost = 512;
        for (int i = 0; i < 512; ++i)
            if (st.at(i)) {
                leftmost = i;
                break;
            }
        ring_disp.push_back(static_cast<double>(leftmost - 256));
    }
    // 1% significance threshold for n = m = 200
    double d = ks_stat(frame_disp, ring_disp);
    CHECK(d < 1.628 * std::sqrt(2.0 / trials));
}
