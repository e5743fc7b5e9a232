#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rebel/exact.hpp"

using namespace rebel;

TEST_CASE("one-sided odd-sector generator at N=4 by hand") {
    ModelSpec spec = make_spec(Family::OneSidedRV, Representation::Interface, 0.3);
    ExactSystem sys = build_generator(spec, 4, Sector::Odd);
    CHECK(sys.num_states() == 8);

    // state with only site 0 occupied: flips {0,1} at rate alpha,
    // flips {1,2} at rate 1-alpha
    const std::int32_t s = sys.index_of[0b0001];
    REQUIRE(s >= 0);
    CHECK(sys.out_rate[s] == doctest::Approx(1.0));
    double to_0010 = 0, to_0111 = 0;
    for (const auto& e : sys.rows[s]) {
        if (sys.states[e.col] == 0b0010) to_0010 += e.rate;
        if (sys.states[e.col] == 0b0111) to_0111 += e.rate;
    }
    CHECK(to_0010 == doctest::Approx(0.3));
    CHECK(to_0111 == doctest::Approx(0.7));
}

TEST_CASE("row sums vanish and sectors are closed") {
    for (Family f : {Family::OneSidedRV, Family::TwoSidedRV, Family::Disagreement,
                     Family::Swapping}) {
        ModelSpec spec = make_spec(f, Representation::Interface, 0.35);
        for (Sector sec : {Sector::Odd, Sector::Even}) {
            ExactSystem sys = build_generator(spec, 6, sec);
            for (std::size_t s = 0; s < sys.num_states(); ++s) {
                double out = 0;
                for (const auto& e : sys.rows[s]) {
                    CHECK(e.rate >= 0);
                    CHECK(e.col >= 0);  // target inside the sector
                    out += e.rate;
                }
                CHECK(out == doctest::Approx(sys.out_rate[s]).epsilon(1e-12));
                int target_parity = __builtin_popcount(sys.states[s]) & 1;
                CHECK(target_parity == (sec == Sector::Odd ? 1 : 0));
            }
        }
    }
}

TEST_CASE("size guard") {
    ModelSpec spec = make_spec(Family::OneSidedRV, Representation::Interface, 0.5);
    CHECK_THROWS_AS(build_generator(spec, 23, Sector::Odd), std::invalid_argument);
}

TEST_CASE("SARW at alpha=0 never branches") {
    ModelSpec spec = make_spec(Family::Disagreement, Representation::Interface, 0.0);
    ExactSystem sys = build_generator(spec, 6, Sector::Even);
    for (std::size_t s = 0; s < sys.num_states(); ++s) {
        int k = __builtin_popcount(sys.states[s]);
        for (const auto& e : sys.rows[s])
            CHECK(__builtin_popcount(sys.states[e.col]) <= k);
    }
}

TEST_CASE("stationary solve on the one-sided odd sector") {
    ModelSpec spec = make_spec(Family::OneSidedRV, Representation::Interface, 0.5);
    ExactSystem sys = build_generator(spec, 6, Sector::Odd);
    StationaryLaw law = stationary(sys);
    double sum = 0;
    for (double p : law.pi) {
        CHECK(p >= -1e-14);
        sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(law.residual <= 1e-10);
}

TEST_CASE("reducible sectors are rejected with their closed classes") {
    // the even interface sector contains the absorbing empty state
    ModelSpec spec = make_spec(Family::TwoSidedRV, Representation::Interface, 0.5);
    ExactSystem sys = build_generator(spec, 6, Sector::Even);
    CHECK_THROWS_AS(stationary(sys), ReducibleError);

    // restriction to the absorbing state is a single-state chain
    ExactSystem trap = restrict_to_class(sys, 0u);
    CHECK(trap.num_states() == 1);
    StationaryLaw law = stationary(trap);
    REQUIRE(law.pi.size() == 1);
    CHECK(law.pi[0] == doctest::Approx(1.0));
}

TEST_CASE("pure annihilating walk settles on the uniform one-particle class") {
    // two-sided at alpha=1 cannot branch: the odd sector splits and the
    // one-particle states form the minimal closed class
    ModelSpec spec = make_spec(Family::TwoSidedRV, Representation::Interface, 1.0);
    ExactSystem sys = build_generator(spec, 4, Sector::Odd);
    CHECK_THROWS_AS(stationary(sys), ReducibleError);
    ExactSystem cls = restrict_to_class(sys, 0b0001);
    CHECK(cls.num_states() == 4);
    StationaryLaw law = stationary(cls);
    for (double p : law.pi) CHECK(p == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("product-half law is invariant for the alpha=0 one-sided voter model") {
    ModelSpec spec = make_spec(Family::OneSidedRV, Representation::Spin, 0.0);
    ExactSystem sys = build_generator(spec, 6, Sector::Full);
    const std::size_t m = sys.num_states();
    std::vector<double> flow(m, 0.0);
    const double pi = 1.0 / static_cast<double>(m);  // uniform = product-1/2
    for (std::size_t s = 0; s < m; ++s) {
        flow[s] -= pi * sys.out_rate[s];
        for (const auto& e : sys.rows[s]) flow[e.col] += pi * e.rate;
    }
    for (double v : flow) CHECK(std::abs(v) < 1e-12);
    // and E[ones]/N = 1/2 under it
    double mean = 0;
    for (std::size_t s = 0; s < m; ++s) mean += pi * __builtin_popcount(sys.states[s]);
    CHECK(mean / 6.0 == doctest::Approx(0.5));
}

TEST_CASE("exact observables normalize") {
    ModelSpec spec = make_spec(Family::OneSidedRV, Representation::MirrorDual, 0.5);
    ExactSystem sys = build_generator(spec, 6, Sector::Odd);
    StationaryLaw law = stationary(sys);
    auto obs = exact_observables(sys, law,
                                 {Pattern::parse("1"), Pattern::parse("11")});
    double total = 0;
    for (std::size_t k = 1; k < obs.prob_k.size(); k += 2) total += obs.prob_k[k];
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(obs.harmonic[0] == doctest::Approx(1.0).epsilon(1e-12));  // f_1 = 1
    CHECK(obs.mean_particles > 1.0);
}

TEST_CASE("duality residuals vanish for the documented pairings") {
    for (Family f : {Family::OneSidedRV, Family::TwoSidedRV, Family::Disagreement,
                     Family::Swapping})
        for (int n : {4, 5})
            for (double a : {0.0, 0.25, 0.5, 0.75, 1.0})
                CHECK(duality_residual(f, n, a) < 1e-12);
}

TEST_CASE("mismatched pairing is detected") {
    // the one-sided model is NOT dual to its own interface model
    ModelSpec x = make_spec(Family::OneSidedRV, Representation::Spin, 0.7);
    ModelSpec wrong = make_spec(Family::OneSidedRV, Representation::Interface, 0.7);
    CHECK(generator_duality_residual(x, wrong, 6) > 1e-6);
}

TEST_CASE("interface pushforward agrees with the interface generator") {
    for (Family f : {Family::OneSidedRV, Family::TwoSidedRV, Family::Disagreement,
                     Family::Swapping, Family::MixedOneSided})
        for (int n : {4, 6})
            CHECK(pushforward_residual(f, n, 0.4) < 1e-12);
}
