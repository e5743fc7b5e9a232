#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rebel/model.hpp"
#include "rebel/pattern.hpp"

namespace rebel {

enum class Sector { Odd, Even, Full };

/// Exhaustively enumerated generator on a small ring. Q(s,s') holds the
/// rate of s -> s'; the diagonal is the negative row sum.
struct ExactSystem {
    ModelSpec spec;
    int n_sites = 0;
    Sector sector = Sector::Full;
    std::vector<std::uint32_t> states;    // bit i = site i
    std::vector<std::int32_t> index_of;   // mask -> state index, -1 outside sector

    struct Entry {
        std::int32_t col;
        double rate;
    };
    std::vector<std::vector<Entry>> rows;  // off-diagonal, aggregated per target
    std::vector<double> out_rate;          // -diagonal

    std::size_t num_states() const { return states.size(); }
};

struct ReducibleError : std::runtime_error {
    explicit ReducibleError(std::string msg, std::vector<std::uint32_t> class_reps)
        : std::runtime_error(std::move(msg)), closed_class_reps(std::move(class_reps)) {}
    std::vector<std::uint32_t> closed_class_reps;
};

/// Builds Q by scanning transitions_at over every state and anchor.
/// N <= 22 (memory guard).
ExactSystem build_generator(const ModelSpec& spec, int n, Sector sector);

/// Restriction of a system to the communicating class containing `mask`.
ExactSystem restrict_to_class(const ExactSystem& sys, std::uint32_t mask);

struct StationaryLaw {
    std::vector<double> pi;
    double residual = 0;  // max |pi Q|
};

/// Direct dense solve of pi Q = 0, sum pi = 1. Requires an irreducible
/// sector; throws ReducibleError listing closed classes otherwise.
StationaryLaw stationary(const ExactSystem& sys);

struct ExactObservables {
    double mean_particles = 0;
    std::vector<double> prob_k;     // P[|Y| = k], index k = 0..N
    std::vector<double> harmonic;   // f_{x,N} per requested pattern
};

ExactObservables exact_observables(const ExactSystem& sys, const StationaryLaw& law,
                                   const std::vector<Pattern>& patterns = {});

/// Max over (x, y) of |G_X psi(.,y)(x) - G_Y psi(x,.)(y)| with
/// psi(x,y) = (-1)^|xy|. Exhaustive; N <= 12.
double generator_duality_residual(const ModelSpec& spec_x, const ModelSpec& spec_y, int n);

/// The documented dual of a spin family: OneSidedRV <-> its mirror-dual
/// kernel, TwoSidedRV <-> its own interface model, Disagreement <-> DBARW,
/// Swapping <-> SARW.
ModelSpec dual_of(Family family, double alpha);

double duality_residual(Family family, int n, double alpha);

/// Max discrepancy between the spin generator pushed through interface_of
/// and the interface generator on kink space. N <= 8 intended.
double pushforward_residual(Family family, int n, double alpha);

}  // namespace rebel
