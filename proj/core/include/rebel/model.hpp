#pragma once

#include <stdexcept>
#include <vector>

#include "rebel/ring.hpp"

namespace rebel {

/// Model families. MixedOneSided is the variant whose voter updates look
/// right and whose minority updates look left.
enum class Family { OneSidedRV, TwoSidedRV, Disagreement, Swapping, MixedOneSided };

/// Spin: the voter model itself. Interface: its kink process.
/// MirrorDual: the mirror image of the interface process (the dual of the
/// one-sided model).
enum class Representation { Spin, Interface, MirrorDual };

struct ModelSpec {
    Family family = Family::OneSidedRV;
    Representation representation = Representation::Interface;
    double alpha = 0.5;
};

/// Validates the family/representation/alpha combination.
/// MirrorDual only exists for OneSidedRV; the other duals are reachable
/// as Interface representations of the paired family.
ModelSpec make_spec(Family family, Representation representation, double alpha);

const char* family_name(Family f);
const char* representation_name(Representation r);

/// Rate at which site i flips in the Spin representation. For Swapping
/// this is the single-site channel only; the pair flip is reported by
/// transitions_at.
double spin_flip_rate(const ModelSpec& spec, const RingConfig& x, int i);

/// All transitions anchored at index i (the i of the displayed rate
/// formula), with rates evaluated on y.
std::vector<FlipEvent> transitions_at(const ModelSpec& spec, const RingConfig& y, int i);

/// Per-particle event menu: offsets relative to a particle position j and
/// the probability of each choice. Per-particle rate is 1 for all families
/// that admit this form.
struct MenuEntry {
    int offsets[2];
    double prob;
};

struct ParticleMenu {
    std::vector<MenuEntry> entries;
    double particle_rate = 1.0;
};

/// Exact regrouping of the interface/mirror-dual rates by the particle
/// that enables each transition. Defined for OneSidedRV, TwoSidedRV and
/// MixedOneSided; throws for Disagreement/Swapping, whose kernels are not
/// purely particle-enabled at uniform rate.
ParticleMenu particle_menu(const ModelSpec& spec);

bool has_particle_menu(const ModelSpec& spec);

/// Menu with all offsets negated (the mirror-reflected kernel).
ParticleMenu mirrored(const ParticleMenu& menu);

/// Sampling form of particle_menu for hot loops: maps a uniform draw u to
/// the chosen offset pair. Must agree with particle_menu (tested).
inline void sample_menu_offsets(Family family, Representation rep, double alpha, double u,
                                int& d0, int& d1) {
    switch (family) {
        case Family::OneSidedRV:
            if (rep == Representation::Interface) {
                if (u < alpha) { d0 = 0; d1 = 1; }
                else           { d0 = 1; d1 = 2; }
            } else {
                if (u < alpha) { d0 = -1; d1 = 0; }
                else           { d0 = -2; d1 = -1; }
            }
            break;
        case Family::TwoSidedRV:
            if (u < 0.5 * alpha)            { d0 = 0; d1 = 1; }
            else if (u < alpha)             { d0 = -1; d1 = 0; }
            else if (u < 0.5 + 0.5 * alpha) { d0 = 1; d1 = 2; }
            else                            { d0 = -2; d1 = -1; }
            break;
        default:  // MixedOneSided interface
            if (u < alpha) { d0 = -1; d1 = 0; }
            else           { d0 = 1; d1 = 2; }
            break;
    }
}

}  // namespace rebel
