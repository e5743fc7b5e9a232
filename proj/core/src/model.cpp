#include "rebel/model.hpp"

namespace rebel {

namespace {
inline double ind(bool b) { return b ? 1.0 : 0.0; }
}

ModelSpec make_spec(Family family, Representation representation, double alpha) {
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in [0,1]");
    if (representation == Representation::MirrorDual && family != Family::OneSidedRV)
        throw std::invalid_argument(
            "MirrorDual is only defined for the one-sided family; the other duals "
            "are Interface representations of the paired family");
    return ModelSpec{family, representation, alpha};
}

const char* family_name(Family f) {
    switch (f) {
        case Family::OneSidedRV: return "one-sided";
        case Family::TwoSidedRV: return "two-sided";
        case Family::Disagreement: return "disagreement";
        case Family::Swapping: return "swapping";
        case Family::MixedOneSided: return "mixed";
    }
    return "?";
}

const char* representation_name(Representation r) {
    switch (r) {
        case Representation::Spin: return "spin";
        case Representation::Interface: return "interface";
        case Representation::MirrorDual: return "mirror-dual";
    }
    return "?";
}

double spin_flip_rate(const ModelSpec& spec, const RingConfig& x, int i) {
    const double a = spec.alpha;
    switch (spec.family) {
        case Family::OneSidedRV:
            return a * ind(x.at(i - 1) != x.at(i)) + (1 - a) * ind(x.at(i - 2) != x.at(i - 1));
        case Family::TwoSidedRV:
            return 0.5 * a * (ind(x.at(i - 1) != x.at(i)) + ind(x.at(i) != x.at(i + 1))) +
                   0.5 * (1 - a) *
                       (ind(x.at(i - 2) != x.at(i - 1)) + ind(x.at(i + 1) != x.at(i + 2)));
        case Family::Disagreement:
            return a * (ind(x.at(i - 1) != x.at(i)) + ind(x.at(i) != x.at(i + 1))) +
                   (1 - a) * ind(x.at(i - 1) != x.at(i + 1));
        case Family::Swapping:
            // single-site channel; the pair flip is a separate transition
            return a * (ind(x.at(i - 1) != x.at(i)) + ind(x.at(i) != x.at(i + 1)));
        case Family::MixedOneSided:
            return a * ind(x.at(i) != x.at(i + 1)) + (1 - a) * ind(x.at(i - 2) != x.at(i - 1));
    }
    return 0.0;
}

std::vector<FlipEvent> transitions_at(const ModelSpec& spec, const RingConfig& y, int i) {
    const double a = spec.alpha;
    std::vector<FlipEvent> out;

    if (spec.representation == Representation::Spin) {
        out.push_back({{y.wrap(i), 0}, 1, spin_flip_rate(spec, y, i)});
        if (spec.family == Family::Swapping)
            out.push_back(
                {{y.wrap(i), y.wrap(i + 1)}, 2, (1 - a) * ind(y.at(i) != y.at(i + 1))});
        return out;
    }

    if (spec.representation == Representation::MirrorDual) {
        // one-sided mirror dual: flip {i-1, i}
        out.push_back({{y.wrap(i - 1), y.wrap(i)}, 2,
                       a * ind(y.at(i) == 1) + (1 - a) * ind(y.at(i + 1) == 1)});
        return out;
    }

    switch (spec.family) {
        case Family::OneSidedRV:
            out.push_back({{y.wrap(i), y.wrap(i + 1)}, 2,
                           a * ind(y.at(i) == 1) + (1 - a) * ind(y.at(i - 1) == 1)});
            break;
        case Family::TwoSidedRV:
            out.push_back({{y.wrap(i), y.wrap(i + 1)}, 2,
                           0.5 * a * (ind(y.at(i) == 1) + ind(y.at(i + 1) == 1)) +
                               0.5 * (1 - a) * (ind(y.at(i - 1) == 1) + ind(y.at(i + 2) == 1))});
            break;
        case Family::Disagreement:
            // SARW
            out.push_back({{y.wrap(i), y.wrap(i + 1)}, 2,
                           a * (ind(y.at(i) == 1) + ind(y.at(i + 1) == 1)) +
                               (1 - a) * ind(y.at(i) != y.at(i + 1))});
            break;
        case Family::Swapping:
            // DBARW
            out.push_back({{y.wrap(i), y.wrap(i + 1)}, 2,
                           a * (ind(y.at(i) == 1) + ind(y.at(i + 1) == 1))});
            out.push_back({{y.wrap(i - 1), y.wrap(i + 1)}, 2, (1 - a) * ind(y.at(i) == 1)});
            break;
        case Family::MixedOneSided:
            // kink pushforward of the mixed spin kernel: flip {i-1, i}
            out.push_back({{y.wrap(i - 1), y.wrap(i)}, 2,
                           a * ind(y.at(i) == 1) + (1 - a) * ind(y.at(i - 2) == 1)});
            break;
    }
    return out;
}

bool has_particle_menu(const ModelSpec& spec) {
    if (spec.representation == Representation::Spin) return false;
    return spec.family == Family::OneSidedRV || spec.family == Family::TwoSidedRV ||
           spec.family == Family::MixedOneSided;
}

ParticleMenu particle_menu(const ModelSpec& spec) {
    if (!has_particle_menu(spec))
        throw std::invalid_argument("kernel is not particle-enabled at uniform rate");
    const double a = spec.alpha;
    ParticleMenu m;
    m.particle_rate = 1.0;
    if (spec.family == Family::OneSidedRV) {
        if (spec.representation == Representation::Interface) {
            m.entries = {{{0, 1}, a}, {{1, 2}, 1 - a}};
        } else {
            m.entries = {{{-1, 0}, a}, {{-2, -1}, 1 - a}};
        }
    } else if (spec.family == Family::TwoSidedRV) {
        m.entries = {{{0, 1}, 0.5 * a}, {{-1, 0}, 0.5 * a},
                     {{1, 2}, 0.5 * (1 - a)}, {{-2, -1}, 0.5 * (1 - a)}};
    } else {  // MixedOneSided interface
        m.entries = {{{-1, 0}, a}, {{1, 2}, 1 - a}};
    }
    std::erase_if(m.entries, [](const MenuEntry& e) { return e.prob == 0.0; });
    return m;
}

ParticleMenu mirrored(const ParticleMenu& menu) {
    ParticleMenu out = menu;
    for (auto& e : out.entries) {
        int a = -e.offsets[0], b = -e.offsets[1];
        e.offsets[0] = b < a ? b : a;
        e.offsets[1] = b < a ? a : b;
    }
    return out;
}

}  // namespace rebel
