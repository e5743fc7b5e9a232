#pragma once

#include <cstdint>
#include <vector>

#include "rebel/engine.hpp"
#include "rebel/model.hpp"
#include "rebel/observables.hpp"
#include "rebel/rng.hpp"

namespace rebel {

enum class EdgeSide { Left, Right };

/// The interface process viewed from its leftmost particle on a finite
/// window of W sites. Site 0 is the anchor (always occupied); particles
/// pushed past W are discarded. The Right side is simulated as the
/// mirror-reflected kernel, speeds negated by the caller.
class FrameSim {
public:
    FrameSim(const ModelSpec& spec, int window, std::uint64_t seed, bool mirror = false);

    /// Seeds the window with the given relative occupation (bit 0 must
    /// be 1).
    void reset(const std::vector<std::uint8_t>& bits);

    /// One event; returns holding time. Re-anchors if the leftmost
    /// particle moved; on extinction restarts from a single particle.
    double step(double alpha);

    int window() const { return w_; }
    int particles() const { return static_cast<int>(positions_.size()); }
    std::uint8_t at(int rel) const { return rel >= 0 && rel < w_ ? bits_[rel] : 0; }
    std::int64_t displacement() const { return displacement_; }
    std::uint64_t dropped() const { return dropped_; }
    std::uint64_t restarts() const { return restarts_; }
    std::uint64_t events() const { return events_; }
    double time() const { return t_; }

private:
    void toggle(int rel);
    void shift(int m);

    ModelSpec spec_;
    bool mirror_;
    int w_;
    std::vector<std::uint8_t> bits_;      // rel 0..w-1
    std::uint8_t margin_[2] = {0, 0};     // rel -2, -1 (transient)
    std::vector<std::int32_t> positions_; // rel coords in [0, w)
    std::vector<std::int32_t> slot_;
    std::int64_t displacement_ = 0;
    std::uint64_t dropped_ = 0, restarts_ = 0, events_ = 0;
    double t_ = 0;
    Rng rng_;
};

struct EdgeBin {
    double alpha_time = 0;
    double elapsed = 0;
    double displacement = 0;  // anchor movement attributed to this bin
    std::uint64_t restarts = 0;
    std::uint64_t events = 0;

    double alpha_mean() const { return elapsed > 0 ? alpha_time / elapsed : 0.0; }
    double speed() const { return elapsed > 0 ? displacement / elapsed : 0.0; }
    void merge(const EdgeBin& o);
};

/// Sweep protocol for edge speeds. Uses plan.n_sites as the window width.
std::vector<EdgeBin> edge_speed_sweep(const SweepPlan& plan, EdgeSide side);

std::vector<std::vector<EdgeBin>> edge_replicas(const SweepPlan& plan, EdgeSide side,
                                                int replicas, int threads = 1);

/// Per-bin speed curve with jackknife errors; Right-side speeds are
/// already negated.
std::vector<CurvePoint> edge_speed_curve(const std::vector<std::vector<EdgeBin>>& reps,
                                         EdgeSide side);

}  // namespace rebel
