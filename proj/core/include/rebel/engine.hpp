#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rebel/model.hpp"
#include "rebel/pattern.hpp"
#include "rebel/ring.hpp"
#include "rebel/rng.hpp"

namespace rebel {

enum class InitialState { SingleParticle, ParticleCount, ProductHalf };

/// Inputs of one sweep trajectory. alpha(t) runs linearly from
/// alpha_begin to alpha_end over [0, total_time]; the time after burn_in
/// is divided into `bins` equal pieces.
struct SweepPlan {
    ModelSpec spec;  // alpha field ignored, the sweep provides it
    int n_sites = 1024;
    double total_time = 1e6;
    int bins = 128;
    double alpha_begin = 0.0;
    double alpha_end = 0.5;
    std::uint64_t seed = 1;
    InitialState initial = InitialState::SingleParticle;
    int particle_count = 1;  // for InitialState::ParticleCount, odd
    double burn_in = -1.0;   // < 0: default 1% of total_time
    int max_k = 21;          // largest particle count tracked individually, odd
    std::vector<Pattern> patterns;

    double effective_burn_in() const { return burn_in < 0 ? 0.01 * total_time : burn_in; }
    void validate() const;  // throws std::invalid_argument
};

/// Time-weighted accumulators for one bin.
struct BinStats {
    double alpha_time = 0;      // integral of alpha dt
    double elapsed = 0;
    double weighted_ones = 0;   // integral of |Y| dt
    std::vector<double> time_at_k;       // index j <-> k = 2j+1
    std::vector<double> pattern_odd_time;  // translate-averaged odd-overlap time
    double norm_time = 0;       // integral of |Y|/N dt (normalizer channel)
    std::uint64_t events = 0;

    bool empty() const { return elapsed <= 0; }
    double alpha_mean() const { return elapsed > 0 ? alpha_time / elapsed : 0.0; }
    double time_at(int k) const;
    void merge(const BinStats& other);
};

/// Field-wise sum across replicas, in replica index order.
std::vector<BinStats> merge_replicas(const std::vector<std::vector<BinStats>>& per_replica);

/// Ring state with a dense particle index: O(1) membership, O(1) uniform
/// particle choice, O(1) toggle.
class SimState {
public:
    SimState(const RingConfig& y0, std::uint64_t seed);

    int size() const { return n_; }
    int particles() const { return static_cast<int>(positions_.size()); }
    double time() const { return t_; }
    void advance(double dt) { t_ += dt; }
    RingConfig config() const;
    std::uint8_t at(int i) const { return bits_[i]; }
    int particle_at(std::uint32_t idx) const { return positions_[idx]; }
    Rng& rng() { return rng_; }

    void toggle(int site);  // site in [0, n)
    int wrap(int i) const {
        if (i >= n_) return i - n_;
        if (i < 0) return i + n_;
        return i;
    }

private:
    int n_;
    std::vector<std::uint8_t> bits_;
    std::vector<std::int32_t> positions_;
    std::vector<std::int32_t> slot_;
    double t_ = 0;
    Rng rng_;
};

struct StepResult {
    double dt;
    FlipEvent applied;  // rate field unused
};

struct ExtinctError : std::runtime_error {
    ExtinctError() : std::runtime_error("no particles left") {}
};

/// One event of the particle-driven kernel: total rate |Y|, uniform
/// particle, menu entry by probability, unconditional toggle of the two
/// sites. Throws ExtinctError when no particle is left.
StepResult step(SimState& state, const ModelSpec& spec, double alpha);

/// Generic fallback for kernels without a particle menu (Disagreement,
/// Swapping, all Spin representations): full transition scan per event.
StepResult step_generic(SimState& state, const ModelSpec& spec, double alpha);

std::vector<BinStats> run_sweep(const SweepPlan& plan);

/// Independent trajectories with derived seeds; replica r uses
/// replica_seed(plan.seed, r).
std::vector<std::vector<BinStats>> run_replicas(const SweepPlan& plan, int replicas,
                                                int threads = 1);

struct Bitmap {
    int width = 0;
    int rows = 0;
    std::vector<std::uint8_t> pixels;  // row-major; 0 = particle, 255 = absent

    std::uint8_t at(int row, int col) const { return pixels[std::size_t(row) * width + col]; }
};

/// Space-time plot: row r is the state at time r * sample_dt over a fixed
/// window of `width` sites centered on the initial particle.
Bitmap render_spacetime(const ModelSpec& spec, double alpha, int n_sites, int width,
                        double duration, double sample_dt, std::uint64_t seed,
                        InitialState initial = InitialState::SingleParticle);

/// Binary PGM (P5), one byte per pixel.
void write_pgm(const Bitmap& bmp, std::ostream& os);

/// Splits [t0, t1) into per-bin segments; used by engine and edge.
class BinGrid {
public:
    BinGrid(double burn_in, double total_time, int bins);
    int bins() const { return bins_; }
    double bin_length() const { return bin_len_; }

    /// Calls fn(bin_index, segment_length) for the parts of [t0, t1)
    /// inside [burn_in, total_time).
    template <class Fn>
    void for_segments(double t0, double t1, Fn&& fn) const {
        if (t1 > end_) t1 = end_;
        if (t0 < burn_) t0 = burn_;
        if (t0 >= t1) return;
        int b = index_of(t0);
        while (t0 < t1) {
            double bin_end = burn_ + (b + 1) * bin_len_;
            double seg_end = t1 < bin_end ? t1 : bin_end;
            fn(b, seg_end - t0);
            t0 = seg_end;
            ++b;
        }
    }

    int index_of(double t) const {
        int b = static_cast<int>((t - burn_) / bin_len_);
        if (b < 0) b = 0;
        if (b >= bins_) b = bins_ - 1;
        return b;
    }

private:
    double burn_, end_, bin_len_;
    int bins_;
};

}  // namespace rebel
