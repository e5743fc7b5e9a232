#include "rebel/engine.hpp"

#include <atomic>
#include <cassert>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace rebel {

void SweepPlan::validate() const {
    if (n_sites < 4) throw std::invalid_argument("N must be >= 4");
    if (total_time <= 0) throw std::invalid_argument("T must be > 0");
    if (bins < 1) throw std::invalid_argument("n must be >= 1");
    if (alpha_begin < 0 || alpha_begin > 1 || alpha_end < 0 || alpha_end > 1)
        throw std::invalid_argument("alpha endpoints must be in [0,1]");
    if (max_k < 1 || max_k % 2 == 0) throw std::invalid_argument("max_k must be odd");
    if (effective_burn_in() >= total_time)
        throw std::invalid_argument("burn-in must be smaller than T");
    if (initial == InitialState::ParticleCount &&
        (particle_count < 1 || particle_count % 2 == 0 || particle_count > n_sites))
        throw std::invalid_argument("initial particle count must be odd and fit the ring");
    if (spec.representation != Representation::Spin &&
        initial != InitialState::ProductHalf && particle_count % 2 == 0)
        throw std::invalid_argument("interface runs need an odd initial particle count");
}

double BinStats::time_at(int k) const {
    if (k < 1 || k % 2 == 0) throw std::invalid_argument("k must be odd and >= 1");
    std::size_t j = (k - 1) / 2;
    return j < time_at_k.size() ? time_at_k[j] : 0.0;
}

void BinStats::merge(const BinStats& other) {
    alpha_time += other.alpha_time;
    elapsed += other.elapsed;
    weighted_ones += other.weighted_ones;
    norm_time += other.norm_time;
    events += other.events;
    if (time_at_k.size() < other.time_at_k.size()) time_at_k.resize(other.time_at_k.size(), 0.0);
    for (std::size_t i = 0; i < other.time_at_k.size(); ++i) time_at_k[i] += other.time_at_k[i];
    if (pattern_odd_time.size() < other.pattern_odd_time.size())
        pattern_odd_time.resize(other.pattern_odd_time.size(), 0.0);
    for (std::size_t i = 0; i < other.pattern_odd_time.size(); ++i)
        pattern_odd_time[i] += other.pattern_odd_time[i];
}

std::vector<BinStats> merge_replicas(const std::vector<std::vector<BinStats>>& per_replica) {
    std::vector<BinStats> out;
    for (const auto& rep : per_replica) {
        if (out.size() < rep.size()) out.resize(rep.size());
        for (std::size_t b = 0; b < rep.size(); ++b) out[b].merge(rep[b]);
    }
    return out;
}

SimState::SimState(const RingConfig& y0, std::uint64_t seed)
    : n_(y0.size()), bits_(y0.bits()), slot_(y0.size(), -1), rng_(seed) {
    for (int i = 0; i < n_; ++i)
        if (bits_[i]) {
            slot_[i] = static_cast<std::int32_t>(positions_.size());
            positions_.push_back(i);
        }
}

RingConfig SimState::config() const { return RingConfig::from_bits(bits_); }

void SimState::toggle(int site) {
    if (bits_[site]) {
        bits_[site] = 0;
        std::int32_t idx = slot_[site];
        std::int32_t last = positions_.back();
        positions_[idx] = last;
        slot_[last] = idx;
        positions_.pop_back();
        slot_[site] = -1;
    } else {
        bits_[site] = 1;
        slot_[site] = static_cast<std::int32_t>(positions_.size());
        positions_.push_back(site);
    }
}

namespace {

RingConfig initial_config(const SweepPlan& plan) {
    RingConfig y(plan.n_sites);
    switch (plan.initial) {
        case InitialState::SingleParticle:
            y.set(plan.n_sites / 2, 1);
            break;
        case InitialState::ParticleCount:
            for (int i = 0; i < plan.particle_count; ++i)
                y.set(static_cast<int>(std::int64_t(i) * plan.n_sites / plan.particle_count), 1);
            if (y.ones() != plan.particle_count)
                throw std::invalid_argument("particle count does not fit the ring");
            break;
        case InitialState::ProductHalf: {
            Rng r(splitmix64(plan.seed) ^ 0x5ca1ab1eULL);
            for (int i = 0; i < plan.n_sites; ++i)
                if (r.bits() & 1) y.set(i, 1);
            break;
        }
    }
    return y;
}

// Per-translate overlap parities for the harmonic-function channels.
// A toggle at site d flips the parity of translate (d - q) for each one
// bit q of the pattern, so updates cost O(|pattern|) per toggled site.
class PatternTracker {
public:
    PatternTracker(const std::vector<Pattern>& pats, const SimState& st) : pats_(&pats) {
        n_ = st.size();
        par_.resize(pats.size());
        counts_.assign(pats.size(), 0);
        for (std::size_t p = 0; p < pats.size(); ++p) {
            par_[p].assign(n_, 0);
            for (int s = 0; s < n_; ++s) {
                std::uint8_t parity = 0;
                for (int q : pats[p].one_offsets) parity ^= st.at((s + q) % n_);
                par_[p][s] = parity;
                counts_[p] += parity;
            }
        }
    }

    void on_toggle(int site) {
        for (std::size_t p = 0; p < par_.size(); ++p) {
            for (int q : (*pats_)[p].one_offsets) {
                int s = site - q;
                if (s < 0) s += n_;
                par_[p][s] ^= 1;
                counts_[p] += par_[p][s] ? 1 : -1;
            }
        }
    }

    int count(std::size_t p) const { return counts_[p]; }
    std::size_t size() const { return par_.size(); }

private:
    const std::vector<Pattern>* pats_;
    int n_ = 0;
    std::vector<std::vector<std::uint8_t>> par_;
    std::vector<int> counts_;
};

#ifndef NDEBUG
double total_anchor_rate(const ModelSpec& spec, const RingConfig& y, double alpha) {
    ModelSpec s = spec;
    s.alpha = alpha;
    double r = 0;
    for (int i = 0; i < y.size(); ++i)
        for (const auto& e : transitions_at(s, y, i)) r += e.rate;
    return r;
}
#endif

}  // namespace

StepResult step(SimState& state, const ModelSpec& spec, double alpha) {
    const int p = state.particles();
    if (p == 0) throw ExtinctError{};
    const double dt = state.rng().exponential(static_cast<double>(p));
    const int j = state.particle_at(state.rng().below(p));
    int d0, d1;
    sample_menu_offsets(spec.family, spec.representation, alpha, state.rng().uniform(), d0, d1);
    const int s0 = state.wrap(j + d0);
    const int s1 = state.wrap(j + d1);
    state.toggle(s0);
    state.toggle(s1);
    state.advance(dt);
    return {dt, {{s0, s1}, 2, 0.0}};
}

StepResult step_generic(SimState& state, const ModelSpec& spec, double alpha) {
    ModelSpec s = spec;
    s.alpha = alpha;
    RingConfig y = state.config();
    std::vector<FlipEvent> events;
    double total = 0;
    for (int i = 0; i < y.size(); ++i)
        for (auto& e : transitions_at(s, y, i))
            if (e.rate > 0) {
                total += e.rate;
                events.push_back(e);
            }
    if (total <= 0) {
        // absorbing state (trap); signalled by an empty event
        return {std::numeric_limits<double>::infinity(), {{0, 0}, 0, 0.0}};
    }
    const double dt = state.rng().exponential(total);
    double u = state.rng().uniform() * total;
    std::size_t pick = 0;
    for (; pick + 1 < events.size(); ++pick) {
        u -= events[pick].rate;
        if (u <= 0) break;
    }
    const FlipEvent& e = events[pick];
    for (int k = 0; k < e.nsites; ++k) state.toggle(e.sites[k]);
    state.advance(dt);
    return {dt, e};
}

std::vector<BinStats> run_sweep(const SweepPlan& plan) {
    plan.validate();
    const double T = plan.total_time;
    const double burn = plan.effective_burn_in();
    const BinGrid grid(burn, T, plan.bins);
    const bool fast = has_particle_menu(plan.spec);
    const bool interface_rep = plan.spec.representation != Representation::Spin;
    const int max_j = (plan.max_k - 1) / 2;

    std::vector<BinStats> bins(plan.bins);
    for (auto& b : bins) {
        b.time_at_k.assign(max_j + 1, 0.0);
        b.pattern_odd_time.assign(plan.patterns.size(), 0.0);
    }

    SimState st(initial_config(plan), plan.seed);
    std::optional<PatternTracker> tracker;
    if (!plan.patterns.empty()) tracker.emplace(plan.patterns, st);

    const double inv_n = 1.0 / plan.n_sites;
    const double da = plan.alpha_end - plan.alpha_begin;
    std::vector<double> odd_frac(plan.patterns.size(), 0.0);

#ifndef NDEBUG
    const int init_parity = st.particles() & 1;
    std::uint64_t check_countdown = 1 << 20;
#endif

    double t = 0;
    while (true) {
        const int p_before = st.particles();
        if (p_before == 0 && interface_rep) break;  // extinct: remaining bins stay empty
        const double alpha = plan.alpha_begin + da * (t / T);

        StepResult sr;
        if (fast) {
            sr = step(st, plan.spec, alpha);
        } else {
            sr = step_generic(st, plan.spec, alpha);
        }

        const double t_end = t + sr.dt;
        const double clip = t_end < T ? t_end : T;
        if (tracker)
            for (std::size_t p = 0; p < tracker->size(); ++p)
                odd_frac[p] = tracker->count(p) * inv_n;
        grid.for_segments(t, clip, [&](int b, double seg) {
            BinStats& bs = bins[b];
            bs.alpha_time += alpha * seg;
            bs.elapsed += seg;
            bs.weighted_ones += p_before * seg;
            bs.norm_time += p_before * inv_n * seg;
            if ((p_before & 1) && p_before <= plan.max_k)
                bs.time_at_k[(p_before - 1) / 2] += seg;
            for (std::size_t p = 0; p < odd_frac.size(); ++p)
                bs.pattern_odd_time[p] += odd_frac[p] * seg;
        });

        if (sr.applied.nsites == 0) break;  // trap (spin representation)
        if (t_end >= T) break;
        if (tracker)
            for (int k = 0; k < sr.applied.nsites; ++k) tracker->on_toggle(sr.applied.sites[k]);
        t = t_end;
        if (t >= burn) bins[grid.index_of(t)].events += 1;

#ifndef NDEBUG
        if (interface_rep) assert((st.particles() & 1) == init_parity);
        if (fast && --check_countdown == 0) {
            check_countdown = 1 << 20;
            double r = total_anchor_rate(plan.spec, st.config(), alpha);
            assert(std::abs(r - st.particles()) < 1e-9 * (1 + st.particles()));
        }
#endif
    }
    return bins;
}

std::vector<std::vector<BinStats>> run_replicas(const SweepPlan& plan, int replicas,
                                                int threads) {
    std::vector<std::vector<BinStats>> out(replicas);
    auto work = [&](int r) {
        SweepPlan p = plan;
        p.seed = replica_seed(plan.seed, static_cast<std::uint64_t>(r));
        out[r] = run_sweep(p);
    };
    if (threads <= 1) {
        for (int r = 0; r < replicas; ++r) work(r);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < threads && w < replicas; ++w)
            pool.emplace_back([&] {
                for (int r; (r = next.fetch_add(1)) < replicas;) work(r);
            });
        for (auto& th : pool) th.join();
    }
    return out;
}

Bitmap render_spacetime(const ModelSpec& spec, double alpha, int n_sites, int width,
                        double duration, double sample_dt, std::uint64_t seed,
                        InitialState initial) {
    if (width > n_sites) throw std::invalid_argument("window wider than ring");
    if (duration < 0) throw std::invalid_argument("duration must be >= 0");
    if (duration > 0 && sample_dt <= 0) throw std::invalid_argument("sample_dt must be > 0");

    SweepPlan plan;
    plan.spec = spec;
    plan.n_sites = n_sites;
    plan.initial = initial;
    plan.seed = seed;
    SimState st(initial_config(plan), seed);
    const bool fast = has_particle_menu(spec);
    const int origin = ((n_sites / 2 - width / 2) % n_sites + n_sites) % n_sites;

    Bitmap bmp;
    bmp.width = width;
    bmp.rows = duration > 0 ? static_cast<int>(duration / sample_dt) + 1 : 1;
    bmp.pixels.assign(std::size_t(bmp.rows) * width, 255);

    // window copy of the state holding during the current interval; step
    // applies its toggles to st immediately, so rows are drawn from this
    // copy and the event is folded in afterwards
    std::vector<std::uint8_t> cur(width);
    for (int c = 0; c < width; ++c) cur[c] = st.at((origin + c) % n_sites);

    auto fill_row = [&](int r) {
        std::uint8_t* row = bmp.pixels.data() + std::size_t(r) * width;
        for (int c = 0; c < width; ++c) row[c] = cur[c] ? 0 : 255;
    };

    int next_row = 0;
    double t = 0;
    while (next_row < bmp.rows) {
        double dt;
        StepResult sr{0, {{0, 0}, 0, 0.0}};
        if (st.particles() == 0) {
            dt = std::numeric_limits<double>::infinity();
        } else {
            sr = fast ? step(st, spec, alpha) : step_generic(st, spec, alpha);
            dt = sr.dt;
        }
        const double t_end = t + dt;
        while (next_row < bmp.rows && next_row * sample_dt < t_end) {
            fill_row(next_row);
            ++next_row;
        }
        if (!std::isfinite(t_end)) break;
        for (int k = 0; k < sr.applied.nsites; ++k) {
            int col = ((sr.applied.sites[k] - origin) % n_sites + n_sites) % n_sites;
            if (col < width) cur[col] ^= 1;
        }
        t = t_end;
    }
    return bmp;
}

void write_pgm(const Bitmap& bmp, std::ostream& os) {
    os << "P5\n" << bmp.width << " " << bmp.rows << "\n255\n";
    os.write(reinterpret_cast<const char*>(bmp.pixels.data()),
             static_cast<std::streamsize>(bmp.pixels.size()));
}

BinGrid::BinGrid(double burn_in, double total_time, int bins)
    : burn_(burn_in), end_(total_time), bin_len_((total_time - burn_in) / bins), bins_(bins) {
    if (bins < 1 || bin_len_ <= 0) throw std::invalid_argument("bad bin grid");
}

}  // namespace rebel
