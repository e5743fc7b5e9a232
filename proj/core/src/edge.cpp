#include "rebel/edge.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <stdexcept>
#include <thread>

namespace rebel {

FrameSim::FrameSim(const ModelSpec& spec, int window, std::uint64_t seed, bool mirror)
    : spec_(spec), mirror_(mirror), w_(window), bits_(window, 0), slot_(window, -1),
      rng_(seed) {
    if (window < 64) throw std::invalid_argument("window must be >= 64");
    if (!has_particle_menu(spec))
        throw std::invalid_argument("edge tracking needs a particle-enabled kernel");
    reset({1});
}

void FrameSim::reset(const std::vector<std::uint8_t>& bits) {
    if (bits.empty() || bits[0] != 1)
        throw std::invalid_argument("frame state must have its anchor occupied");
    std::fill(bits_.begin(), bits_.end(), 0);
    std::fill(slot_.begin(), slot_.end(), -1);
    positions_.clear();
    margin_[0] = margin_[1] = 0;
    for (std::size_t i = 0; i < bits.size() && i < static_cast<std::size_t>(w_); ++i)
        if (bits[i]) toggle(static_cast<int>(i));
}

void FrameSim::toggle(int rel) {
    if (rel < 0) {
        margin_[rel + 2] ^= 1;
        return;
    }
    if (bits_[rel]) {
        bits_[rel] = 0;
        std::int32_t idx = slot_[rel];
        std::int32_t last = positions_.back();
        positions_[idx] = last;
        slot_[last] = idx;
        positions_.pop_back();
        slot_[rel] = -1;
    } else {
        bits_[rel] = 1;
        slot_[rel] = static_cast<std::int32_t>(positions_.size());
        positions_.push_back(rel);
    }
}

void FrameSim::shift(int m) {
    // translate so the new leftmost sits at rel 0; sites pushed past the
    // window are discarded, sites entering from the right are vacant
    std::vector<std::int32_t> old;
    old.swap(positions_);
    if (margin_[0]) old.push_back(-2);
    if (margin_[1]) old.push_back(-1);
    margin_[0] = margin_[1] = 0;
    for (std::int32_t p : old)
        if (p >= 0) {
            bits_[p] = 0;
            slot_[p] = -1;
        }
    for (std::int32_t p : old) {
        int q = p - m;
        if (q >= w_) {
            ++dropped_;
            continue;
        }
        bits_[q] = 1;
        slot_[q] = static_cast<std::int32_t>(positions_.size());
        positions_.push_back(q);
    }
    displacement_ += m;
}

double FrameSim::step(double alpha) {
    const int p = static_cast<int>(positions_.size());
    if (p == 0) throw ExtinctError{};
    const double dt = rng_.exponential(static_cast<double>(p));
    const int j = positions_[rng_.below(p)];
    int d0 = 0, d1 = 0;
    sample_menu_offsets(spec_.family, spec_.representation, alpha, rng_.uniform(), d0, d1);
    if (mirror_) {
        int a = -d0, b = -d1;
        d0 = std::min(a, b);
        d1 = std::max(a, b);
    }
    bool low_touched = false;
    for (int d : {d0, d1}) {
        int q = j + d;
        if (q >= w_) {
            ++dropped_;
            continue;
        }
        toggle(q);
        if (q <= 0) low_touched = true;
    }
    ++events_;
    t_ += dt;

    if (low_touched || bits_[0] == 0) {
        int m;
        if (margin_[0]) m = -2;
        else if (margin_[1]) m = -1;
        else if (bits_[0]) m = 0;
        else if (!positions_.empty()) {
            m = *std::min_element(positions_.begin(), positions_.end());
        } else {
            // parity broken by drop-off: restart from a single particle
            ++restarts_;
            reset({1});
            return dt;
        }
        if (m != 0) shift(m);
    }
    assert(positions_.empty() || bits_[0] == 1);
    return dt;
}

void EdgeBin::merge(const EdgeBin& o) {
    alpha_time += o.alpha_time;
    elapsed += o.elapsed;
    displacement += o.displacement;
    restarts += o.restarts;
    events += o.events;
}

std::vector<EdgeBin> edge_speed_sweep(const SweepPlan& plan, EdgeSide side) {
    plan.validate();
    const double T = plan.total_time;
    const double burn = plan.effective_burn_in();
    const BinGrid grid(burn, T, plan.bins);
    const double da = plan.alpha_end - plan.alpha_begin;

    FrameSim sim(plan.spec, plan.n_sites, plan.seed, side == EdgeSide::Right);
    if (plan.initial == InitialState::ParticleCount && plan.particle_count > 1) {
        std::vector<std::uint8_t> init(plan.n_sites, 0);
        for (int i = 0; i < plan.particle_count; ++i)
            init[std::int64_t(i) * plan.n_sites / plan.particle_count] = 1;
        init[0] = 1;
        sim.reset(init);
    }

    std::vector<EdgeBin> bins(plan.bins);
    double t = 0;
    while (t < T) {
        const double alpha = plan.alpha_begin + da * (t / T);
        std::int64_t d_before = sim.displacement();
        std::uint64_t r_before = sim.restarts();
        double dt = sim.step(alpha);
        double t_end = std::min(t + dt, T);
        double shift = static_cast<double>(sim.displacement() - d_before);
        grid.for_segments(t, t_end, [&](int b, double seg) {
            bins[b].alpha_time += alpha * seg;
            bins[b].elapsed += seg;
        });
        // the anchor moves at the event time; attribute the whole shift
        // to the bin containing it
        if (t + dt < T && t + dt >= burn) {
            EdgeBin& eb = bins[grid.index_of(t + dt)];
            eb.displacement += shift;
            eb.events += 1;
            eb.restarts += sim.restarts() - r_before;
        }
        t += dt;
    }
    return bins;
}

std::vector<std::vector<EdgeBin>> edge_replicas(const SweepPlan& plan, EdgeSide side,
                                                int replicas, int threads) {
    std::vector<std::vector<EdgeBin>> out(replicas);
    auto work = [&](int r) {
        SweepPlan p = plan;
        p.seed = replica_seed(plan.seed, static_cast<std::uint64_t>(r));
        out[r] = edge_speed_sweep(p, side);
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

std::vector<CurvePoint> edge_speed_curve(const std::vector<std::vector<EdgeBin>>& reps,
                                         EdgeSide side) {
    if (reps.empty()) return {};
    const double sign = side == EdgeSide::Right ? -1.0 : 1.0;
    const std::size_t nbins = reps[0].size();
    std::vector<CurvePoint> out;
    std::vector<double> num(reps.size()), den(reps.size());
    for (std::size_t b = 0; b < nbins; ++b) {
        double at = 0, el = 0;
        for (std::size_t r = 0; r < reps.size(); ++r) {
            num[r] = sign * reps[r][b].displacement;
            den[r] = reps[r][b].elapsed;
            at += reps[r][b].alpha_time;
            el += reps[r][b].elapsed;
        }
        if (el <= 0) continue;
        out.push_back(jackknife_ratio(at / el, num, den));
    }
    return out;
}

}  // namespace rebel
