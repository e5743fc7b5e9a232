#include "rebel/exact.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>

namespace rebel {

namespace {

int popcount(std::uint32_t m) { return std::popcount(m); }

bool in_sector(std::uint32_t mask, Sector sector) {
    switch (sector) {
        case Sector::Odd: return popcount(mask) % 2 == 1;
        case Sector::Even: return popcount(mask) % 2 == 0;
        case Sector::Full: return true;
    }
    return true;
}

std::uint32_t flip_mask(int n, const FlipEvent& e) {
    std::uint32_t m = 0;
    for (int k = 0; k < e.nsites; ++k) m ^= 1u << (((e.sites[k] % n) + n) % n);
    return m;
}

// transitions of a state as (target-xor-mask, rate), aggregated
std::vector<std::pair<std::uint32_t, double>> state_transitions(const ModelSpec& spec,
                                                                int n, std::uint32_t mask) {
    RingConfig y = RingConfig::from_mask(n, mask);
    std::vector<std::pair<std::uint32_t, double>> out;
    for (int i = 0; i < n; ++i)
        for (const auto& e : transitions_at(spec, y, i)) {
            if (e.rate <= 0) continue;
            std::uint32_t d = flip_mask(n, e);
            bool merged = false;
            for (auto& [dm, r] : out)
                if (dm == d) {
                    r += e.rate;
                    merged = true;
                    break;
                }
            if (!merged) out.emplace_back(d, e.rate);
        }
    return out;
}

}  // namespace

ExactSystem build_generator(const ModelSpec& spec, int n, Sector sector) {
    if (n < 4 || n > 22) throw std::invalid_argument("exact systems support 4 <= N <= 22");
    ExactSystem sys;
    sys.spec = spec;
    sys.n_sites = n;
    sys.sector = sector;
    const std::uint32_t space = 1u << n;
    sys.index_of.assign(space, -1);
    for (std::uint32_t m = 0; m < space; ++m)
        if (in_sector(m, sector)) {
            sys.index_of[m] = static_cast<std::int32_t>(sys.states.size());
            sys.states.push_back(m);
        }
    sys.rows.resize(sys.states.size());
    sys.out_rate.assign(sys.states.size(), 0.0);
    for (std::size_t s = 0; s < sys.states.size(); ++s) {
        for (auto [d, rate] : state_transitions(spec, n, sys.states[s])) {
            std::uint32_t target = sys.states[s] ^ d;
            std::int32_t col = sys.index_of[target];
            if (col < 0)
                throw std::logic_error("transition leaves the parity sector");
            sys.rows[s].push_back({col, rate});
            sys.out_rate[s] += rate;
        }
    }
    return sys;
}

ExactSystem restrict_to_class(const ExactSystem& sys, std::uint32_t mask) {
    std::int32_t start = sys.index_of[mask];
    if (start < 0) throw std::invalid_argument("state outside sector");
    // forward closure, then keep only states that reach back (a
    // communicating class must be mutually reachable)
    auto closure = [&](std::int32_t s0, auto neighbors) {
        std::vector<char> seen(sys.num_states(), 0);
        std::queue<std::int32_t> q;
        q.push(s0);
        seen[s0] = 1;
        while (!q.empty()) {
            std::int32_t s = q.front();
            q.pop();
            for (std::int32_t t : neighbors(s))
                if (!seen[t]) {
                    seen[t] = 1;
                    q.push(t);
                }
        }
        return seen;
    };
    std::vector<std::vector<std::int32_t>> rev(sys.num_states());
    for (std::size_t s = 0; s < sys.num_states(); ++s)
        for (const auto& e : sys.rows[s]) rev[e.col].push_back(static_cast<std::int32_t>(s));
    auto fwd = closure(start, [&](std::int32_t s) {
        std::vector<std::int32_t> out;
        for (const auto& e : sys.rows[s]) out.push_back(e.col);
        return out;
    });
    auto bwd = closure(start, [&](std::int32_t s) { return rev[s]; });

    ExactSystem out;
    out.spec = sys.spec;
    out.n_sites = sys.n_sites;
    out.sector = sys.sector;
    out.index_of.assign(sys.index_of.size(), -1);
    for (std::size_t s = 0; s < sys.num_states(); ++s)
        if (fwd[s] && bwd[s]) {
            out.index_of[sys.states[s]] = static_cast<std::int32_t>(out.states.size());
            out.states.push_back(sys.states[s]);
        }
    out.rows.resize(out.states.size());
    out.out_rate.assign(out.states.size(), 0.0);
    for (std::size_t s = 0; s < out.states.size(); ++s) {
        std::int32_t old = sys.index_of[out.states[s]];
        for (const auto& e : sys.rows[old]) {
            std::int32_t col = out.index_of[sys.states[e.col]];
            if (col < 0) throw std::invalid_argument("class is not closed under the dynamics");
            out.rows[s].push_back({col, e.rate});
            out.out_rate[s] += e.rate;
        }
    }
    return out;
}

StationaryLaw stationary(const ExactSystem& sys) {
    const std::size_t m = sys.num_states();
    if (m == 0) throw std::invalid_argument("empty system");
    if (m > 4096) throw std::invalid_argument("dense stationary solve limited to 4096 states");

    // irreducibility check: strong connectivity via forward/backward BFS
    {
        std::vector<char> fwd(m, 0), bwd(m, 0);
        std::vector<std::vector<std::int32_t>> rev(m);
        for (std::size_t s = 0; s < m; ++s)
            for (const auto& e : sys.rows[s]) rev[e.col].push_back(static_cast<std::int32_t>(s));
        auto bfs = [&](std::vector<char>& seen, auto next) {
            std::queue<std::int32_t> q;
            q.push(0);
            seen[0] = 1;
            while (!q.empty()) {
                std::int32_t s = q.front();
                q.pop();
                next(s, [&](std::int32_t t) {
                    if (!seen[t]) {
                        seen[t] = 1;
                        q.push(t);
                    }
                });
            }
        };
        bfs(fwd, [&](std::int32_t s, auto visit) {
            for (const auto& e : sys.rows[s]) visit(e.col);
        });
        bfs(bwd, [&](std::int32_t s, auto visit) {
            for (std::int32_t t : rev[s]) visit(t);
        });
        std::vector<std::uint32_t> outside;
        for (std::size_t s = 0; s < m; ++s)
            if (!fwd[s] || !bwd[s]) outside.push_back(sys.states[s]);
        if (!outside.empty())
            throw ReducibleError("sector is not irreducible; restrict to a communicating class",
                                 std::move(outside));
    }

    // pi Q = 0 with one balance equation replaced by normalization
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);  // a = Q^T
    for (std::size_t s = 0; s < m; ++s) {
        a(s, s) -= sys.out_rate[s];
        for (const auto& e : sys.rows[s]) a(e.col, s) += e.rate;
    }
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    a.row(0).setOnes();
    b(0) = 1.0;
    Eigen::VectorXd pi = a.partialPivLu().solve(b);

    StationaryLaw law;
    law.pi.assign(pi.data(), pi.data() + m);
    std::vector<double> acc(m, 0.0);
    for (std::size_t s = 0; s < m; ++s) {
        acc[s] -= law.pi[s] * sys.out_rate[s];
        for (const auto& e : sys.rows[s]) acc[e.col] += law.pi[s] * e.rate;
    }
    for (double v : acc) law.residual = std::max(law.residual, std::abs(v));
    return law;
}

ExactObservables exact_observables(const ExactSystem& sys, const StationaryLaw& law,
                                   const std::vector<Pattern>& patterns) {
    const int n = sys.n_sites;
    ExactObservables obs;
    obs.prob_k.assign(n + 1, 0.0);
    double occupancy = 0;  // P[Y(0)=1], translate averaged
    for (std::size_t s = 0; s < sys.num_states(); ++s) {
        int k = popcount(sys.states[s]);
        obs.mean_particles += law.pi[s] * k;
        obs.prob_k[k] += law.pi[s];
        occupancy += law.pi[s] * k / static_cast<double>(n);
    }
    for (const auto& pat : patterns) {
        double odd = 0;
        for (std::size_t s = 0; s < sys.num_states(); ++s) {
            std::uint32_t y = sys.states[s];
            int cnt = 0;
            for (int t = 0; t < n; ++t) {
                int par = 0;
                for (int q : pat.one_offsets) par ^= (y >> ((t + q) % n)) & 1u;
                cnt += par;
            }
            odd += law.pi[s] * cnt / static_cast<double>(n);
        }
        obs.harmonic.push_back(odd / occupancy);
    }
    return obs;
}

double generator_duality_residual(const ModelSpec& spec_x, const ModelSpec& spec_y, int n) {
    if (n < 4 || n > 12) throw std::invalid_argument("duality check supports 4 <= N <= 12");
    const std::uint32_t space = 1u << n;
    // psi(x^D, y) = psi(x, y) * (-1)^|D & y|, so each generator applied to
    // psi factors through the transition delta masks
    std::vector<std::vector<std::pair<std::uint32_t, double>>> tx(space), ty(space);
    for (std::uint32_t m = 0; m < space; ++m) {
        tx[m] = state_transitions(spec_x, n, m);
        ty[m] = state_transitions(spec_y, n, m);
    }
    double worst = 0;
    for (std::uint32_t x = 0; x < space; ++x)
        for (std::uint32_t y = 0; y < space; ++y) {
            double lhs = 0, rhs = 0;
            for (auto [d, r] : tx[x])
                if (popcount(d & y) % 2 == 1) lhs -= 2.0 * r;
            for (auto [d, r] : ty[y])
                if (popcount(d & x) % 2 == 1) rhs -= 2.0 * r;
            double psi = popcount(x & y) % 2 == 1 ? -1.0 : 1.0;
            worst = std::max(worst, std::abs(psi * lhs - psi * rhs));
        }
    return worst;
}

ModelSpec dual_of(Family family, double alpha) {
    switch (family) {
        case Family::OneSidedRV:
            return make_spec(Family::OneSidedRV, Representation::MirrorDual, alpha);
        case Family::TwoSidedRV:
            return make_spec(Family::TwoSidedRV, Representation::Interface, alpha);
        case Family::Disagreement:
            return make_spec(Family::Swapping, Representation::Interface, alpha);  // DBARW
        case Family::Swapping:
            return make_spec(Family::Disagreement, Representation::Interface, alpha);  // SARW
        default:
            throw std::invalid_argument("no documented dual for this family");
    }
}

double duality_residual(Family family, int n, double alpha) {
    ModelSpec spin = make_spec(family, Representation::Spin, alpha);
    return generator_duality_residual(spin, dual_of(family, alpha), n);
}

double pushforward_residual(Family family, int n, double alpha) {
    if (n < 4 || n > 8) throw std::invalid_argument("pushforward check supports 4 <= N <= 8");
    ModelSpec spin = make_spec(family, Representation::Spin, alpha);
    ModelSpec iface = make_spec(family, Representation::Interface, alpha);
    const std::uint32_t space = 1u << n;
    double worst = 0;
    for (std::uint32_t x = 0; x < space; ++x) {
        RingConfig xc = RingConfig::from_mask(n, x);
        std::uint32_t z = interface_of(xc).mask();
        // aggregate spin transition rates by kink-space target
        std::vector<std::pair<std::uint32_t, double>> push;
        for (auto [d, r] : state_transitions(spin, n, x)) {
            std::uint32_t z2 = interface_of(RingConfig::from_mask(n, x ^ d)).mask();
            if (z2 == z) continue;
            bool merged = false;
            for (auto& [t, rr] : push)
                if (t == z2) {
                    rr += r;
                    merged = true;
                    break;
                }
            if (!merged) push.emplace_back(z2, r);
        }
        std::vector<std::pair<std::uint32_t, double>> direct;
        for (auto [d, r] : state_transitions(iface, n, z)) {
            std::uint32_t z2 = z ^ d;
            if (z2 == z) continue;
            bool merged = false;
            for (auto& [t, rr] : direct)
                if (t == z2) {
                    rr += r;
                    merged = true;
                    break;
                }
            if (!merged) direct.emplace_back(z2, r);
        }
        for (auto [t, r] : push) {
            double other = 0;
            for (auto [t2, r2] : direct)
                if (t2 == t) other = r2;
            worst = std::max(worst, std::abs(r - other));
        }
        for (auto [t, r] : direct) {
            double other = 0;
            for (auto [t2, r2] : push)
                if (t2 == t) other = r2;
            worst = std::max(worst, std::abs(r - other));
        }
    }
    return worst;
}

}  // namespace rebel
