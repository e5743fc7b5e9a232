#include "rebel/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace rebel {

CurvePoint jackknife_ratio(double alpha, std::span<const double> num,
                           std::span<const double> den) {
    const std::size_t r = num.size();
    if (r != den.size() || r == 0) throw std::invalid_argument("replica arrays mismatch");
    double ns = 0, ds = 0;
    for (std::size_t i = 0; i < r; ++i) {
        ns += num[i];
        ds += den[i];
    }
    CurvePoint pt{alpha, ns / ds, 0.0};
    if (r < 2) return pt;
    double mean = 0;
    std::vector<double> loo(r);
    for (std::size_t i = 0; i < r; ++i) {
        loo[i] = (ns - num[i]) / (ds - den[i]);
        mean += loo[i];
    }
    mean /= r;
    double ss = 0;
    for (double v : loo) ss += (v - mean) * (v - mean);
    pt.stderr_ = std::sqrt((r - 1.0) / r * ss);
    return pt;
}

namespace {

// Generic per-bin ratio estimator over replicas; bins where no replica
// accumulated time are skipped.
template <class Num, class Den>
std::vector<CurvePoint> ratio_curve(const ReplicaBins& reps, Num num, Den den) {
    if (reps.empty()) return {};
    const std::size_t nbins = reps[0].size();
    std::vector<CurvePoint> out;
    std::vector<double> ns(reps.size()), ds(reps.size());
    for (std::size_t b = 0; b < nbins; ++b) {
        double at = 0, el = 0;
        bool any = false;
        for (std::size_t r = 0; r < reps.size(); ++r) {
            const BinStats& bs = reps[r][b];
            ns[r] = num(bs);
            ds[r] = den(bs);
            at += bs.alpha_time;
            el += bs.elapsed;
            if (!bs.empty()) any = true;
        }
        if (!any || el <= 0) continue;  // empty bin (e.g. after extinction)
        double dsum = 0;
        for (double d : ds) dsum += d;
        if (dsum <= 0) continue;
        out.push_back(jackknife_ratio(at / el, ns, ds));
    }
    return out;
}

}  // namespace

std::vector<CurvePoint> rho_hat(const ReplicaBins& reps, int n_sites) {
    return ratio_curve(
        reps, [&](const BinStats& b) { return 2.0 * b.weighted_ones / n_sites; },
        [](const BinStats& b) { return b.elapsed; });
}

std::vector<CurvePoint> mu_hat(const ReplicaBins& reps) {
    return ratio_curve(reps, [](const BinStats& b) { return b.weighted_ones; },
                       [](const BinStats& b) { return b.elapsed; });
}

std::vector<CurvePoint> chi_k_hat(const ReplicaBins& reps, int k) {
    if (k < 1 || k % 2 == 0) throw std::invalid_argument("k must be odd");
    return ratio_curve(reps, [&](const BinStats& b) { return b.time_at(k); },
                       [](const BinStats& b) { return b.elapsed; });
}

namespace {

std::vector<CurvePoint> ratio_of_curves(const std::vector<CurvePoint>& a,
                                        const std::vector<CurvePoint>& b) {
    std::vector<CurvePoint> out;
    for (const auto& pa : a) {
        const CurvePoint* match = nullptr;
        for (const auto& cand : b)
            if (std::abs(cand.alpha - pa.alpha) <= 1e-9) {
                match = &cand;
                break;
            }
        if (!match) continue;
        const auto& pb = *match;
        if (pb.value == 0) continue;
        double v = pa.value / pb.value;
        double ra = pa.value != 0 ? pa.stderr_ / pa.value : 0;
        double rb = pb.stderr_ / pb.value;
        out.push_back({pa.alpha, v, std::abs(v) * std::sqrt(ra * ra + rb * rb)});
    }
    return out;
}

}  // namespace

ThetaPhi theta_phi(const ReplicaBins& reps, int k, double min_holding_times) {
    auto merged = merge_replicas(reps);
    auto floor_ok = [&](const BinStats& b, int kk) {
        if (b.events == 0 || b.elapsed <= 0) return false;
        double mean_holding = b.elapsed / static_cast<double>(b.events);
        return b.time_at(kk) >= min_holding_times * mean_holding;
    };
    // drop whole bins where the smallest denominator channel is too thin
    ReplicaBins filtered(reps.size());
    const std::size_t nbins = merged.size();
    for (std::size_t b = 0; b < nbins; ++b) {
        if (!floor_ok(merged[b], k) || !floor_ok(merged[b], k + 2)) continue;
        for (std::size_t r = 0; r < reps.size(); ++r) filtered[r].push_back(reps[r][b]);
    }
    ThetaPhi tp;
    auto ck = chi_k_hat(filtered, k);
    auto ck2 = chi_k_hat(filtered, k + 2);
    auto ck4 = chi_k_hat(filtered, k + 4);
    tp.theta_k = ratio_of_curves(ck2, ck);
    tp.theta_k2 = ratio_of_curves(ck4, ck2);
    tp.phi_k = ratio_of_curves(tp.theta_k2, tp.theta_k);
    return tp;
}

ThetaPhi theta_phi_from_curves(const std::vector<CurvePoint>& chi_k,
                               const std::vector<CurvePoint>& chi_k2,
                               const std::vector<CurvePoint>& chi_k4) {
    ThetaPhi tp;
    tp.theta_k = ratio_of_curves(chi_k2, chi_k);
    tp.theta_k2 = ratio_of_curves(chi_k4, chi_k2);
    tp.phi_k = ratio_of_curves(tp.theta_k2, tp.theta_k);
    return tp;
}

std::vector<CurvePoint> harmonic_hat(const ReplicaBins& reps, int pattern_index) {
    return ratio_curve(
        reps,
        [&](const BinStats& b) {
            if (pattern_index < 0 ||
                static_cast<std::size_t>(pattern_index) >= b.pattern_odd_time.size())
                throw std::out_of_range("pattern index");
            return b.pattern_odd_time[pattern_index];
        },
        [](const BinStats& b) { return b.norm_time; });
}

BalanceResiduals harmonic_residuals(const std::map<std::string, CurvePoint>& table,
                                    double alpha) {
    auto get = [&](const char* key) -> const CurvePoint& {
        auto it = table.find(key);
        if (it == table.end())
            throw std::invalid_argument(std::string("missing harmonic table entry ") + key);
        return it->second;
    };
    const CurvePoint& f11 = get("11");
    const CurvePoint& f101 = get("101");
    const CurvePoint& f111 = get("111");
    const CurvePoint& f1101 = get("1101");
    const double a = alpha;

    BalanceResiduals res;
    // f_empty = 0, f_1 = 1
    res.r1 = a * (0.0 - 1.0) + (f11.value - 1.0) + (1 - a) * (f101.value - 1.0);
    res.r1_se = std::sqrt(f11.stderr_ * f11.stderr_ +
                          (1 - a) * (1 - a) * f101.stderr_ * f101.stderr_);
    res.r11 = a * (f111.value - f11.value) + (1.0 - f11.value) +
              (1 - a) * (f1101.value - f11.value);
    res.r11_se = std::sqrt(4.0 * f11.stderr_ * f11.stderr_ +
                           a * a * f111.stderr_ * f111.stderr_ +
                           (1 - a) * (1 - a) * f1101.stderr_ * f1101.stderr_);
    return res;
}

long g_block(int n) {
    if (n < 1) throw std::invalid_argument("block size must be >= 1");
    // g_{n+1} = 2 g_n - g_{n-1}, seeded by g_empty = g_1 = 0 and the +2
    // source term at the first step
    long g_prev = 0;  // g_empty
    long g_cur = 0;   // g_1
    for (int m = 1; m < n; ++m) {
        long g_next = 2 * g_cur - g_prev + (m == 1 ? 2 : 0);
        g_prev = g_cur;
        g_cur = g_next;
    }
    return g_cur;
}

}  // namespace rebel
