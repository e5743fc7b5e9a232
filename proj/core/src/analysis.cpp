#include "rebel/analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rebel {

namespace {

// OLS slope of v against u
double ols_slope(std::span<const double> u, std::span<const double> v) {
    const std::size_t n = u.size();
    double su = 0, sv = 0, suu = 0, suv = 0;
    for (std::size_t i = 0; i < n; ++i) {
        su += u[i];
        sv += v[i];
        suu += u[i] * u[i];
        suv += u[i] * v[i];
    }
    double det = n * suu - su * su;
    if (det == 0) return 0;
    return (n * suv - su * sv) / det;
}

}  // namespace

FitResult fit_linear_fractional(std::span<const CurvePoint> points) {
    if (points.size() < 3) throw std::invalid_argument("need at least 3 points");
    for (const auto& p : points)
        if (p.value <= 0) throw std::invalid_argument("fit requires rho > 0");

    // rho = 1 - c1 a + c2 a rho  (exact identity when the model holds)
    double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
    for (const auto& p : points) {
        double u = -p.alpha;          // coefficient of c1
        double v = p.alpha * p.value; // coefficient of c2
        double y = p.value - 1.0;
        s11 += u * u;
        s12 += u * v;
        s22 += v * v;
        r1 += u * y;
        r2 += v * y;
    }
    FitResult fit;
    double det = s11 * s22 - s12 * s12;
    double scale = std::max(s11, s22);
    if (scale <= 0 || std::abs(det) < 1e-12 * scale * scale) {
        fit.degenerate = true;
        return fit;
    }
    fit.c1 = (s22 * r1 - s12 * r2) / det;
    fit.c2 = (-s12 * r1 + s11 * r2) / det;
    fit.alpha_c = fit.c1 != 0 ? 1.0 / fit.c1 : 0.0;
    fit.var_c1 = s22 / det;
    fit.var_c2 = s11 / det;
    double ss = 0;
    for (const auto& p : points) {
        double model = (1.0 - fit.c1 * p.alpha) / (1.0 - fit.c2 * p.alpha);
        ss += (p.value - model) * (p.value - model);
    }
    fit.residual_rms = std::sqrt(ss / points.size());
    return fit;
}

std::vector<ScanPoint> critical_scan(std::span<const CurvePoint> points,
                                     std::span<const double> alpha0_grid, ScanSide side) {
    std::vector<ScanPoint> out;
    for (double a0 : alpha0_grid) {
        ScanPoint sp;
        sp.alpha0 = a0;
        // end segment: points within a fixed alpha distance of the candidate
        constexpr double kEndWidth = 0.1;
        std::vector<double> u, v;
        for (const auto& p : points) {
            double d = side == ScanSide::RhoBelow ? a0 - p.alpha : p.alpha - a0;
            if (d > 0 && d <= kEndWidth && p.value > 0) {
                u.push_back(p.alpha);
                v.push_back(p.value / d);
            }
        }
        if (u.size() < 5) {
            out.push_back(sp);
            continue;
        }
        // the ratio level itself scales like 1/(a0 - alpha), so compare slopes
        // in units of the mean level or large candidates always look flat
        double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        sp.score = std::abs(ols_slope(u, v)) / std::abs(mean);
        sp.points_used = static_cast<int>(u.size());
        sp.usable = true;
        out.push_back(sp);
    }
    return out;
}

CriticalEstimate best_candidate(const std::vector<ScanPoint>& scan) {
    CriticalEstimate est;
    const ScanPoint* best = nullptr;
    for (const auto& sp : scan)
        if (sp.usable && (!best || sp.score < best->score)) best = &sp;
    if (!best) return est;
    est.found = true;
    est.alpha_c = best->alpha0;
    est.bracket_lo = best->alpha0;
    est.bracket_hi = best->alpha0;
    for (const auto& sp : scan) {
        if (!sp.usable) continue;
        if (sp.alpha0 < best->alpha0)
            est.bracket_lo = std::max(est.bracket_lo == best->alpha0 ? sp.alpha0 : est.bracket_lo,
                                      sp.alpha0);
        if (sp.alpha0 > best->alpha0 && est.bracket_hi == best->alpha0)
            est.bracket_hi = sp.alpha0;
    }
    return est;
}

std::vector<BetaScanPoint> beta_scan(std::span<const CurvePoint> points, double alpha_c,
                                     std::span<const double> betas) {
    std::vector<CurvePoint> usable;
    for (const auto& p : points)
        if (p.alpha < alpha_c && p.value > 0) usable.push_back(p);
    std::sort(usable.begin(), usable.end(),
              [](const CurvePoint& a, const CurvePoint& b) { return a.alpha < b.alpha; });

    std::vector<BetaScanPoint> out;
    for (double beta : betas) {
        BetaScanPoint bp;
        bp.beta = beta;
        for (const auto& p : usable) {
            double lg = std::log(alpha_c - p.alpha);
            bp.curve.push_back({-lg, std::log(p.value) - beta * lg, 0.0});
        }
        std::size_t n = bp.curve.size();
        std::size_t q = std::max<std::size_t>(5, n / 4);
        if (n >= q) {
            std::vector<double> u, v;
            for (std::size_t i = n - q; i < n; ++i) {
                u.push_back(bp.curve[i].alpha);
                v.push_back(bp.curve[i].value);
            }
            bp.end_slope = ols_slope(u, v);
        }
        out.push_back(std::move(bp));
    }
    return out;
}

std::vector<double> savgol_derivative(std::span<const double> y, double dx, int window,
                                      int degree) {
    const int n = static_cast<int>(y.size());
    if (window % 2 == 0 || window < degree + 1)
        throw std::invalid_argument("window must be odd and >= degree + 1");
    if (n < window) throw std::invalid_argument("series shorter than window");
    if (dx == 0) throw std::invalid_argument("dx must be nonzero");
    const int half = window / 2;

    // derivative of the local LSQ polynomial evaluated at offset c from
    // the window start (in sample units)
    auto fit_deriv = [&](int start, double c) {
        Eigen::MatrixXd a(window, degree + 1);
        Eigen::VectorXd b(window);
        for (int i = 0; i < window; ++i) {
            double t = static_cast<double>(i);
            double pw = 1.0;
            for (int d = 0; d <= degree; ++d) {
                a(i, d) = pw;
                pw *= t;
            }
            b(i) = y[start + i];
        }
        Eigen::VectorXd coef = (a.transpose() * a).ldlt().solve(a.transpose() * b);
        double der = 0, pw = 1.0;
        for (int d = 1; d <= degree; ++d) {
            der += d * coef(d) * pw;
            pw *= c;
        }
        return der / dx;
    };

    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        int start = std::clamp(i - half, 0, n - window);
        out[i] = fit_deriv(start, static_cast<double>(i - start));
    }
    return out;
}

}  // namespace rebel
