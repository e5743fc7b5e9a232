#pragma once

#include <span>
#include <vector>

#include "rebel/observables.hpp"

namespace rebel {

struct FitResult {
    double c1 = 0, c2 = 0;
    double alpha_c = 0;  // 1/c1
    double residual_rms = 0;
    double var_c1 = 0, var_c2 = 0;  // normal-equation inverse diagonal (proxy)
    bool degenerate = false;        // singular normal matrix (e.g. constant data)
};

/// Least squares on the exact linearization rho = 1 - c1 a + c2 a rho of
/// rho = (1 - c1 a)/(1 - c2 a).
FitResult fit_linear_fractional(std::span<const CurvePoint> points);

enum class ScanSide { RhoBelow, ChiAbove };

struct ScanPoint {
    double alpha0 = 0;
    double score = 0;  // |end-segment slope| of the ratio curve, relative to its level
    int points_used = 0;
    bool usable = false;
};

/// Flatness scan of rho/(a0 - a) (below) or chi/(a - a0) (above) over a
/// grid of candidate critical points.
std::vector<ScanPoint> critical_scan(std::span<const CurvePoint> points,
                                     std::span<const double> alpha0_grid, ScanSide side);

struct CriticalEstimate {
    double alpha_c = 0;
    double bracket_lo = 0, bracket_hi = 0;  // neighboring grid values
    bool found = false;
};

CriticalEstimate best_candidate(const std::vector<ScanPoint>& scan);

struct BetaScanPoint {
    double beta = 0;
    double end_slope = 0;
    std::vector<CurvePoint> curve;  // (-log(ac - a), log rho - beta log(ac - a))
};

std::vector<BetaScanPoint> beta_scan(std::span<const CurvePoint> points, double alpha_c,
                                     std::span<const double> betas);

/// Savitzky-Golay derivative on a uniformly spaced series; one-sided
/// windows at the endpoints.
std::vector<double> savgol_derivative(std::span<const double> y, double dx,
                                      int window = 11, int degree = 2);

}  // namespace rebel
