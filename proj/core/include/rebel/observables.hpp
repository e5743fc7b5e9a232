#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "rebel/engine.hpp"
#include "rebel/pattern.hpp"

namespace rebel {

struct CurvePoint {
    double alpha = 0;
    double value = 0;
    double stderr_ = 0;  // jackknife over replicas; 0 if single replica
};

using ReplicaBins = std::vector<std::vector<BinStats>>;  // [replica][bin]

/// Delete-one jackknife for the ratio (sum num)/(sum den).
CurvePoint jackknife_ratio(double alpha, std::span<const double> num,
                           std::span<const double> den);

/// rho(alpha) ~ 2 E|Y| / N per bin.
std::vector<CurvePoint> rho_hat(const ReplicaBins& reps, int n_sites);

/// mu(alpha) = E|Y| per bin.
std::vector<CurvePoint> mu_hat(const ReplicaBins& reps);

/// chi_k(alpha) = fraction of time with exactly k particles; k odd.
std::vector<CurvePoint> chi_k_hat(const ReplicaBins& reps, int k);

struct ThetaPhi {
    std::vector<CurvePoint> theta_k;   // chi_{k+2}/chi_k
    std::vector<CurvePoint> theta_k2;  // chi_{k+4}/chi_{k+2}
    std::vector<CurvePoint> phi_k;     // theta_{k+2}/theta_k
};

/// Ratio curves with error propagation. Bins whose chi_k occupation time
/// is below `min_holding_times` average event spacings are dropped.
ThetaPhi theta_phi(const ReplicaBins& reps, int k, double min_holding_times = 100.0);

/// Same pipeline on externally supplied chi curves (synthetic inputs).
ThetaPhi theta_phi_from_curves(const std::vector<CurvePoint>& chi_k,
                               const std::vector<CurvePoint>& chi_k2,
                               const std::vector<CurvePoint>& chi_k4);

/// f_{x,N}(alpha): translate-averaged odd-overlap time over the
/// normalizer channel, per bin. pattern_index addresses plan.patterns.
std::vector<CurvePoint> harmonic_hat(const ReplicaBins& reps, int pattern_index);

struct BalanceResiduals {
    double r1 = 0, r1_se = 0;
    double r11 = 0, r11_se = 0;
};

/// Residuals of the generator balance equations at one alpha, given a
/// table of f values keyed by canonical pattern text ("11", "101", "111",
/// "1101"); f_empty = 0 and f_1 = 1 are implicit.
BalanceResiduals harmonic_residuals(const std::map<std::string, CurvePoint>& table,
                                    double alpha);

/// d/dalpha f_{block n} at alpha = 1, via the exact integer recursion;
/// equals 2(n-1).
long g_block(int n);

}  // namespace rebel
