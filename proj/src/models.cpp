#include "qswitch/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qswitch {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0; }

}  // namespace

void TwoModeParams::validate() const {
  require(std::isfinite(g), "two-mode: g must be finite");
  require(finite_nonneg(kappa), "two-mode: kappa must be a finite nonnegative rate");
  require(finite_nonneg(gamma), "two-mode: gamma must be a finite nonnegative rate");
  require(finite_nonneg(gamma_ext), "two-mode: gamma_ext must be a finite nonnegative rate");
  require(gamma_tot() > 0 || kappa > 0, "two-mode: need gamma_tot > 0 or kappa > 0");
}

void ThreeModeParams::validate() const {
  require(std::isfinite(lambda), "three-mode: lambda must be finite");
  require(std::isfinite(lambda_p), "three-mode: lambda_p must be finite");
  require(std::isfinite(n) && n >= 1, "three-mode: n must be >= 1");
  require(finite_nonneg(kappa), "three-mode: kappa must be a finite nonnegative rate");
  require(finite_nonneg(eta), "three-mode: eta must be a finite nonnegative rate");
  require(finite_nonneg(eta_ext), "three-mode: eta_ext must be a finite nonnegative rate");
  require(finite_nonneg(Gamma), "three-mode: Gamma must be a finite nonnegative rate");
  require(eta_tot() > 0, "three-mode: eta_tot must be positive");
}

void DispersiveParams::validate() const {
  require(std::isfinite(lambda), "dispersive: lambda must be finite");
  require(std::isfinite(Delta) && Delta != 0, "dispersive: Delta must be finite and nonzero");
  require(std::isfinite(n) && n >= 1, "dispersive: n must be >= 1");
  require(finite_nonneg(Gamma), "dispersive: Gamma must be a finite nonnegative rate");
  require(finite_nonneg(kappa), "dispersive: kappa must be a finite nonnegative rate");
  require(finite_nonneg(eta), "dispersive: eta must be a finite nonnegative rate");
  require(finite_nonneg(eta_ext), "dispersive: eta_ext must be a finite nonnegative rate");
  require(finite_nonneg(nbar), "dispersive: nbar must be finite and nonnegative");
}

double QubitParams::fast_emission_ratio() const {
  return gamma > 0 ? g * std::sqrt(nbar) / gamma : std::numeric_limits<double>::infinity();
}

bool QubitParams::fast_emission_ok() const {
  return gamma >= fast_emission_threshold * g * std::sqrt(nbar);
}

void QubitParams::validate() const {
  require(std::isfinite(g), "qubit: g must be finite");
  require(finite_nonneg(kappa), "qubit: kappa must be a finite nonnegative rate");
  require(finite_nonneg(gamma), "qubit: gamma must be a finite nonnegative rate");
  require(finite_nonneg(gamma_ext), "qubit: gamma_ext must be a finite nonnegative rate");
  require(finite_nonneg(nbar), "qubit: nbar must be finite and nonnegative");
  require(std::isfinite(fast_emission_threshold) && fast_emission_threshold > 0,
          "qubit: fast_emission_threshold must be positive");
}

Eigen::Matrix2cd build_M(const TwoModeParams& p) {
  p.validate();
  const std::complex<double> ig(0.0, p.g);
  Eigen::Matrix2cd M;
  M << p.kappa / 2, -ig, -ig, p.gamma_tot() / 2;
  return M;
}

Eigen::Matrix3cd build_Mprime(const ThreeModeParams& p) {
  p.validate();
  const double rn = std::sqrt(p.n);
  const std::complex<double> c13(0.0, -p.lambda * rn);
  const std::complex<double> c23(0.0, -p.lambda_p * rn);
  Eigen::Matrix3cd M;
  M << p.kappa / 2, 0, c13,
       0, p.eta_tot() / 2, c23,
       c13, c23, p.Gamma / 2;
  return M;
}

Eigen::Matrix2cd build_Mdoubleprime(const DispersiveParams& p) {
  p.validate();
  const double kp = p.kappa_prime();
  const std::complex<double> off(kp / 2, -p.g_eff());
  Eigen::Matrix2cd M;
  M << (p.kappa + kp) / 2, off, off, (p.gamma_tot() + kp) / 2;
  return M;
}

PurcellReduction purcell_reduce(const ThreeModeParams& p) {
  p.validate();  // eta_tot > 0 guaranteed here
  const double et = p.eta_tot();
  const double common = 4 * p.n * p.lambda_p * p.lambda_p / (et * et);
  PurcellReduction out;
  out.params.g = std::sqrt(p.n) * p.lambda;
  out.params.kappa = p.kappa;
  out.params.gamma = common * p.eta;
  out.params.gamma_ext = p.Gamma + common * p.eta_ext;
  out.validity_ratio = p.lambda_p * std::sqrt(p.n) / et;
  return out;
}

ThreeLevelReduction three_level_reduce(double lambda1, double lambda2, double detuning_prime) {
  require(std::isfinite(lambda1) && std::isfinite(lambda2),
          "three-level: couplings must be finite");
  require(std::isfinite(detuning_prime) && detuning_prime > 0,
          "three-level: detuning must be positive");
  ThreeLevelReduction out;
  out.lambda = lambda1 / std::sqrt(2.0);
  out.lambda_p = lambda2 / std::sqrt(2.0);
  out.validity_ratio = std::max(std::abs(lambda1), std::abs(lambda2)) / detuning_prime;
  out.regime_valid = out.validity_ratio <= 0.1;
  return out;
}

ValidityReport holstein_primakoff_validity(const ThreeModeParams& p, double nbar) {
  p.validate();
  require(finite_nonneg(nbar), "holstein-primakoff: nbar must be finite and nonnegative");
  return {nbar < p.n, nbar / p.n};
}

}  // namespace qswitch
