// Physical parameter sets and the mode-dynamics matrices they generate.
//
// All rates and couplings share one arbitrary frequency unit. The three
// builders return complex symmetric matrices (equal to their own transpose);
// that symmetry is what makes extraction and feeding share a single figure of
// merit downstream.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>

namespace qswitch {

// Cavity mode coupled to a generic bosonic scatterer that emits into a
// waveguide (rate gamma) and into inaccessible channels (rate gamma_ext).
struct TwoModeParams {
  double g = 0;          // cavity-scatterer coupling
  double kappa = 0;      // intrinsic cavity loss rate
  double gamma = 0;      // scatterer -> waveguide emission rate
  double gamma_ext = 0;  // scatterer -> inaccessible-channel rate

  double gamma_tot() const { return gamma + gamma_ext; }
  void validate() const;
};

// Cavity + collective atomic mode + lossy auxiliary mode (couplings lambda,
// lambda_p enhanced by sqrt(n) atoms; auxiliary decay eta_tot = eta + eta_ext,
// atomic inaccessible decay Gamma).
struct ThreeModeParams {
  double lambda = 0;    // atom-cavity coupling
  double lambda_p = 0;  // atom-auxiliary coupling
  double n = 1;         // atom count (integer physically; real n >= 1 accepted for sweeps)
  double kappa = 0;     // cavity loss rate
  double eta = 0;       // auxiliary -> waveguide rate
  double eta_ext = 0;   // auxiliary optical loss rate
  double Gamma = 0;     // atomic inaccessible decay rate

  double eta_tot() const { return eta + eta_ext; }
  double efficiency() const { return eta / eta_tot(); }  // coupling efficiency of the waveguide
  void validate() const;
};

// Dispersive (far-detuned) atomic ensemble: the excited level is eliminated,
// giving an effective cavity-auxiliary coupling g_eff = n lambda^2 / Delta and
// an induced cavity decay kappa_prime = n Gamma (lambda/Delta)^2.
struct DispersiveParams {
  double lambda = 0;  // atom-cavity coupling
  double Delta = 0;   // detuning (nonzero)
  double n = 1;       // atom count
  double Gamma = 0;   // atomic decay rate
  double kappa = 0;   // intrinsic cavity loss rate
  double eta = 0;     // auxiliary/waveguide emission rate
  double eta_ext = 0; // auxiliary inaccessible loss rate
  double nbar = 10;   // intended maximum cavity excitation (validity bookkeeping)

  // Sign tracked in the matrix; figures of merit depend only on |g_eff|.
  double g_eff() const { return n * lambda * lambda / Delta; }
  double kappa_prime() const { return n * Gamma * (lambda / Delta) * (lambda / Delta); }
  double gamma_tot() const { return eta + eta_ext; }
  void validate() const;
};

// Two-level (qubit) scatterer in the fast-emission regime gamma >> g sqrt(nbar),
// where the qubit adiabatically follows the cavity.
struct QubitParams {
  double g = 0;
  double kappa = 0;
  double gamma = 0;
  double gamma_ext = 0;
  double nbar = 1;                        // excitation bound
  double fast_emission_threshold = 10.0;  // flag requires gamma >= threshold * g * sqrt(nbar)

  double gamma_tot() const { return gamma + gamma_ext; }
  // Small is valid: g sqrt(nbar) / gamma.
  double fast_emission_ratio() const;
  bool fast_emission_ok() const;
  void validate() const;
};

// Drift matrix of the two-mode model: amplitudes evolve as v' = -M v with
//   M = [[kappa/2, -i g], [-i g, gamma_tot/2]].
Eigen::Matrix2cd build_M(const TwoModeParams& p);

// Drift matrix of the three-mode model: diagonal (kappa/2, eta_tot/2, Gamma/2),
// off-diagonals (1,3) = (3,1) = -i lambda sqrt(n), (2,3) = (3,2) = -i lambda_p sqrt(n),
// and no direct cavity-auxiliary coupling.
Eigen::Matrix3cd build_Mprime(const ThreeModeParams& p);

// Drift matrix of the dispersive model:
//   [[(kappa+kappa')/2, -i g + kappa'/2], [-i g + kappa'/2, (gamma_tot+kappa')/2]]
// with g = g_eff() and kappa' = kappa_prime(). For Gamma = 0 this reduces
// exactly to build_M with g = g_eff, gamma = eta, gamma_ext = eta_ext.
Eigen::Matrix2cd build_Mdoubleprime(const DispersiveParams& p);

// Adiabatic elimination of the lossy auxiliary mode: effective two-mode
// parameters plus the validity ratio lambda_p sqrt(n) / eta_tot (small = valid).
struct PurcellReduction {
  TwoModeParams params;
  double validity_ratio = 0;
};
PurcellReduction purcell_reduce(const ThreeModeParams& p);

// Lambda-system reduction: two ground states Raman-coupled through a far
// detuned excited level (detuning_prime) map onto the three-mode couplings
// lambda = lambda1/sqrt(2), lambda_p = lambda2/sqrt(2).
struct ThreeLevelReduction {
  double lambda = 0;
  double lambda_p = 0;
  double validity_ratio = 0;  // max(lambda1, lambda2) / detuning_prime
  bool regime_valid = false;  // validity_ratio <= 0.1 (artifact threshold)
};
ThreeLevelReduction three_level_reduce(double lambda1, double lambda2, double detuning_prime);

// Bosonization of the collective atomic mode holds while the stored excitation
// stays well below the atom number.
struct ValidityReport {
  bool ok = false;
  double ratio = 0;  // nbar / n
};
ValidityReport holstein_primakoff_validity(const ThreeModeParams& p, double nbar);

}  // namespace qswitch
