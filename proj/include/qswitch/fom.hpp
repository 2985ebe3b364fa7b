// Figure-of-merit engines.
//
// The figure of merit is the effective beam-splitter transmissivity between
// the initial cavity mode and the optimal traveling output mode,
//   F = rate * ∫_0^∞ |(e^{-Mt})_{12}|² dt,
// where `rate` is the waveguide emission rate of the model (gamma for the
// two-mode model, eta_tot for the three-mode model — whose value is then F'
// per unit coupling efficiency — and gamma_tot for the dispersive model).
// The primary evaluation path is the Gram integral; closed forms are
// cross-checks derived from the same dynamics. The coupling efficiency T is
// an external multiplier, default 1.
#pragma once

#include "qswitch/linalg.hpp"
#include "qswitch/models.hpp"

#include <complex>
#include <limits>
#include <string>
#include <vector>

namespace qswitch {

enum class FomMethod { numeric_gram, closed_form, perturbative, qubit_adiabatic };

const char* to_string(FomMethod m);

struct FomResult {
  double value = 0;  // in [0, 1]; excludes the efficiency multiplier unless applied
  FomMethod method = FomMethod::numeric_gram;
  bool coupling_efficiency_applied = false;
  std::string model_tag;
  // Regime diagnostic where one exists (expansion parameter or validity
  // ratio, small = trustworthy); NaN otherwise.
  double validity_ratio = std::numeric_limits<double>::quiet_NaN();
};

// F = efficiency * emit_rate * I_{1,2,2,1}(K). Works for any stable mode
// matrix; the (1,2) element convention means "cavity row, emitter column".
FomResult fom_numeric(const ComplexMatrix& K, double emit_rate, double efficiency = 1.0,
                      std::string model_tag = "custom");

// Closed form for the two-mode model:
//   F = (1 - gamma_ext/gamma_tot) / (1 + kappa/gamma_tot
//        + gamma_tot kappa/(4g²) + kappa²/(4g²)).
// g = 0 with kappa > 0 gives the limit 0; g = 0 with kappa = 0 is degenerate.
FomResult fom_closed_two_mode(const TwoModeParams& p, double efficiency = 1.0);

// Closed form for the three-mode model (value is F' per unit efficiency):
//   F' = eta_tot * 16 λ²λ'²n² (Γ+κ+eta_tot) / (D1 * D2),
//   D1 = 4κλ'²n + eta_tot(Γκ + 4λ²n),
//   D2 = (Γ+κ)(Γκ + 4λ²n) + 4Γλ'²n
//        + eta_tot((Γ+κ)² + 4λ'²n + (Γ+κ)eta_tot).
FomResult fom_closed_three_mode(const ThreeModeParams& p, double efficiency = 1.0);

// Closed form for the dispersive model (value is F'' per unit efficiency),
// with g = g_eff and κ' = kappa_prime from the parameter reduction:
//   F'' = γ_tot (4g² + κ'²)(γ_tot + κ + 2κ') /
//         [ (γ_tot + κ + 2κ')² (γ_tot(κ+κ') + κκ') + 4g²(γ_tot+κ)(γ_tot+κ+4κ') ].
FomResult fom_closed_dispersive(const DispersiveParams& p, double efficiency = 1.0);

// Qubit scatterer in the fast-emission regime:
//   F_at = (1 - gamma_ext/gamma_tot) / (1 + gamma_tot kappa / (4g²)).
// validity_ratio reports g sqrt(nbar)/gamma.
FomResult fom_qubit(const QubitParams& p, double efficiency = 1.0);

// Leading-order approximant F' ≈ T / (1 + (Γ+κ) eta_tot / (4 n λ'²));
// validity_ratio is the expansion parameter ε = max(λ√n, λ'√n)/eta_tot.
FomResult fom_perturbative_three_mode(const ThreeModeParams& p, double efficiency = 1.0);

// Leading-order approximant F'' ≈ T / (1 + γ_tot(κ+κ')/(4g²));
// validity_ratio is ε = |g_eff|/γ_tot.
FomResult fom_perturbative_dispersive(const DispersiveParams& p, double efficiency = 1.0);

enum class ProfileKind { output_u, input_w };

// A sampled temporal mode. For output_u the grid covers [0, T_max]; for
// input_w it covers [-T_max, 0]. Amplitudes are normalized against the exact
// Gram-integral norm (not the discrete sum); norm_error records how far the
// trapezoidal quadrature of |u|² is from 1 on this grid.
struct TemporalProfile {
  std::vector<double> times;
  std::vector<std::complex<double>> amplitudes;
  ProfileKind kind = ProfileKind::output_u;
  double norm_error = 0;
};

// Optimal output mode u(t) = (e^{-Kt})_{12} / sqrt(I_{1,2,2,1}(K)).
// The default grid uses dt = 0.01/||K||_F and extends T_max until the exact
// integral tail beyond it is below 1e-9 of the total. A caller-supplied grid
// must satisfy the same tail bound, else the profile is rejected as truncated.
TemporalProfile output_profile(const ComplexMatrix& K);
TemporalProfile output_profile(const ComplexMatrix& K, const std::vector<double>& grid);

// Optimal feeding mode w(t) on t <= 0, built from A = -K†:
// w(t) = (e^{K†t})_{12} / sqrt(I_{1,2,2,1}(K†)). For the complex symmetric
// matrices of this library |w(-t)| = |u(t)|.
TemporalProfile input_profile(const ComplexMatrix& K);
TemporalProfile input_profile(const ComplexMatrix& K, const std::vector<double>& grid);

// Transmissivity of the reverse (feeding) process,
//   T = efficiency * rate * ∫_{-∞}^0 |(e^{-At})_{12}|² dt with A = -K†,
// evaluated as a Gram integral of K†. Equals the forward figure of merit.
FomResult feeding_fidelity(const ComplexMatrix& K, double emit_rate, double efficiency = 1.0,
                           std::string model_tag = "custom");

}  // namespace qswitch
