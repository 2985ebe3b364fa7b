#include "qswitch/fom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qswitch {

namespace {

void check_efficiency(double efficiency) {
  if (!(efficiency >= 0 && efficiency <= 1))
    throw std::invalid_argument("efficiency must lie in [0, 1]");
}

// Exact mass of |(e^{-Kt})_{12}|² beyond time T: substituting t = T + s turns
// the tail into a bilinear combination of Gram elements weighted by the row
// of the propagator at T.
double tail_mass(const ComplexMatrix& K, const GramIntegral& gram, double T) {
  const ComplexMatrix P = expm(K, T);
  const int m = static_cast<int>(gram.source_dim);
  std::complex<double> tail = 0;
  for (int j = 1; j <= m; ++j)
    for (int k = 1; k <= m; ++k)
      tail += P(0, j - 1) * std::conj(P(0, k - 1)) * gram.element(j, 2, 2, k);
  return tail.real();
}

struct ProfileSetup {
  GramIntegral gram;
  double total = 0;  // I_{1,2,2,1}
};

ProfileSetup profile_setup(const ComplexMatrix& K) {
  ProfileSetup s;
  s.gram = gram_integral(K);
  s.total = s.gram.element(1, 2, 2, 1).real();
  if (!(s.total > 1e-14 * s.gram.matrix.norm()))
    throw std::invalid_argument(
        "profile: (1,2) propagator element carries no weight (decoupled cavity), "
        "optimal mode undefined");
  return s;
}

std::vector<double> default_grid(const ComplexMatrix& K, const ProfileSetup& s) {
  const double dt = 0.01 / K.norm();
  double T = 1.0 / K.norm();
  constexpr double kTailFraction = 1e-9;
  int doublings = 0;
  while (tail_mass(K, s.gram, T) > kTailFraction * s.total) {
    T *= 2;
    if (++doublings > 80)
      throw std::domain_error("profile: tail mass will not fall below threshold");
  }
  std::vector<double> grid;
  grid.reserve(static_cast<size_t>(T / dt) + 2);
  for (double t = 0;; t += dt) {
    grid.push_back(t);
    if (t >= T) break;
  }
  return grid;
}

TemporalProfile sample_profile(const ComplexMatrix& K, const ProfileSetup& s,
                               const std::vector<double>& grid, ProfileKind kind) {
  if (grid.size() < 2) throw std::invalid_argument("profile: grid needs at least two points");
  for (size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw std::invalid_argument("profile: grid must be strictly increasing");
  if (grid.front() < 0) throw std::invalid_argument("profile: grid must start at t >= 0");

  constexpr double kTailFraction = 1e-9;
  if (tail_mass(K, s.gram, grid.back()) > kTailFraction * s.total)
    throw std::domain_error("profile: grid too short, truncated tail mass above 1e-9");
  const double head = s.total - tail_mass(K, s.gram, grid.front());
  if (head > kTailFraction * s.total)
    throw std::domain_error("profile: grid starts too late, leading mass above 1e-9");

  TemporalProfile out;
  out.kind = kind;
  out.times = grid;
  out.amplitudes.resize(grid.size());
  const double norm = std::sqrt(s.total);
  for (size_t i = 0; i < grid.size(); ++i)
    out.amplitudes[i] = expm(K, grid[i])(0, 1) / norm;

  double quad = 0;
  for (size_t i = 0; i + 1 < grid.size(); ++i)
    quad += 0.5 * (grid[i + 1] - grid[i]) *
            (std::norm(out.amplitudes[i]) + std::norm(out.amplitudes[i + 1]));
  out.norm_error = std::abs(1.0 - quad);
  return out;
}

}  // namespace

const char* to_string(FomMethod m) {
  switch (m) {
    case FomMethod::numeric_gram: return "numeric-gram";
    case FomMethod::closed_form: return "closed-form";
    case FomMethod::perturbative: return "perturbative";
    case FomMethod::qubit_adiabatic: return "qubit-adiabatic";
  }
  return "unknown";
}

FomResult fom_numeric(const ComplexMatrix& K, double emit_rate, double efficiency,
                      std::string model_tag) {
  check_efficiency(efficiency);
  if (!(emit_rate >= 0) || !std::isfinite(emit_rate))
    throw std::invalid_argument("fom_numeric: emit_rate must be a finite nonnegative rate");
  FomResult r;
  r.value = efficiency * emit_rate * element_integral(K, 1, 2, 2, 1).real();
  r.method = FomMethod::numeric_gram;
  r.coupling_efficiency_applied = efficiency != 1.0;
  r.model_tag = std::move(model_tag);
  return r;
}

FomResult fom_closed_two_mode(const TwoModeParams& p, double efficiency) {
  check_efficiency(efficiency);
  p.validate();
  const double gt = p.gamma_tot();
  FomResult r;
  r.method = FomMethod::closed_form;
  r.coupling_efficiency_applied = efficiency != 1.0;
  r.model_tag = "two-mode";
  if (p.g == 0) {
    if (p.kappa == 0)
      throw std::invalid_argument("fom_closed_two_mode: g = 0 with kappa = 0 is degenerate");
    r.value = 0;  // cavity never reaches the emitter
    return r;
  }
  if (gt == 0) {
    r.value = 0;  // no emission channel at all
    return r;
  }
  const double g2x4 = 4 * p.g * p.g;
  r.value = efficiency * (1 - p.gamma_ext / gt) /
            (1 + p.kappa / gt + gt * p.kappa / g2x4 + p.kappa * p.kappa / g2x4);
  return r;
}

FomResult fom_closed_three_mode(const ThreeModeParams& p, double efficiency) {
  check_efficiency(efficiency);
  p.validate();
  const double et = p.eta_tot();
  const double l2n = p.lambda * p.lambda * p.n;      // λ²n
  const double lp2n = p.lambda_p * p.lambda_p * p.n; // λ'²n
  const double gk = p.Gamma + p.kappa;
  const double num = et * 16 * l2n * lp2n * (gk + et);
  const double d1 = 4 * p.kappa * lp2n + et * (p.Gamma * p.kappa + 4 * l2n);
  const double d2 =
      gk * (p.Gamma * p.kappa + 4 * l2n) + 4 * p.Gamma * lp2n + et * (gk * gk + 4 * lp2n + gk * et);
  if (!(d1 * d2 > 0))
    throw std::invalid_argument("fom_closed_three_mode: degenerate parameters (zero denominator)");
  FomResult r;
  r.value = efficiency * num / (d1 * d2);
  r.method = FomMethod::closed_form;
  r.coupling_efficiency_applied = efficiency != 1.0;
  r.model_tag = "three-mode";
  return r;
}

FomResult fom_closed_dispersive(const DispersiveParams& p, double efficiency) {
  check_efficiency(efficiency);
  p.validate();
  const double g = p.g_eff();
  const double kp = p.kappa_prime();
  const double gt = p.gamma_tot();
  const double a = gt + p.kappa + 2 * kp;
  const double num = gt * (4 * g * g + kp * kp) * a;
  const double den =
      a * a * (gt * (p.kappa + kp) + p.kappa * kp) + 4 * g * g * (gt + p.kappa) * (gt + p.kappa + 4 * kp);
  if (!(den > 0))
    throw std::invalid_argument("fom_closed_dispersive: degenerate parameters (zero denominator)");
  FomResult r;
  r.value = efficiency * num / den;
  r.method = FomMethod::closed_form;
  r.coupling_efficiency_applied = efficiency != 1.0;
  r.model_tag = "dispersive";
  return r;
}

FomResult fom_qubit(const QubitParams& p, double efficiency) {
  check_efficiency(efficiency);
  p.validate();
  const double gt = p.gamma_tot();
  FomResult r;
  r.method = FomMethod::qubit_adiabatic;
  r.coupling_efficiency_applied = efficiency != 1.0;
  r.model_tag = "qubit";
  r.validity_ratio = p.fast_emission_ratio();
  if (p.g == 0) {
    if (p.kappa == 0)
      throw std::invalid_argument("fom_qubit: g = 0 with kappa = 0 is degenerate");
    r.value = 0;
    return r;
  }
  if (gt == 0) {
    r.value = 0;
    return r;
  }
  r.value = efficiency * (1 - p.gamma_ext / gt) / (1 + gt * p.kappa / (4 * p.g * p.g));
  return r;
}

FomResult fom_perturbative_three_mode(const ThreeModeParams& p, double efficiency) {
  check_efficiency(efficiency);
  p.validate();
  if (p.lambda_p == 0)
    throw std::invalid_argument("fom_perturbative_three_mode: lambda_p must be nonzero");
  const double et = p.eta_tot();
  const double rn = std::sqrt(p.n);
  FomResult r;
  r.value = efficiency / (1 + (p.Gamma + p.kappa) * et / (4 * p.n * p.lambda_p * p.lambda_p));
  r.method = FomMethod::perturbative;
  r.coupling_efficiency_applied = efficiency != 1.0;
  r.model_tag = "three-mode";
  r.validity_ratio = std::max(std::abs(p.lambda), std::abs(p.lambda_p)) * rn / et;
  return r;
}

FomResult fom_perturbative_dispersive(const DispersiveParams& p, double efficiency) {
  check_efficiency(efficiency);
  p.validate();
  const double g = p.g_eff();
  const double kp = p.kappa_prime();
  const double gt = p.gamma_tot();
  FomResult r;
  r.method = FomMethod::perturbative;
  r.coupling_efficiency_applied = efficiency != 1.0;
  r.model_tag = "dispersive";
  r.validity_ratio = gt > 0 ? std::abs(g) / gt : std::numeric_limits<double>::infinity();
  if (g == 0) {
    r.value = (p.kappa + kp) > 0 ? 0.0 : efficiency;
    return r;
  }
  r.value = efficiency / (1 + gt * (p.kappa + kp) / (4 * g * g));
  return r;
}

TemporalProfile output_profile(const ComplexMatrix& K) {
  const ProfileSetup s = profile_setup(K);
  return sample_profile(K, s, default_grid(K, s), ProfileKind::output_u);
}

TemporalProfile output_profile(const ComplexMatrix& K, const std::vector<double>& grid) {
  const ProfileSetup s = profile_setup(K);
  return sample_profile(K, s, grid, ProfileKind::output_u);
}

namespace {

// w(t) on t <= 0 is the mirror image of an output-style profile of K†:
// w(-s) = (e^{-K†s})_{12} / sqrt(I_{1,2,2,1}(K†)).
TemporalProfile mirror_input(TemporalProfile fwd) {
  std::reverse(fwd.amplitudes.begin(), fwd.amplitudes.end());
  std::reverse(fwd.times.begin(), fwd.times.end());
  for (double& t : fwd.times) t = -t;
  fwd.kind = ProfileKind::input_w;
  return fwd;
}

}  // namespace

TemporalProfile input_profile(const ComplexMatrix& K) {
  const ComplexMatrix Kd = K.adjoint();
  const ProfileSetup s = profile_setup(Kd);
  return mirror_input(sample_profile(Kd, s, default_grid(Kd, s), ProfileKind::output_u));
}

TemporalProfile input_profile(const ComplexMatrix& K, const std::vector<double>& grid) {
  if (grid.size() < 2) throw std::invalid_argument("profile: grid needs at least two points");
  if (grid.back() > 0)
    throw std::invalid_argument("input_profile: grid must lie in t <= 0");
  std::vector<double> fwd(grid.rbegin(), grid.rend());
  for (double& t : fwd) t = -t;
  const ComplexMatrix Kd = K.adjoint();
  const ProfileSetup s = profile_setup(Kd);
  return mirror_input(sample_profile(Kd, s, fwd, ProfileKind::output_u));
}

FomResult feeding_fidelity(const ComplexMatrix& K, double emit_rate, double efficiency,
                           std::string model_tag) {
  check_efficiency(efficiency);
  if (!(emit_rate >= 0) || !std::isfinite(emit_rate))
    throw std::invalid_argument("feeding_fidelity: emit_rate must be a finite nonnegative rate");
  FomResult r;
  r.value = efficiency * emit_rate * element_integral(K.adjoint(), 1, 2, 2, 1).real();
  r.method = FomMethod::numeric_gram;
  r.coupling_efficiency_applied = efficiency != 1.0;
  r.model_tag = std::move(model_tag);
  return r;
}

}  // namespace qswitch
