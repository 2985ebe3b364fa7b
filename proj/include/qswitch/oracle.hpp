#pragma once

// Independent cross-check of the figure of merit:  replace the continuum
// waveguide (and every other decay channel) by a dense comb of discrete
// harmonic modes, restrict to the single-excitation sector, and integrate the
// Schrödinger equation directly with RK4 in the interaction picture.  Nothing
// here shares code with the Gram-integral pipeline — no input-output
// formalism, no matrix exponentials — so agreement is a genuine check.
//
// Each lossy channel (cavity loss kappa, waveguide emission gamma, external
// scatterer loss gamma_ext) becomes a band of n_modes modes spanning
// [-B/2, B/2] with flat coupling g_ch = sqrt(rate * delta_omega / (2 pi)),
// delta_omega = B / n_modes.  A discrete comb is periodic in time: the
// emitted wavepacket refocuses on the system at t_rec = 2 pi n_modes / B,
// so simulations must end safely before that.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qswitch/fom.hpp"
#include "qswitch/models.hpp"

namespace qswitch {

struct BathDiscretization {
  int n_modes = 2000;
  double bandwidth = 0;                 // B, centered on resonance
  double min_bandwidth_factor = 20;     // require B >= factor * max rate

  double mode_spacing() const { return bandwidth / n_modes; }
  // Time at which the discrete comb refocuses the emitted excitation back
  // onto the system; results are only meaningful well before this.
  double recurrence_time() const { return 2.0 * M_PI * n_modes / bandwidth; }

  void validate(double max_rate) const;
};

enum class BathKind { cavity_loss, waveguide, scatterer_loss };

const char* to_string(BathKind k);

struct BathBand {
  BathKind kind;
  double rate;                          // the continuum rate it stands in for
  int attach_index;                     // 0 = cavity mode, 1 = scatterer mode
  std::vector<std::complex<double>> c;  // mode amplitudes (interaction picture)
};

struct TrajectorySample {
  double t = 0;
  double cavity_pop = 0;      // |alpha|^2
  double scatterer_pop = 0;   // |beta|^2
  double p_waveguide = 0;     // excitation in the waveguide band
  double p_cavity_loss = 0;   // excitation lost through kappa
  double p_scatterer_loss = 0;
  double norm = 0;            // total probability, conserved to machine precision
};

struct Trajectory {
  TwoModeParams params;
  BathDiscretization disc;
  double dt = 0;
  double t_final = 0;
  std::vector<TrajectorySample> samples;
  double alpha_final = 0;     // |alpha(t_final)|
  double beta_final = 0;
  std::vector<BathBand> bands;            // final-state bath amplitudes
  std::complex<double> alpha{0, 0};       // final system amplitudes
  std::complex<double> beta{0, 0};
  std::vector<double> omegas;             // shared mode grid
};

// Integrate from alpha(0) = 1 (excitation in the cavity).  Throws
// std::invalid_argument for inconsistent discretizations and
// std::domain_error when the run cannot be trusted (recurrence inside the
// window, or the system has not decayed by t_final while the target is
// strictly stable).  sample_stride = 0 picks ~400 evenly spaced samples.
Trajectory simulate(const TwoModeParams& params, const BathDiscretization& disc,
                    double t_final, double dt, int sample_stride = 0);

struct EmittedWavepacket {
  TemporalProfile profile;   // psi(t) on t in [0, T], normalized to unit mass
  double total_mass = 0;     // waveguide-band probability (Parseval)
};

// Reconstruct the real-time emitted wavepacket from the waveguide band of the
// final state.
EmittedWavepacket emitted_wavepacket(const Trajectory& traj);

// |<u|psi>|^2 / <psi|psi> on the common time window (linear interpolation of
// the coarser grid).  Throws std::domain_error on zero-mass input.
double mode_overlap(const TemporalProfile& psi, const TemporalProfile& u);

// Discretization + window for a trusted reference run at the given
// parameters: B = 200 * max rate, n_modes = 4000, dt = 0.05 / B,
// t_final = min(20 / min nonzero rate, 0.85 * recurrence_time).
struct ReferenceSpec {
  BathDiscretization disc;
  double dt = 0;
  double t_final = 0;
};

ReferenceSpec reference_spec(const TwoModeParams& params);

struct OracleReport {
  Trajectory trajectory;
  double p_waveguide = 0;      // measured figure of merit
  double predicted_fom = 0;    // Gram-integral value it must match
  double overlap = 0;          // |<u|psi>|^2 against the closed-form profile
  double norm_drift = 0;       // |norm(t_final) - 1|
  bool fom_match = false;      // |p_waveguide - predicted| <= tolerance
};

// Run the reference simulation and compare against the numeric figure of
// merit; tolerance is the acceptance band on |P_wg - F|.
OracleReport verify_fom(const TwoModeParams& params, double tolerance = 2e-3);

// Same comparison with an explicit discretization/window.
OracleReport verify_fom(const TwoModeParams& params, const ReferenceSpec& spec,
                        double tolerance);

}  // namespace qswitch
