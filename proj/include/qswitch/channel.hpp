#pragma once

// Pure-loss bosonic channel on a truncated Fock space, plus the squeezing
// budget that the same transmissivity implies for Gaussian inputs.
//
// The channel with transmissivity f acts by the Kraus family
//   (K_k)_{n-k,n} = sqrt( C(n,k) f^{n-k} (1-f)^k ),   k = 0..n_max,
// i.e. k photons are lost, each survivor keeps amplitude sqrt(f).  On a
// truncated space the family is exactly trace preserving for states whose
// support lies within the truncation; any population pushed against the
// truncation edge shows up as `trace_deficit` bookkeeping, never silently.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qswitch {

// Density matrix on span{|0>, ..., |n_max>}.  `trace_deficit` records mass
// known to live outside the truncation (e.g. from building a coherent state);
// it is carried through channels untouched.
struct FockDensityMatrix {
  Eigen::MatrixXcd entries;
  double trace_deficit = 0;

  int dim() const { return static_cast<int>(entries.rows()); }
  int n_max() const { return dim() - 1; }

  // |n><n| on a space truncated at n_max (requires n <= n_max).
  static FockDensityMatrix fock(int n, int n_max);
  // |alpha><alpha| truncated at n_max; the clipped tail goes to trace_deficit.
  static FockDensityMatrix coherent(std::complex<double> alpha, int n_max);

  // Hermiticity within 1e-12, trace + deficit within 1e-12 of one, smallest
  // eigenvalue >= -1e-10, and deficit <= 1e-10 (otherwise the caller should
  // enlarge the truncation); throws std::invalid_argument on violation.
  void validate() const;
};

// Apply the pure-loss channel with transmissivity f in [0, 1].
FockDensityMatrix apply_loss_channel(const FockDensityMatrix& rho, double f);

// <n> = tr(rho n), ignoring the deficit.
double mean_photon(const FockDensityMatrix& rho);

// Wigner-negativity probe: the Wigner function at the origin,
// W(0,0) = (2/pi) sum_n (-1)^n rho_nn.  Negative values witness
// non-Gaussianity surviving the loss.
double wigner_negativity_probe(const FockDensityMatrix& rho);

// Gaussian sector: a quadrature with variance var_in (vacuum = 1) exits the
// channel with variance var_in * f + (1 - f).
double quadrature_variance_out(double var_in, double f);

// Squeezing accounting in dB.  s_in > 0 means the input variance is
// 10^(-s_in/10); the output squeezing is
//   s_out = -10 log10( 10^(-s_in/10) f + 1 - f ),
// which saturates at s_max = -10 log10(1 - f) as s_in -> infinity.
struct SqueezingBudget {
  double s_in = 0;
  double f = 1;
  double s_out = 0;
  double s_max = 0;
  double theta = 0;          // squeezing axis, unchanged by loss
  bool s_max_unbounded = false;  // f == 1: lossless, no ceiling
};

SqueezingBudget squeezing_out(double s_in_db, double f, double theta = 0);

}  // namespace qswitch
