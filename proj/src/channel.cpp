#include "qswitch/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qswitch {

namespace {

void check_transmissivity(double f) {
  if (!(f >= 0 && f <= 1))
    throw std::invalid_argument("transmissivity f must lie in [0, 1]");
}

}  // namespace

FockDensityMatrix FockDensityMatrix::fock(int n, int n_max) {
  if (n_max < 0) throw std::invalid_argument("fock: n_max must be nonnegative");
  if (n < 0 || n > n_max)
    throw std::invalid_argument("fock: need 0 <= n <= n_max");
  FockDensityMatrix rho;
  rho.entries = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
  rho.entries(n, n) = 1.0;
  return rho;
}

FockDensityMatrix FockDensityMatrix::coherent(std::complex<double> alpha, int n_max) {
  if (n_max < 0) throw std::invalid_argument("coherent: n_max must be nonnegative");
  Eigen::VectorXcd psi(n_max + 1);
  // c_n = e^{-|a|^2/2} a^n / sqrt(n!) via the stable running recurrence.
  psi(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n <= n_max; ++n) psi(n) = psi(n - 1) * alpha / std::sqrt(double(n));
  FockDensityMatrix rho;
  rho.entries = psi * psi.adjoint();
  rho.trace_deficit = 1.0 - psi.squaredNorm();
  if (rho.trace_deficit < 0) rho.trace_deficit = 0;  // guard rounding
  return rho;
}

void FockDensityMatrix::validate() const {
  if (entries.rows() != entries.cols() || entries.rows() == 0)
    throw std::invalid_argument("density matrix must be square and nonempty");
  if (!entries.allFinite())
    throw std::invalid_argument("density matrix has non-finite entries");
  if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("density matrix is not Hermitian within 1e-12");
  if (std::abs(entries.trace().real() + trace_deficit - 1.0) > 1e-12)
    throw std::invalid_argument("trace plus deficit deviates from one beyond 1e-12");
  if (trace_deficit > 1e-10)
    throw std::invalid_argument(
        "trace deficit exceeds 1e-10: enlarge the Fock truncation (n_max)");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("density matrix has an eigenvalue below -1e-10");
}

FockDensityMatrix apply_loss_channel(const FockDensityMatrix& rho, double f) {
  check_transmissivity(f);
  const int d = rho.dim();
  if (d == 0) throw std::invalid_argument("apply_loss_channel: empty density matrix");

  // Kraus operator for k lost photons: (K_k)_{n-k,n} = sqrt(C(n,k) f^{n-k} (1-f)^k).
  // Work with the squared weights w(n,k) = C(n,k) f^{n-k} (1-f)^k, built by a
  // running product so factorials never overflow.  Convention: 0^0 = 1, so
  // f = 1 keeps only k = 0 and f = 0 keeps only k = n.
  FockDensityMatrix out;
  out.entries = Eigen::MatrixXcd::Zero(d, d);
  out.trace_deficit = rho.trace_deficit;

  const double loss = 1.0 - f;
  for (int k = 0; k < d; ++k) {
    Eigen::MatrixXcd Kk = Eigen::MatrixXcd::Zero(d, d);
    bool any = false;
    for (int n = k; n < d; ++n) {
      // w = C(n,k) f^{n-k} (1-f)^k, accumulated in log-free stable form:
      double w = 1.0;
      for (int i = 1; i <= k; ++i) w *= loss * double(n - k + i) / double(i);
      for (int i = 0; i < n - k; ++i) w *= f;
      if (w > 0) {
        Kk(n - k, n) = std::sqrt(w);
        any = true;
      }
    }
    if (!any) continue;
    out.entries.noalias() += Kk * rho.entries * Kk.adjoint();
  }
  return out;
}

double mean_photon(const FockDensityMatrix& rho) {
  double n_mean = 0;
  for (int n = 0; n < rho.dim(); ++n) n_mean += n * rho.entries(n, n).real();
  return n_mean;
}

double wigner_negativity_probe(const FockDensityMatrix& rho) {
  double s = 0;
  for (int n = 0; n < rho.dim(); ++n)
    s += (n % 2 == 0 ? 1.0 : -1.0) * rho.entries(n, n).real();
  return 2.0 / M_PI * s;
}

double quadrature_variance_out(double var_in, double f) {
  check_transmissivity(f);
  if (!(var_in > 0))
    throw std::invalid_argument("quadrature variance must be positive");
  return var_in * f + (1.0 - f);
}

SqueezingBudget squeezing_out(double s_in_db, double f, double theta) {
  check_transmissivity(f);
  if (!(s_in_db >= 0))
    throw std::invalid_argument("input squeezing must be >= 0 dB");
  SqueezingBudget b;
  b.s_in = s_in_db;
  b.f = f;
  b.theta = theta;
  const double var_in = std::pow(10.0, -s_in_db / 10.0);
  b.s_out = -10.0 * std::log10(var_in * f + (1.0 - f));
  if (f == 1.0) {
    b.s_max_unbounded = true;
    b.s_max = std::numeric_limits<double>::infinity();
  } else {
    b.s_max = -10.0 * std::log10(1.0 - f);
  }
  return b;
}

}  // namespace qswitch
