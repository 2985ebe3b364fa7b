#include "qswitch/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qswitch/linalg.hpp"

namespace qswitch {

namespace {

using cplx = std::complex<double>;

// Single-excitation RK4 integrator in the interaction picture of the bath.
// The bath enters each system derivative only through the band-summed dot
// product D = sum_j c_j e^{-i w_j t}; over one RK4 step with flat couplings
// the stage corrections to D are proportional to the phase sums
// T1 = sum_j e^{-i w_j dt/2} and T2 = sum_j e^{-i w_j dt}, so the step needs
// only two band dot-products (pass 1) and one fused bath update (pass 2)
// instead of four full derivative sweeps.  Amplitudes are stored split into
// real/imaginary arrays so the inner loops stay vectorizable.
struct BathKernel {
  double g = 0, dt = 0;
  int n = 0;                       // modes per band
  std::vector<BathKind> kinds;
  std::vector<int> idx;            // 0 = cavity, 1 = scatterer
  std::vector<double> rates, gc;   // band rates and flat couplings
  std::vector<double> w;           // shared frequency grid
  std::vector<double> phr, phi;    // e^{-i w_j t}, advanced per step
  std::vector<double> e1r, e1i, e2r, e2i;
  std::vector<std::vector<double>> cr, ci;  // per band
  cplx sys0{1, 0}, sys1{0, 0};
  std::vector<cplx> D0;            // carried dot(c, ph) per band
  cplx T1{0, 0}, T2{0, 0};
  long steps_done = 0;

  BathKernel(const TwoModeParams& p, const BathDiscretization& disc, double dt_) {
    g = p.g;
    dt = dt_;
    n = disc.n_modes;
    auto add = [&](BathKind kind, double rate, int attach) {
      if (rate <= 0) return;
      kinds.push_back(kind);
      idx.push_back(attach);
      rates.push_back(rate);
    };
    add(BathKind::cavity_loss, p.kappa, 0);
    add(BathKind::waveguide, p.gamma, 1);
    add(BathKind::scatterer_loss, p.gamma_ext, 1);

    const double dw = disc.mode_spacing();
    w.resize(n);
    phr.assign(n, 1.0);
    phi.assign(n, 0.0);
    e1r.resize(n);
    e1i.resize(n);
    e2r.resize(n);
    e2i.resize(n);
    for (int j = 0; j < n; ++j) {
      w[j] = -disc.bandwidth / 2 + (j + 0.5) * dw;
      const cplx e1 = std::polar(1.0, -w[j] * dt / 2), e2 = e1 * e1;
      e1r[j] = e1.real();
      e1i[j] = e1.imag();
      e2r[j] = e2.real();
      e2i[j] = e2.imag();
      T1 += e1;
      T2 += e2;
    }
    cr.assign(kinds.size(), std::vector<double>(n, 0.0));
    ci.assign(kinds.size(), std::vector<double>(n, 0.0));
    D0.assign(kinds.size(), cplx(0, 0));
    for (double r : rates) gc.push_back(std::sqrt(r * dw / (2 * M_PI)));
  }

  void step() {
    const size_t nc = kinds.size();
    std::vector<cplx> D1(nc), D2(nc), a1(nc), a2(nc), a3(nc), a4(nc), al(nc), be(nc), ze(nc);

    // pass 1: band dots against ph * E and ph * E^2
    for (size_t c = 0; c < nc; ++c) {
      const double* br = cr[c].data();
      const double* bi = ci[c].data();
      double d1r = 0, d1i = 0, d2r = 0, d2i = 0;
      for (int j = 0; j < n; ++j) {
        const double pr = phr[j], pi = phi[j];
        const double xr = br[j] * pr - bi[j] * pi;
        const double xi = br[j] * pi + bi[j] * pr;
        d1r += xr * e1r[j] - xi * e1i[j];
        d1i += xr * e1i[j] + xi * e1r[j];
        d2r += xr * e2r[j] - xi * e2i[j];
        d2i += xr * e2i[j] + xi * e2r[j];
      }
      D1[c] = cplx(d1r, d1i);
      D2[c] = cplx(d2r, d2i);
    }

    // scalar RK4 on (alpha, beta) with bath feedback through the dots
    cplx k1s0 = cplx(0, -g) * sys1, k1s1 = cplx(0, -g) * sys0;
    for (size_t c = 0; c < nc; ++c) {
      (idx[c] == 0 ? k1s0 : k1s1) += cplx(0, -gc[c]) * D0[c];
      a1[c] = cplx(0, -gc[c]) * (idx[c] == 0 ? sys0 : sys1);
    }
    const cplx s0p = sys0 + dt / 2.0 * k1s0, s1p = sys1 + dt / 2.0 * k1s1;
    cplx k2s0 = cplx(0, -g) * s1p, k2s1 = cplx(0, -g) * s0p;
    for (size_t c = 0; c < nc; ++c) {
      (idx[c] == 0 ? k2s0 : k2s1) += cplx(0, -gc[c]) * (D1[c] + dt / 2.0 * a1[c] * T1);
      a2[c] = cplx(0, -gc[c]) * (idx[c] == 0 ? s0p : s1p);
    }
    const cplx s0q = sys0 + dt / 2.0 * k2s0, s1q = sys1 + dt / 2.0 * k2s1;
    cplx k3s0 = cplx(0, -g) * s1q, k3s1 = cplx(0, -g) * s0q;
    for (size_t c = 0; c < nc; ++c) {
      (idx[c] == 0 ? k3s0 : k3s1) += cplx(0, -gc[c]) * (D1[c] + dt / 2.0 * a2[c] * double(n));
      a3[c] = cplx(0, -gc[c]) * (idx[c] == 0 ? s0q : s1q);
    }
    const cplx s0r = sys0 + dt * k3s0, s1r = sys1 + dt * k3s1;
    cplx k4s0 = cplx(0, -g) * s1r, k4s1 = cplx(0, -g) * s0r;
    for (size_t c = 0; c < nc; ++c) {
      (idx[c] == 0 ? k4s0 : k4s1) += cplx(0, -gc[c]) * (D2[c] + dt * a3[c] * T1);
      a4[c] = cplx(0, -gc[c]) * (idx[c] == 0 ? s0r : s1r);
    }
    sys0 += dt / 6.0 * (k1s0 + 2.0 * k2s0 + 2.0 * k3s0 + k4s0);
    sys1 += dt / 6.0 * (k1s1 + 2.0 * k2s1 + 2.0 * k3s1 + k4s1);
    for (size_t c = 0; c < nc; ++c) {
      al[c] = dt / 6.0 * a1[c];
      be[c] = dt / 6.0 * 2.0 * (a2[c] + a3[c]);
      ze[c] = dt / 6.0 * a4[c];
      D0[c] = D2[c] + al[c] * T2 + be[c] * T1 + ze[c] * double(n);
    }

    // pass 2: fused bath update c_j += conj(ph_j) (al + be conj(E1) + ze conj(E2))
    for (size_t c = 0; c < nc; ++c) {
      double* br = cr[c].data();
      double* bi = ci[c].data();
      const double ar = al[c].real(), ai = al[c].imag();
      const double b1r = be[c].real(), b1i = be[c].imag();
      const double zr = ze[c].real(), zi = ze[c].imag();
      for (int j = 0; j < n; ++j) {
        const double qr = ar + b1r * e1r[j] + b1i * e1i[j] + zr * e2r[j] + zi * e2i[j];
        const double qi = ai - b1r * e1i[j] + b1i * e1r[j] - zr * e2i[j] + zi * e2r[j];
        br[j] += phr[j] * qr + phi[j] * qi;
        bi[j] += phr[j] * qi - phi[j] * qr;
      }
    }
    for (int j = 0; j < n; ++j) {
      const double pr = phr[j] * e2r[j] - phi[j] * e2i[j];
      const double pi = phr[j] * e2i[j] + phi[j] * e2r[j];
      phr[j] = pr;
      phi[j] = pi;
    }
    ++steps_done;
    if (steps_done % 1024 == 0) {
      // exact trigonometric reset keeps the recurrent phase products from
      // accumulating rounding drift over long runs
      const double t = dt * double(steps_done);
      for (int j = 0; j < n; ++j) {
        phr[j] = std::cos(w[j] * t);
        phi[j] = -std::sin(w[j] * t);
      }
      for (size_t c = 0; c < kinds.size(); ++c) {
        double d0r = 0, d0i = 0;
        const double* br = cr[c].data();
        const double* bi = ci[c].data();
        for (int j = 0; j < n; ++j) {
          d0r += br[j] * phr[j] - bi[j] * phi[j];
          d0i += br[j] * phi[j] + bi[j] * phr[j];
        }
        D0[c] = cplx(d0r, d0i);
      }
    }
  }

  double band_mass(size_t c) const {
    double s = 0;
    for (int j = 0; j < n; ++j) s += cr[c][j] * cr[c][j] + ci[c][j] * ci[c][j];
    return s;
  }

  TrajectorySample sample() const {
    TrajectorySample out;
    out.t = dt * double(steps_done);
    out.cavity_pop = std::norm(sys0);
    out.scatterer_pop = std::norm(sys1);
    out.norm = out.cavity_pop + out.scatterer_pop;
    for (size_t c = 0; c < kinds.size(); ++c) {
      const double m = band_mass(c);
      out.norm += m;
      switch (kinds[c]) {
        case BathKind::cavity_loss: out.p_cavity_loss += m; break;
        case BathKind::waveguide: out.p_waveguide += m; break;
        case BathKind::scatterer_loss: out.p_scatterer_loss += m; break;
      }
    }
    return out;
  }
};

}  // namespace

const char* to_string(BathKind k) {
  switch (k) {
    case BathKind::cavity_loss: return "cavity-loss";
    case BathKind::waveguide: return "waveguide";
    case BathKind::scatterer_loss: return "scatterer-loss";
  }
  return "unknown";
}

void BathDiscretization::validate(double max_rate) const {
  if (n_modes < 2) throw std::invalid_argument("bath discretization needs n_modes >= 2");
  if (!(bandwidth > 0) || !std::isfinite(bandwidth))
    throw std::invalid_argument("bath discretization needs a positive finite bandwidth");
  if (!(min_bandwidth_factor > 0))
    throw std::invalid_argument("min_bandwidth_factor must be positive");
  if (max_rate > 0 && bandwidth < min_bandwidth_factor * max_rate)
    throw std::invalid_argument(
        "bandwidth too narrow: require bandwidth >= min_bandwidth_factor * fastest rate");
}

Trajectory simulate(const TwoModeParams& params, const BathDiscretization& disc,
                    double t_final, double dt, int sample_stride) {
  // Unlike the figure-of-merit engines, the oracle happily integrates fully
  // decoupled systems (it needs no stable drift matrix), so only finiteness
  // and sign constraints are enforced here.
  if (!std::isfinite(params.g))
    throw std::invalid_argument("simulate: g must be finite");
  for (double r : {params.kappa, params.gamma, params.gamma_ext})
    if (!std::isfinite(r) || r < 0)
      throw std::invalid_argument("simulate: rates must be finite and nonnegative");
  const double max_rate = std::max({params.kappa, params.gamma, params.gamma_ext});
  disc.validate(max_rate);
  if (!(dt > 0) || !std::isfinite(dt))
    throw std::invalid_argument("simulate: dt must be positive and finite");
  if (dt > 0.1 / disc.bandwidth)
    throw std::invalid_argument(
        "simulate: step/bandwidth mismatch, require dt <= 0.1 / bandwidth");
  if (!(t_final > 0) || !std::isfinite(t_final))
    throw std::invalid_argument("simulate: t_final must be positive and finite");
  if (t_final >= disc.recurrence_time())
    throw std::domain_error(
        "simulate: window reaches the discrete-bath recurrence time 2*pi*n_modes/bandwidth; "
        "increase n_modes or shorten t_final");
  if (sample_stride < 0) throw std::invalid_argument("simulate: sample_stride must be >= 0");

  const long nsteps = std::max<long>(1, std::lround(t_final / dt));
  long stride = sample_stride;
  if (stride == 0) stride = std::max<long>(1, nsteps / 400);

  BathKernel kernel(params, disc, dt);

  Trajectory traj;
  traj.params = params;
  traj.disc = disc;
  traj.dt = dt;
  traj.t_final = double(nsteps) * dt;
  traj.omegas = kernel.w;
  traj.samples.push_back(kernel.sample());
  for (long s = 1; s <= nsteps; ++s) {
    kernel.step();
    if (s % stride == 0 || s == nsteps) traj.samples.push_back(kernel.sample());
  }

  traj.alpha = kernel.sys0;
  traj.beta = kernel.sys1;
  traj.alpha_final = std::abs(kernel.sys0);
  traj.beta_final = std::abs(kernel.sys1);
  traj.bands.resize(kernel.kinds.size());
  for (size_t c = 0; c < kernel.kinds.size(); ++c) {
    BathBand& band = traj.bands[c];
    band.kind = kernel.kinds[c];
    band.rate = kernel.rates[c];
    band.attach_index = kernel.idx[c];
    band.c.resize(disc.n_modes);
    for (int j = 0; j < disc.n_modes; ++j)
      band.c[j] = cplx(kernel.cr[c][j], kernel.ci[c][j]);
  }

  // A strictly stable target must have emptied into the bath by t_final;
  // otherwise the band probabilities cannot be trusted as limits.  (The
  // short-circuit keeps decoupled parameter sets, rejected by build_M's
  // validation, out of the check: they never decay and that is fine.)
  const bool strictly_stable = (params.kappa > 0 || params.gamma_tot() > 0) &&
                               stability_check(build_M(params));
  if (strictly_stable && (traj.alpha_final >= 1e-4 || traj.beta_final >= 1e-4))
    throw std::domain_error(
        "simulate: insufficient t_final, system amplitudes have not decayed below 1e-4");
  return traj;
}

EmittedWavepacket emitted_wavepacket(const Trajectory& traj) {
  const BathBand* wg = nullptr;
  for (const BathBand& b : traj.bands)
    if (b.kind == BathKind::waveguide) wg = &b;
  if (!wg) throw std::domain_error("emitted_wavepacket: trajectory has no waveguide band");

  double mass = 0;
  for (const cplx& c : wg->c) mass += std::norm(c);
  if (!(mass > 1e-12)) {
    // Nothing was emitted (e.g. a decoupled cavity): report the measured
    // mass with an empty (all-zero) profile instead of failing, so callers
    // can still read P_wg = 0.
    EmittedWavepacket out;
    out.total_mass = mass;
    out.profile.kind = ProfileKind::output_u;
    out.profile.times = {0.0, traj.t_final};
    out.profile.amplitudes = {cplx(0, 0), cplx(0, 0)};
    out.profile.norm_error = 1.0;
    return out;
  }

  // Synthesis grid: reuse the span and resolution the optimal output profile
  // would use, capped at the simulated window.
  const TemporalProfile u = output_profile(build_M(traj.params));
  const double span = std::min(u.times.back(), traj.t_final);
  const double dt = u.times[1] - u.times[0];
  const size_t n_pts = static_cast<size_t>(span / dt) + 1;

  const int n = static_cast<int>(wg->c.size());
  const double dw = traj.disc.mode_spacing();
  const double scale = std::sqrt(dw / (2 * M_PI));

  EmittedWavepacket out;
  out.total_mass = mass;
  out.profile.kind = ProfileKind::output_u;
  out.profile.times.resize(n_pts);
  out.profile.amplitudes.resize(n_pts);

  // psi(t_i) = scale * sum_j c_j e^{-i w_j t_i} via per-mode phase stepping,
  // with an exact trigonometric reset to bound rounding drift.
  std::vector<cplx> f(wg->c);
  std::vector<cplx> step(n);
  for (int j = 0; j < n; ++j) step[j] = std::polar(1.0, -traj.omegas[j] * dt);
  for (size_t i = 0; i < n_pts; ++i) {
    const double t = double(i) * dt;
    out.profile.times[i] = t;
    if (i > 0 && i % 1024 == 0)
      for (int j = 0; j < n; ++j) f[j] = wg->c[j] * std::polar(1.0, -traj.omegas[j] * t);
    cplx acc(0, 0);
    for (int j = 0; j < n; ++j) acc += f[j];
    out.profile.amplitudes[i] = scale * acc;
    for (int j = 0; j < n; ++j) f[j] *= step[j];
  }

  double grid_mass = 0;
  for (size_t i = 0; i + 1 < n_pts; ++i)
    grid_mass += 0.5 * dt * (std::norm(out.profile.amplitudes[i]) +
                             std::norm(out.profile.amplitudes[i + 1]));
  if (!(grid_mass > 0))
    throw std::domain_error("emitted_wavepacket: synthesized wavepacket has zero mass");
  const double inv = 1.0 / std::sqrt(grid_mass);
  for (cplx& a : out.profile.amplitudes) a *= inv;
  out.profile.norm_error = std::abs(1.0 - grid_mass / mass);
  return out;
}

namespace {

cplx interp(const TemporalProfile& p, double t) {
  const auto& ts = p.times;
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  if (it == ts.begin() || it == ts.end()) {
    // clamp: callers only query inside the common window, edges included
    return it == ts.begin() ? p.amplitudes.front() : p.amplitudes.back();
  }
  const size_t hi = size_t(it - ts.begin()), lo = hi - 1;
  const double x = (t - ts[lo]) / (ts[hi] - ts[lo]);
  return p.amplitudes[lo] * (1 - x) + p.amplitudes[hi] * x;
}

}  // namespace

double mode_overlap(const TemporalProfile& psi, const TemporalProfile& u) {
  if (psi.times.size() < 2 || u.times.size() < 2)
    throw std::invalid_argument("mode_overlap: profiles need at least two samples");
  const double t0 = std::max(psi.times.front(), u.times.front());
  const double t1 = std::min(psi.times.back(), u.times.back());
  if (!(t1 > t0)) throw std::domain_error("mode_overlap: profiles share no time window");

  // integrate on the finer of the two grids, clipped to the common window
  const TemporalProfile& fine = psi.times.size() >= u.times.size() ? psi : u;
  std::vector<double> grid;
  grid.push_back(t0);
  for (double t : fine.times)
    if (t > t0 && t < t1) grid.push_back(t);
  grid.push_back(t1);

  cplx cross(0, 0);
  double mass_psi = 0, mass_u = 0;
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    const double h = grid[i + 1] - grid[i];
    const cplx pa = interp(psi, grid[i]), pb = interp(psi, grid[i + 1]);
    const cplx ua = interp(u, grid[i]), ub = interp(u, grid[i + 1]);
    cross += 0.5 * h * (std::conj(ua) * pa + std::conj(ub) * pb);
    mass_psi += 0.5 * h * (std::norm(pa) + std::norm(pb));
    mass_u += 0.5 * h * (std::norm(ua) + std::norm(ub));
  }
  if (!(mass_psi > 0) || !(mass_u > 0))
    throw std::domain_error("mode_overlap: profile carries no mass on the common window");
  return std::norm(cross) / (mass_psi * mass_u);
}

ReferenceSpec reference_spec(const TwoModeParams& params) {
  params.validate();
  const double max_rate = std::max({params.kappa, params.gamma, params.gamma_ext});
  if (!(max_rate > 0))
    throw std::invalid_argument("reference_spec: at least one rate must be positive");
  double min_rate = std::numeric_limits<double>::infinity();
  for (double r : {params.kappa, params.gamma, params.gamma_ext})
    if (r > 0) min_rate = std::min(min_rate, r);

  ReferenceSpec spec;
  spec.disc.n_modes = 4000;
  spec.disc.bandwidth = 200 * max_rate;
  spec.dt = 0.05 / spec.disc.bandwidth;
  // Cap the window below the comb recurrence; with n_modes = 4000 and the
  // factor-200 bandwidth this still leaves many decay lifetimes.
  spec.t_final = std::min(20.0 / min_rate, 0.85 * spec.disc.recurrence_time());
  return spec;
}

OracleReport verify_fom(const TwoModeParams& params, const ReferenceSpec& spec,
                        double tolerance) {
  if (!(tolerance > 0)) throw std::invalid_argument("verify_fom: tolerance must be positive");
  if (!(params.gamma > 0))
    throw std::invalid_argument("verify_fom: needs a waveguide rate gamma > 0");

  OracleReport rep;
  rep.trajectory = simulate(params, spec.disc, spec.t_final, spec.dt);
  rep.p_waveguide = rep.trajectory.samples.back().p_waveguide;
  rep.norm_drift = std::abs(rep.trajectory.samples.back().norm - 1.0);
  rep.predicted_fom = fom_numeric(build_M(params), params.gamma).value;

  const EmittedWavepacket psi = emitted_wavepacket(rep.trajectory);
  rep.overlap = mode_overlap(psi.profile, output_profile(build_M(params)));
  rep.fom_match = std::abs(rep.p_waveguide - rep.predicted_fom) <= tolerance;
  return rep;
}

OracleReport verify_fom(const TwoModeParams& params, double tolerance) {
  return verify_fom(params, reference_spec(params), tolerance);
}

}  // namespace qswitch
