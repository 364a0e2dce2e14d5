#include "qtopo/evolution.hpp"

#include <cmath>
#include <string>

#include "qtopo/errors.hpp"
#include "qtopo/geometry.hpp"

namespace qtopo {

namespace {

constexpr double kGapTol = 1e-6;

void require_drive(const DriveConfig& cfg) {
  cfg.validate();
  if (cfg.omega == 0.0) throw Error(ErrorKind::ZeroFrequency, "omega must be > 0");
}

}  // namespace

double drive_period(const DriveConfig& cfg) {
  require_drive(cfg);
  return kTwoPi / cfg.omega;
}

Operator4 hermitian_exponential(const Operator4& h, double t) {
  const EigenSystem es = eigensystem(h);
  Eigen::Vector4cd phases;
  for (int k = 0; k < 4; ++k) phases(k) = std::polar(1.0, -es.values[k] * t);
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

double unitarity_error(const Operator4& u) {
  return max_abs(u.adjoint() * u - Operator4::Identity());
}

ExactPropagator::ExactPropagator(const DriveConfig& cfg)
    : cfg_(cfg), rotating_((require_drive(cfg), eigensystem(build_rotating_hamiltonian(cfg)))) {}

Operator4 ExactPropagator::operator()(double t) const {
  Eigen::Vector4cd phases;
  for (int k = 0; k < 4; ++k) phases(k) = std::polar(1.0, -rotating_.values[k] * t);
  return frame_rotation(cfg_.omega * t) * rotating_.vectors * phases.asDiagonal() *
         rotating_.vectors.adjoint();
}

Operator4 propagator_exact(const DriveConfig& cfg, double t) { return ExactPropagator(cfg)(t); }

Rk4Propagator propagator_rk4(const DriveConfig& cfg, double t, int n_steps) {
  require_drive(cfg);
  if (n_steps < 1000) throw Error(ErrorKind::InvalidArgument, "RK4 needs n_steps >= 1000");

  const Complex minus_i{0.0, -1.0};
  const double h = t / n_steps;
  Operator4 u = Operator4::Identity();
  Operator4 h_start = build_hamiltonian(cfg, 0.0);
  for (int k = 0; k < n_steps; ++k) {
    const double t0 = h * k;
    const Operator4 h_mid = build_hamiltonian(cfg, cfg.omega * (t0 + 0.5 * h));
    const Operator4 h_end = build_hamiltonian(cfg, cfg.omega * (t0 + h));
    const Operator4 k1 = minus_i * (h_start * u);
    const Operator4 k2 = minus_i * (h_mid * (u + (0.5 * h) * k1));
    const Operator4 k3 = minus_i * (h_mid * (u + (0.5 * h) * k2));
    const Operator4 k4 = minus_i * (h_end * (u + h * k3));
    u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    h_start = h_end;
  }

  // polar correction: U (U^dag U)^{-1/2}
  const EigenSystem gram = eigensystem(u.adjoint() * u);
  Eigen::Vector4cd inv_sqrt;
  for (int k = 0; k < 4; ++k) inv_sqrt(k) = 1.0 / std::sqrt(gram.values[k]);
  const Operator4 corrected =
      u * (gram.vectors * inv_sqrt.asDiagonal() * gram.vectors.adjoint());

  Rk4Propagator out;
  out.unitarity_correction = max_abs(corrected - u);
  out.propagator = corrected;
  return out;
}

double dynamical_phase_quadrature(const DriveConfig& cfg, const State4& psi0, int panels) {
  if (panels < 2 || panels % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument, "Simpson quadrature needs an even panel count");
  }
  const ExactPropagator propagate(cfg);
  const double period = drive_period(cfg);
  const double h = period / panels;
  auto energy = [&](double t) {
    const State4 psi = propagate(t) * psi0;
    return psi.dot(build_hamiltonian(cfg, cfg.omega * t) * psi).real();
  };
  double sum = energy(0.0) + energy(period);
  for (int k = 1; k < panels; ++k) sum += (k % 2 == 1 ? 4.0 : 2.0) * energy(h * k);
  return -sum * h / 3.0;
}

namespace {

LabeledLevel cyclic_state(const DriveConfig& cfg, StateLabel label) {
  require_drive(cfg);
  label.validate();
  const SectorSpectrum s = band_states(cfg, Regime::nonadiabatic, 0.0);
  if (s.gap(label.m2) < kGapTol * cfg.b) {
    throw Error(ErrorKind::DegenerateGap,
                "rotating-frame sector gap closes for " + label.name());
  }
  return s[label];
}

}  // namespace

PhaseBreakdown extract_phases(const DriveConfig& cfg, StateLabel label) {
  const LabeledLevel level = cyclic_state(cfg, label);
  const State4& psi0 = level.vector;

  PhaseBreakdown out;
  out.period = drive_period(cfg);
  out.quasienergy = level.energy;
  out.sz_expectation = psi0.dot(spin_site_operators().sz_total * psi0).real();

  const Complex overlap = psi0.dot(propagator_exact(cfg, out.period) * psi0);
  out.cyclic_overlap = std::abs(overlap);
  out.total = wrap_phase(std::arg(overlap));
  out.dynamical = wrap_phase(-out.period * (level.energy + cfg.omega * out.sz_expectation));
  out.dynamical_quadrature = wrap_phase(dynamical_phase_quadrature(cfg, psi0));
  out.geometric = wrap_phase(out.total - out.dynamical);
  return out;
}

double floquet_quasienergy(const DriveConfig& cfg, StateLabel label) {
  const LabeledLevel level = cyclic_state(cfg, label);
  const double period = drive_period(cfg);
  const Complex z = level.vector.dot(propagator_exact(cfg, period) * level.vector);
  return wrap_phase(kPi - std::arg(z)) / period;
}

}  // namespace qtopo
