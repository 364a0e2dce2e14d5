#pragma once

// Time evolution over one drive period and the split of the acquired phase
// of a cyclic state into dynamical and geometric parts.

#include "qtopo/qmodel.hpp"
#include "qtopo/spectra.hpp"

namespace qtopo {

// T = 2 pi / omega; throws ZeroFrequency for omega == 0.
double drive_period(const DriveConfig& cfg);

// exp(-i h t) via the spectral decomposition of Hermitian h.
Operator4 hermitian_exponential(const Operator4& h, double t);

// max|U^dag U - 1|
double unitarity_error(const Operator4& u);

// Full lab-frame propagator R(t) exp(-i H~ t) with R(t) = exp(-i omega t
// Sz_total). The rotating-frame spectrum is computed once at construction.
class ExactPropagator {
 public:
  explicit ExactPropagator(const DriveConfig& cfg);

  Operator4 operator()(double t) const;

  const DriveConfig& config() const noexcept { return cfg_; }

 private:
  DriveConfig cfg_;
  EigenSystem rotating_;
};

Operator4 propagator_exact(const DriveConfig& cfg, double t);

struct Rk4Propagator {
  Operator4 propagator;
  // max-entry size of the polar (re-unitarizing) correction applied at the end
  double unitarity_correction = 0.0;
};

// Classical RK4 on i dU/dt = H(omega t) U from U(0) = 1, n_steps >= 1000.
Rk4Propagator propagator_rk4(const DriveConfig& cfg, double t, int n_steps);

// -int_0^T <psi(t)|H(omega t)|psi(t)> dt by composite Simpson on `panels`
// panels, with psi(t) = propagator_exact(t) psi0.
double dynamical_phase_quadrature(const DriveConfig& cfg, const State4& psi0,
                                  int panels = 10000);

struct PhaseBreakdown {
  double total = 0.0;       // arg <psi(0)|psi(T)>
  double dynamical = 0.0;   // -T (E + omega <Sz_total>)
  double geometric = 0.0;   // total - dynamical
  double period = 0.0;
  double dynamical_quadrature = 0.0;  // Simpson cross-check of `dynamical`
  double cyclic_overlap = 0.0;        // |<psi(0)|psi(T)>|
  double quasienergy = 0.0;           // rotating-frame eigenvalue of the band
  double sz_expectation = 0.0;        // <psi~|Sz_total|psi~>
};

// Phases (principal range) of the labeled rotating-frame eigenstate evolved
// for one period. The geometric part sits pi away from the closed-form A-A
// phase: R(T) = exp(-2 pi i Sz_total) = -1 on the single-particle space.
PhaseBreakdown extract_phases(const DriveConfig& cfg, StateLabel label);

// (pi - arg <psi~|U(T)|psi~>) / T folded into (-omega/2, omega/2]. Matches
// the band quasienergy modulo omega.
double floquet_quasienergy(const DriveConfig& cfg, StateLabel label);

}  // namespace qtopo
