#pragma once

// Geometric phases, curvature and Chern numbers of the four bands.
//
// All numerical routes use products of normalized overlaps, so they are
// independent of the phase convention of individual eigenvectors.
//
// Orientation: curvature densities are coefficients of dphi ^ dtheta with
// the orientation fixed so that the in-phase adiabatic Chern number is +m1.
// In terms of the connection A = i<n|dn> this is
//   F = d_theta A_phi - d_phi A_theta,
// the negative of field_strength_numeric(), which evaluates
// d_phi A_theta - d_theta A_phi literally.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "qtopo/errors.hpp"
#include "qtopo/qmodel.hpp"
#include "qtopo/spectra.hpp"

namespace qtopo {

// Folds into (-pi, pi].
double wrap_phase(double angle) noexcept;

// |wrap(a - b)|
double circular_distance(double a, double b) noexcept;

// |exp(i a) - exp(i b)|
double chord_distance(double a, double b) noexcept;

class PhaseValue {
 public:
  PhaseValue() = default;
  explicit PhaseValue(double angle) noexcept : value_(wrap_phase(angle)) {}

  double value() const noexcept { return value_; }
  double distance(PhaseValue other) const noexcept { return circular_distance(value_, other.value_); }

 private:
  double value_ = 0.0;
};

// Effective ratio x entering every closed form of a band:
//   adiabatic in phase: 0, adiabatic opposed: m2 lambda,
//   rotating in phase: mu, rotating opposed: Delta_{m2}.
// Geometry closed forms then read
//   gamma_G = pi + m1 pi (x - cos theta) / f,   gamma_AA = m1 pi (x - cos theta) / f,
//   F = m1 sin(theta)/2 (1 - x cos theta) / f^3, c1 = m1 Theta(1 - |x|),
// with f = sqrt(1 + x^2 - 2 x cos theta).
double effective_ratio(const DriveConfig& cfg, StateLabel label, Regime regime);

// f_{m2}(lambda, theta) = sqrt(1 + lambda^2 - 2 m2 lambda cos theta)
double gap_function(double lambda, double theta, int m2) noexcept;

// -arg prod_k <v_k|v_{k+1}>, closing the loop from the last state back to
// the first.
PhaseValue wilson_loop_phase(std::span<const State4> loop);

// Band states at one point of the (theta, varphi) sphere. Adiabatic: sector
// eigenvectors of build_hamiltonian(cfg, varphi). Non-adiabatic: the
// rotating-frame eigenvectors carried to the lab frame by
// exp(-i varphi Sz_total).
SectorSpectrum band_states(const DriveConfig& cfg, Regime regime, double varphi);

inline constexpr int kDefaultWilsonSteps = 512;

struct WilsonBandPhases {
  std::array<std::optional<PhaseValue>, 4> phase;
  std::array<std::optional<ErrorKind>, 4> error;
  double min_gap = 0.0;
};

// Berry phase of every band around the constant-theta circle, varphi from 0
// to 2 pi. Loops with n/2, n and 2n steps are Richardson-extrapolated; a band
// is NonConverged when the two extrapolants differ by more than 1e-6 and
// DegenerateGap when its sector gap drops below 1e-6 b anywhere on the loop.
WilsonBandPhases berry_phases_wilson(const DriveConfig& cfg, double theta,
                                     int n_steps = kDefaultWilsonSteps);

PhaseValue berry_phase_wilson(const DriveConfig& cfg, double theta, StateLabel label,
                              int n_steps = kDefaultWilsonSteps);

PhaseValue berry_phase_closed(const DriveConfig& cfg, double theta, StateLabel label);

// Aharonov-Anandan phase from the closed form, at cfg.theta.
PhaseValue aa_phase_closed(const DriveConfig& cfg, StateLabel label);

// <psi~|Sz_total|psi~> of the labeled rotating-frame eigenvector at
// cfg.theta. 2 pi times this is the A-A phase.
double aa_connection_numeric(const DriveConfig& cfg, StateLabel label);

struct CurvatureSample {
  double theta = 0.0;
  double value = 0.0;
  StateLabel label;
  Regime regime = Regime::adiabatic;
};

CurvatureSample curvature_closed(const DriveConfig& cfg, double theta, StateLabel label,
                                 Regime regime);

// Oriented plaquette of side h centered at (theta, varphi), divided by h^2.
CurvatureSample curvature_numeric(const DriveConfig& cfg, double theta, double varphi,
                                  StateLabel label, Regime regime, double h = 1e-3);

// d_phi A_theta - d_theta A_phi from the same plaquette; equals
// -curvature_numeric().value.
double field_strength_numeric(const DriveConfig& cfg, double theta, double varphi,
                              StateLabel label, Regime regime, double h = 1e-3);

// States on the closed sphere grid: theta_i = i pi / (n_theta - 1) including
// both poles, varphi_j = 2 pi j / n_phi periodic. Row-major in theta.
struct StateGrid {
  int n_theta = 0;
  int n_phi = 0;
  std::vector<State4> states;

  State4& at(int i, int j) { return states[static_cast<std::size_t>(i * n_phi + j)]; }
  const State4& at(int i, int j) const {
    return states[static_cast<std::size_t>(i * n_phi + j)];
  }
};

struct LatticeFlux {
  double total = 0.0;       // sum of oriented plaquette angles
  double max_plaquette = 0.0;  // largest |angle| of a single plaquette
};

// Oriented plaquette sum over the grid (varphi step first, then theta).
LatticeFlux lattice_flux(const StateGrid& grid, int threads = 1);

struct BandGrids {
  std::array<StateGrid, 4> grids;      // indexed by StateLabel::index()
  std::array<double, 2> min_gap{};     // per sector, [0]: m2 = +1
  std::array<double, 2> min_gap_theta{};
  std::array<double, 2> min_gap_phi{};
};

BandGrids sample_band_grids(const DriveConfig& cfg, int n_theta, int n_phi, Regime regime,
                            int threads = 1);

struct ChernReport {
  std::array<int, 4> c1{};
  std::array<double, 4> flux{};  // total oriented flux / 2 pi before rounding
  int n_theta = 0;
  int n_phi = 0;
  double min_gap = 0.0;
  double max_residual = 0.0;  // max |flux - c1|
  Regime regime = Regime::adiabatic;

  int operator[](StateLabel label) const { return c1[label.index()]; }
};

inline constexpr int kDefaultLatticeSize = 100;

// Lattice Chern numbers of all four bands. Throws DegenerateGap (with the
// offending grid coordinates) if any sector gap on the grid is below 1e-6 b.
ChernReport chern_lattice(const DriveConfig& cfg, int n_theta, int n_phi, Regime regime,
                          int threads = 1);

// Single band; only that band's sector has to stay gapped.
int chern_lattice_band(const DriveConfig& cfg, StateLabel label, int n_theta, int n_phi,
                       Regime regime, int threads = 1);

// Throws OnTransition when |x| = 1 within 1e-9 (x from effective_ratio).
int chern_closed(const DriveConfig& cfg, StateLabel label, Regime regime);

}  // namespace qtopo
