#pragma once

#include <array>

#include "qtopo/qmodel.hpp"

namespace qtopo {

// Ascending eigenvalues; column k of `vectors` pairs with values[k]. Each
// column is phased so its largest-magnitude component is real positive.
struct EigenSystem {
  std::array<double, 4> values{};
  Operator4 vectors = Operator4::Identity();
  int sweeps = 0;
};

// Cyclic complex Jacobi. Throws NotHermitian, or NonConverged after 50
// sweeps without the off-diagonal norm dropping below 1e-14 * ||H||.
EigenSystem eigensystem(const Operator4& h);

// Same as eigensystem() but skips the Hermiticity check; for callers that
// built `h` from Hermitian pieces in a hot loop.
EigenSystem eigensystem_unchecked(const Operator4& h);

// E_n for site-phase difference 0 or pi (lab frame).
double closed_form_adiabatic_energy(const DriveConfig& cfg, StateLabel label);

// Rotating-frame quasienergy for site-phase difference 0 or pi.
double closed_form_quasienergy(const DriveConfig& cfg, StateLabel label);

double closed_form_energy(const DriveConfig& cfg, StateLabel label, Regime regime);

struct LabeledLevel {
  double energy = 0.0;
  State4 vector = State4::Zero();
};

struct LabeledSpectrum {
  std::array<LabeledLevel, 4> levels;  // indexed by StateLabel::index()
  double gap_min = 0.0;
  double max_residual = 0.0;  // max |E_numeric - E_closed| of the assignment

  const LabeledLevel& operator[](StateLabel label) const { return levels[label.index()]; }
};

// Assigns (m1, m2) to numerical eigenpairs by the bijection minimising the
// total distance to the closed-form energies. Throws DegenerateGap when two
// eigenvalues are closer than 1e-6 b, AmbiguousMatch when the best
// assignment is not unique or misses the closed forms by more than 1e-8 b.
LabeledSpectrum label_eigenstates(const EigenSystem& es, const DriveConfig& cfg, Regime regime);

// Operator commuting with every Hamiltonian of the branch whose eigenvalue
// on a band is -m2: the site-exchange operator for fields in phase and
// sigma_z (x) site-exchange for fields in opposition.
Operator4 sector_operator(PhaseBranch branch);

// Eigenpairs resolved by the conserved sector operator, so bands from
// different m2 sectors can cross without mixing. Within a sector the lower
// level is m1 = +1.
struct SectorSpectrum {
  std::array<LabeledLevel, 4> levels;  // indexed by StateLabel::index()
  std::array<double, 2> sector_gap{};  // [0]: m2 = +1, [1]: m2 = -1

  const LabeledLevel& operator[](StateLabel label) const { return levels[label.index()]; }
  double gap(int m2) const { return sector_gap[m2 > 0 ? 0 : 1]; }
};

SectorSpectrum sector_eigenstates(const Operator4& h, PhaseBranch branch);

}  // namespace qtopo
