#pragma once

// Two-site, single-particle spin qubit under a circularly polarized drive.
//
// Basis order is site-major: |L up>, |L down>, |R up>, |R down>. Spin
// operators are S = sigma/2 acting on the spin factor of one site block.

#include <array>
#include <complex>
#include <numbers>
#include <optional>
#include <string>

#include <Eigen/Core>

namespace qtopo {

using Complex = std::complex<double>;
using Operator4 = Eigen::Matrix4cd;
using State4 = Eigen::Vector4cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace basis {
inline constexpr int kLeftUp = 0;
inline constexpr int kLeftDown = 1;
inline constexpr int kRightUp = 2;
inline constexpr int kRightDown = 3;
}  // namespace basis

// Which Hamiltonian the band states come from: the instantaneous lab-frame
// Hamiltonian, or the static co-rotating Hamiltonian.
enum class Regime { adiabatic, nonadiabatic };

std::string to_string(Regime regime);

// The two site-phase configurations that admit closed forms: fields in phase
// (phase difference 0) or in phase opposition (phase difference pi).
enum class PhaseBranch { in_phase, opposed };

struct DriveConfig {
  double b = 1.0;      // field magnitude
  double theta = 0.0;  // polar angle in [0, pi]
  double phi_l = 0.0;  // static drive phase, left site
  double phi_r = 0.0;  // static drive phase, right site
  double omega = 0.0;  // drive angular frequency
  double t_lr = 0.0;   // tunneling amplitude

  // lambda = 2 t_lr / b
  double lambda() const noexcept { return 2.0 * t_lr / b; }
  // mu = omega / b
  double mu() const noexcept { return omega / b; }
  // Delta_{m2} = (omega + 2 m2 t_lr) / b
  double delta(int m2) const noexcept { return (omega + 2.0 * m2 * t_lr) / b; }

  double phase_difference() const noexcept { return phi_l - phi_r; }

  // Throws Error(InvalidArgument) when a field is outside its domain.
  void validate() const;

  DriveConfig with_theta(double new_theta) const {
    DriveConfig copy = *this;
    copy.theta = new_theta;
    return copy;
  }

  // Convenience constructor matching the CLI convention phi_l = 0,
  // phi_r = -phi.
  static DriveConfig make(double b, double theta, double phi, double omega, double t_lr);
};

// (m1, m2) quantum numbers naming one of the four bands.
struct StateLabel {
  int m1 = 1;
  int m2 = 1;

  friend constexpr bool operator==(StateLabel, StateLabel) = default;

  // Dense index 0..3 in the order (+,+), (+,-), (-,+), (-,-).
  constexpr int index() const noexcept { return (m1 > 0 ? 0 : 2) + (m2 > 0 ? 0 : 1); }

  static constexpr StateLabel from_index(int i) noexcept {
    return StateLabel{(i < 2) ? 1 : -1, (i % 2 == 0) ? 1 : -1};
  }

  // "m1+_m2-" style name used for table columns.
  std::string name() const;

  // Throws Error(InvalidArgument) unless both entries are +1 or -1.
  void validate() const;
};

inline constexpr std::array<StateLabel, 4> kAllLabels{
    StateLabel{1, 1}, StateLabel{1, -1}, StateLabel{-1, 1}, StateLabel{-1, -1}};

struct SpinSiteOperators {
  Operator4 sx_l, sy_l, sz_l;
  Operator4 sx_r, sy_r, sz_r;
  Operator4 hop;       // unit-amplitude |L s> <-> |R s>
  Operator4 sz_total;  // sz_l + sz_r
};

const SpinSiteOperators& spin_site_operators();

// Lab-frame Hamiltonian with the common drive phase set to `drive_phase`
// (Omega t during time evolution, the loop parameter for adiabatic
// transport). Site i sees the transverse field at angle drive_phase + phi_i.
Operator4 build_hamiltonian(const DriveConfig& cfg, double drive_phase);

// Static Hamiltonian in the frame co-rotating with the drive:
// U^dag H U - i U^dag dU/dt with U = exp(-i Omega t Sz_total).
Operator4 build_rotating_hamiltonian(const DriveConfig& cfg);

// Band Hamiltonian for a regime: build_hamiltonian(cfg, drive_phase) or the
// rotating-frame Hamiltonian (drive_phase ignored).
Operator4 regime_hamiltonian(const DriveConfig& cfg, Regime regime, double drive_phase = 0.0);

// exp(-i angle Sz_total); diagonal in the site-major basis.
Operator4 frame_rotation(double angle);

double max_abs(const Operator4& m);

// max|H - H^dag| <= rel_tol * max|H|
bool is_hermitian(const Operator4& h, double rel_tol = 1e-12);

// Branch for the configured site-phase difference, if it is 0 or pi modulo
// 2 pi within `tol`.
std::optional<PhaseBranch> phase_branch(const DriveConfig& cfg, double tol = 1e-9);

// As phase_branch, but throws Error(UnsupportedPhase) for other differences.
PhaseBranch require_phase_branch(const DriveConfig& cfg);

}  // namespace qtopo
