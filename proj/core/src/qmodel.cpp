#include "qtopo/qmodel.hpp"

#include <cmath>

#include "qtopo/errors.hpp"

namespace qtopo {

std::string to_string(Regime regime) {
  return regime == Regime::adiabatic ? "adiabatic" : "nonadiabatic";
}

void DriveConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); };
  if (!std::isfinite(b) || !(b > 0.0)) fail("b must be finite and > 0");
  if (!std::isfinite(theta) || theta < 0.0 || theta > kPi) fail("theta must lie in [0, pi]");
  if (!std::isfinite(phi_l) || !std::isfinite(phi_r)) fail("drive phases must be finite");
  if (!std::isfinite(omega) || omega < 0.0) fail("omega must be finite and >= 0");
  if (!std::isfinite(t_lr) || t_lr < 0.0) fail("t_lr must be finite and >= 0");
}

DriveConfig DriveConfig::make(double b, double theta, double phi, double omega, double t_lr) {
  DriveConfig cfg;
  cfg.b = b;
  cfg.theta = theta;
  cfg.phi_l = 0.0;
  cfg.phi_r = -phi;
  cfg.omega = omega;
  cfg.t_lr = t_lr;
  return cfg;
}

std::string StateLabel::name() const {
  std::string out = "m1";
  out += (m1 > 0 ? '+' : '-');
  out += "_m2";
  out += (m2 > 0 ? '+' : '-');
  return out;
}

void StateLabel::validate() const {
  if ((m1 != 1 && m1 != -1) || (m2 != 1 && m2 != -1)) {
    throw Error(ErrorKind::InvalidArgument, "state label entries must be +1 or -1");
  }
}

namespace {

SpinSiteOperators make_operators() {
  const Complex i{0.0, 1.0};
  SpinSiteOperators ops;
  for (Operator4* m : {&ops.sx_l, &ops.sy_l, &ops.sz_l, &ops.sx_r, &ops.sy_r, &ops.sz_r, &ops.hop}) {
    m->setZero();
  }
  auto fill_site = [&](Operator4& sx, Operator4& sy, Operator4& sz, int offset) {
    sx(offset, offset + 1) = 0.5;
    sx(offset + 1, offset) = 0.5;
    sy(offset, offset + 1) = -0.5 * i;
    sy(offset + 1, offset) = 0.5 * i;
    sz(offset, offset) = 0.5;
    sz(offset + 1, offset + 1) = -0.5;
  };
  fill_site(ops.sx_l, ops.sy_l, ops.sz_l, basis::kLeftUp);
  fill_site(ops.sx_r, ops.sy_r, ops.sz_r, basis::kRightUp);

  ops.hop(basis::kLeftUp, basis::kRightUp) = 1.0;
  ops.hop(basis::kRightUp, basis::kLeftUp) = 1.0;
  ops.hop(basis::kLeftDown, basis::kRightDown) = 1.0;
  ops.hop(basis::kRightDown, basis::kLeftDown) = 1.0;

  ops.sz_total = ops.sz_l + ops.sz_r;
  return ops;
}

}  // namespace

const SpinSiteOperators& spin_site_operators() {
  static const SpinSiteOperators ops = make_operators();
  return ops;
}

Operator4 build_hamiltonian(const DriveConfig& cfg, double drive_phase) {
  const double bz = cfg.b * std::cos(cfg.theta);
  const double bt = cfg.b * std::sin(cfg.theta);

  Operator4 h = Operator4::Zero();
  const std::array<double, 2> site_phase{cfg.phi_l, cfg.phi_r};
  for (int site = 0; site < 2; ++site) {
    const int up = 2 * site;
    const int down = up + 1;
    // cos(a) Sx + sin(a) Sy has <up|.|down> = exp(-i a) / 2
    const Complex flip = 0.5 * bt * std::polar(1.0, -(drive_phase + site_phase[site]));
    h(up, up) = 0.5 * bz;
    h(down, down) = -0.5 * bz;
    h(up, down) = flip;
    h(down, up) = std::conj(flip);
  }
  h(basis::kLeftUp, basis::kRightUp) = cfg.t_lr;
  h(basis::kRightUp, basis::kLeftUp) = cfg.t_lr;
  h(basis::kLeftDown, basis::kRightDown) = cfg.t_lr;
  h(basis::kRightDown, basis::kLeftDown) = cfg.t_lr;
  return h;
}

Operator4 build_rotating_hamiltonian(const DriveConfig& cfg) {
  return build_hamiltonian(cfg, 0.0) - cfg.omega * spin_site_operators().sz_total;
}

Operator4 regime_hamiltonian(const DriveConfig& cfg, Regime regime, double drive_phase) {
  return regime == Regime::adiabatic ? build_hamiltonian(cfg, drive_phase)
                                     : build_rotating_hamiltonian(cfg);
}

Operator4 frame_rotation(double angle) {
  Operator4 r = Operator4::Zero();
  const Complex up = std::polar(1.0, -0.5 * angle);
  const Complex down = std::polar(1.0, 0.5 * angle);
  r(basis::kLeftUp, basis::kLeftUp) = up;
  r(basis::kLeftDown, basis::kLeftDown) = down;
  r(basis::kRightUp, basis::kRightUp) = up;
  r(basis::kRightDown, basis::kRightDown) = down;
  return r;
}

double max_abs(const Operator4& m) { return m.cwiseAbs().maxCoeff(); }

bool is_hermitian(const Operator4& h, double rel_tol) {
  const double scale = max_abs(h);
  return max_abs(h - h.adjoint()) <= rel_tol * scale;
}

std::optional<PhaseBranch> phase_branch(const DriveConfig& cfg, double tol) {
  const double r = std::remainder(cfg.phase_difference(), kTwoPi);
  if (std::abs(r) <= tol) return PhaseBranch::in_phase;
  if (kPi - std::abs(r) <= tol) return PhaseBranch::opposed;
  return std::nullopt;
}

PhaseBranch require_phase_branch(const DriveConfig& cfg) {
  if (auto branch = phase_branch(cfg)) return *branch;
  throw Error(ErrorKind::UnsupportedPhase,
              "closed forms exist only for site-phase difference 0 or pi");
}

}  // namespace qtopo
