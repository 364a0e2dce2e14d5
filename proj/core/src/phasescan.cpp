#include "qtopo/phasescan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "qtopo/parallel.hpp"

namespace qtopo {

namespace {

constexpr double kTransitionTol = 1e-9;

}  // namespace

std::string to_string(ScanMethod method) {
  return method == ScanMethod::closed ? "closed" : "lattice";
}

std::string PhaseClass::name() const {
  std::string out = "(";
  out += c_plus != 0 ? "Z" : "0";
  out += ",";
  out += c_minus != 0 ? "Z" : "0";
  out += ")";
  return out;
}

double boundary_distance(const DriveConfig& cfg) {
  if (require_phase_branch(cfg) == PhaseBranch::in_phase) return std::abs(cfg.mu() - 1.0);
  return std::min(std::abs(std::abs(cfg.delta(1)) - 1.0), std::abs(std::abs(cfg.delta(-1)) - 1.0));
}

PhaseClass phase_class_from_chern(const std::array<int, 4>& c1) {
  auto sector = [&](int m2) {
    const int up = c1[StateLabel{1, m2}.index()];
    const int down = c1[StateLabel{-1, m2}.index()];
    if (up != -down || std::abs(up) > 1) {
      throw Error(ErrorKind::InvalidArgument,
                  "m1 = +-1 bands of a sector must carry opposite unit-or-zero Chern numbers");
    }
    return std::abs(up);
  };
  return PhaseClass{sector(1), sector(-1)};
}

PhaseClass classify_point(const DriveConfig& cfg, ScanMethod method, int lattice_size,
                          int threads) {
  cfg.validate();
  require_phase_branch(cfg);
  std::array<int, 4> c1{};
  if (method == ScanMethod::closed) {
    for (const StateLabel label : kAllLabels) {
      c1[label.index()] = chern_closed(cfg, label, Regime::nonadiabatic);
    }
  } else {
    c1 = chern_lattice(cfg, lattice_size, lattice_size, Regime::nonadiabatic, threads).c1;
  }
  return phase_class_from_chern(c1);
}

void ScanRequest::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); };
  if (!(b_min >= 0.0) || !(b_max > b_min) || !std::isfinite(b_max)) {
    fail("b range must satisfy 0 <= b_min < b_max");
  }
  if (!(omega_min >= 0.0) || !(omega_max > omega_min) || !std::isfinite(omega_max)) {
    fail("omega range must satisfy 0 <= omega_min < omega_max");
  }
  if (!(t_lr >= 0.0) || !std::isfinite(t_lr)) fail("t_lr must be finite and >= 0");
  if (n_b < 2 || n_omega < 2) fail("scan needs n_b, n_omega >= 2");
  if (method == ScanMethod::lattice && lattice_size < 20) fail("lattice size must be >= 20");
}

std::vector<PhaseDiagramCell> scan_diagram(const ScanRequest& request) {
  request.validate();
  const DriveConfig probe = DriveConfig::make(1.0, 0.0, request.phi, 0.0, request.t_lr);
  require_phase_branch(probe);

  const double db = (request.b_max - request.b_min) / request.n_b;
  const double domega = (request.omega_max - request.omega_min) / request.n_omega;
  std::vector<PhaseDiagramCell> cells(static_cast<std::size_t>(request.n_b * request.n_omega));

  parallel_for(static_cast<int>(cells.size()), request.threads, [&](int idx) {
    const int i = idx / request.n_omega;
    const int j = idx % request.n_omega;
    PhaseDiagramCell& cell = cells[static_cast<std::size_t>(idx)];
    cell.b = request.b_min + (i + 0.5) * db;
    cell.omega = request.omega_min + (j + 0.5) * domega;
    cell.method = request.method;
    const DriveConfig cfg = DriveConfig::make(cell.b, 0.0, request.phi, cell.omega, request.t_lr);
    cell.boundary_distance = boundary_distance(cfg);
    if (cell.boundary_distance < kTransitionTol) {
      cell.error = ErrorKind::OnTransition;
      return;
    }
    try {
      cell.phase = classify_point(cfg, request.method, request.lattice_size, 1);
    } catch (const Error& e) {
      cell.error = e.kind();
    }
  });
  return cells;
}

}  // namespace qtopo
