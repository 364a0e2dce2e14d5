#pragma once

// Topological phase classification over (B, Omega) at fixed tunneling.

#include <optional>
#include <string>
#include <vector>

#include "qtopo/errors.hpp"
#include "qtopo/geometry.hpp"
#include "qtopo/qmodel.hpp"

namespace qtopo {

enum class ScanMethod { closed, lattice };

std::string to_string(ScanMethod method);

// |c1| carried by the m2 = +1 and m2 = -1 sectors. Rendered "(0,0)",
// "(Z,Z)", "(0,Z)" or "(Z,0)".
struct PhaseClass {
  int c_plus = 0;
  int c_minus = 0;

  friend bool operator==(const PhaseClass&, const PhaseClass&) = default;

  std::string name() const;
};

inline constexpr PhaseClass kTrivialPhase{0, 0};
inline constexpr PhaseClass kFullPhase{1, 1};
inline constexpr PhaseClass kMinusOnlyPhase{0, 1};
inline constexpr PhaseClass kPlusOnlyPhase{1, 0};

// min over m2 of ||Delta_{m2}| - 1| for opposed fields, |mu - 1| in phase.
double boundary_distance(const DriveConfig& cfg);

// Folds per-band Chern numbers into a class. Throws InvalidArgument if the
// two m1 bands of a sector are not opposite or exceed magnitude 1.
PhaseClass phase_class_from_chern(const std::array<int, 4>& c1);

// Rotating-frame Chern numbers (omega = 0 gives the adiabatic ones).
// Closed: throws OnTransition within 1e-9 of a boundary. Lattice: throws
// DegenerateGap where the grid meets a gap closing.
PhaseClass classify_point(const DriveConfig& cfg, ScanMethod method,
                          int lattice_size = kDefaultLatticeSize, int threads = 1);

struct PhaseDiagramCell {
  double b = 0.0;
  double omega = 0.0;
  std::optional<PhaseClass> phase;  // empty when `error` is set
  std::optional<ErrorKind> error;
  ScanMethod method = ScanMethod::closed;
  double boundary_distance = 0.0;
};

struct ScanRequest {
  double b_min = 0.0;
  double b_max = 6.0;
  double omega_min = 0.0;
  double omega_max = 6.0;
  double t_lr = 1.0;
  double phi = kPi;  // site-phase difference
  int n_b = 60;
  int n_omega = 60;
  ScanMethod method = ScanMethod::closed;
  int lattice_size = kDefaultLatticeSize;
  int threads = 1;

  void validate() const;
};

// Cell-centered grid; result is row-major with b as the slow index. Cells on
// a transition line are reported with error OnTransition; per-cell failures
// never abort the scan.
std::vector<PhaseDiagramCell> scan_diagram(const ScanRequest& request);

}  // namespace qtopo
