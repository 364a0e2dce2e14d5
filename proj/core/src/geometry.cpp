#include "qtopo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qtopo/parallel.hpp"

namespace qtopo {

namespace {

constexpr double kGapTol = 1e-6;
constexpr double kDenominatorTol = 1e-9;
constexpr double kTransitionTol = 1e-9;
constexpr double kRichardsonTol = 1e-6;

void require_theta(double theta) {
  if (!std::isfinite(theta) || theta < 0.0 || theta > kPi) {
    throw Error(ErrorKind::InvalidArgument, "theta must lie in [0, pi]");
  }
}

std::string point_string(double theta, double phi) {
  return "(theta=" + std::to_string(theta) + ", varphi=" + std::to_string(phi) + ")";
}

// m1 pi (x - cos theta) / f, shared by the Berry and A-A closed forms
double loop_phase_core(double x, double theta, int m1) {
  const double c = std::cos(theta);
  const double f = std::sqrt(std::max(0.0, 1.0 + x * x - 2.0 * x * c));
  if (f <= kDenominatorTol) {
    throw Error(ErrorKind::DegenerateGap, "closed form singular: band gap closes at theta=" +
                                              std::to_string(theta));
  }
  return m1 * kPi * (x - c) / f;
}

double oriented_plaquette(const State4& a, const State4& b, const State4& c, const State4& d) {
  const Complex prod = a.dot(b) * b.dot(c) * c.dot(d) * d.dot(a);
  return std::arg(prod);
}

}  // namespace

double wrap_phase(double angle) noexcept {
  double r = std::remainder(angle, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

double circular_distance(double a, double b) noexcept { return std::abs(wrap_phase(a - b)); }

double chord_distance(double a, double b) noexcept {
  return std::abs(std::polar(1.0, a) - std::polar(1.0, b));
}

double effective_ratio(const DriveConfig& cfg, StateLabel label, Regime regime) {
  label.validate();
  const PhaseBranch branch = require_phase_branch(cfg);
  if (regime == Regime::adiabatic) {
    return branch == PhaseBranch::in_phase ? 0.0 : label.m2 * cfg.lambda();
  }
  return branch == PhaseBranch::in_phase ? cfg.mu() : cfg.delta(label.m2);
}

double gap_function(double lambda, double theta, int m2) noexcept {
  return std::sqrt(std::max(0.0, 1.0 + lambda * lambda - 2.0 * m2 * lambda * std::cos(theta)));
}

PhaseValue wilson_loop_phase(std::span<const State4> loop) {
  Complex prod{1.0, 0.0};
  const std::size_t n = loop.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex link = loop[k].dot(loop[(k + 1) % n]);
    // normalise each link to keep the running product O(1)
    prod *= link / std::abs(link);
  }
  return PhaseValue(-std::arg(prod));
}

SectorSpectrum band_states(const DriveConfig& cfg, Regime regime, double varphi) {
  const PhaseBranch branch = require_phase_branch(cfg);
  if (regime == Regime::adiabatic) {
    return sector_eigenstates(build_hamiltonian(cfg, varphi), branch);
  }
  SectorSpectrum s = sector_eigenstates(build_rotating_hamiltonian(cfg), branch);
  if (varphi != 0.0) {
    const Operator4 r = frame_rotation(varphi);
    for (auto& level : s.levels) level.vector = r * level.vector;
  }
  return s;
}

WilsonBandPhases berry_phases_wilson(const DriveConfig& cfg, double theta, int n_steps) {
  const DriveConfig at = cfg.with_theta(theta);
  at.validate();
  require_phase_branch(at);
  if (n_steps < 64) throw Error(ErrorKind::InvalidArgument, "Wilson loop needs n_steps >= 64");

  const int fine = 2 * n_steps;
  std::array<std::vector<State4>, 4> loops;
  for (auto& l : loops) l.resize(static_cast<std::size_t>(fine));
  std::array<double, 2> gap{std::numeric_limits<double>::infinity(),
                            std::numeric_limits<double>::infinity()};

  for (int k = 0; k < fine; ++k) {
    const double s = kTwoPi * k / fine;
    const SectorSpectrum spec = band_states(at, Regime::adiabatic, s);
    gap[0] = std::min(gap[0], spec.sector_gap[0]);
    gap[1] = std::min(gap[1], spec.sector_gap[1]);
    for (const StateLabel label : kAllLabels) {
      loops[label.index()][static_cast<std::size_t>(k)] = spec[label].vector;
    }
  }

  WilsonBandPhases out;
  out.min_gap = std::min(gap[0], gap[1]);
  for (const StateLabel label : kAllLabels) {
    const int idx = label.index();
    if (gap[label.m2 > 0 ? 0 : 1] < kGapTol * at.b) {
      out.error[idx] = ErrorKind::DegenerateGap;
      continue;
    }
    const auto& full = loops[idx];
    auto strided = [&](int stride) {
      std::vector<State4> sub;
      sub.reserve(full.size() / static_cast<std::size_t>(stride));
      for (std::size_t k = 0; k < full.size(); k += static_cast<std::size_t>(stride)) {
        sub.push_back(full[k]);
      }
      return wilson_loop_phase(sub).value();
    };
    const double coarse = strided(4);
    const double mid = strided(2);
    const double fine_phase = strided(1);
    // O(h^2) discretisation error
    const double r1 = mid + wrap_phase(mid - coarse) / 3.0;
    const double r2 = fine_phase + wrap_phase(fine_phase - mid) / 3.0;
    if (circular_distance(r1, r2) > kRichardsonTol) {
      out.error[idx] = ErrorKind::NonConverged;
      continue;
    }
    out.phase[idx] = PhaseValue(r2);
  }
  return out;
}

PhaseValue berry_phase_wilson(const DriveConfig& cfg, double theta, StateLabel label,
                              int n_steps) {
  label.validate();
  const WilsonBandPhases all = berry_phases_wilson(cfg, theta, n_steps);
  const int idx = label.index();
  if (all.error[idx]) {
    throw Error(*all.error[idx], "Wilson loop for " + label.name() + " at theta=" +
                                     std::to_string(theta));
  }
  return *all.phase[idx];
}

PhaseValue berry_phase_closed(const DriveConfig& cfg, double theta, StateLabel label) {
  require_theta(theta);
  cfg.validate();
  const double x = effective_ratio(cfg, label, Regime::adiabatic);
  return PhaseValue(kPi + loop_phase_core(x, theta, label.m1));
}

PhaseValue aa_phase_closed(const DriveConfig& cfg, StateLabel label) {
  cfg.validate();
  const double x = effective_ratio(cfg, label, Regime::nonadiabatic);
  return PhaseValue(loop_phase_core(x, cfg.theta, label.m1));
}

double aa_connection_numeric(const DriveConfig& cfg, StateLabel label) {
  cfg.validate();
  label.validate();
  const SectorSpectrum s = band_states(cfg, Regime::nonadiabatic, 0.0);
  if (s.gap(label.m2) < kGapTol * cfg.b) {
    throw Error(ErrorKind::DegenerateGap, "rotating-frame sector gap closes for " + label.name());
  }
  const State4& v = s[label].vector;
  return v.dot(spin_site_operators().sz_total * v).real();
}

CurvatureSample curvature_closed(const DriveConfig& cfg, double theta, StateLabel label,
                                 Regime regime) {
  cfg.validate();
  const double x = effective_ratio(cfg, label, regime);
  const double c = std::cos(theta);
  const double f2 = 1.0 + x * x - 2.0 * x * c;
  if (f2 <= kDenominatorTol * kDenominatorTol) {
    throw Error(ErrorKind::DegenerateGap, "curvature singular at theta=" + std::to_string(theta));
  }
  CurvatureSample out;
  out.theta = theta;
  out.label = label;
  out.regime = regime;
  out.value = label.m1 * 0.5 * std::sin(theta) * (1.0 - x * c) / (f2 * std::sqrt(f2));
  return out;
}

namespace {

double plaquette_angle(const DriveConfig& cfg, double theta, double varphi, StateLabel label,
                       Regime regime, double h) {
  label.validate();
  require_phase_branch(cfg);
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "plaquette step must be > 0");
  const double t0 = theta - 0.5 * h;
  const double t1 = theta + 0.5 * h;
  const double p0 = varphi - 0.5 * h;
  const double p1 = varphi + 0.5 * h;
  auto state = [&](double t, double p) {
    const SectorSpectrum s = band_states(cfg.with_theta(t), regime, p);
    if (s.gap(label.m2) < kGapTol * cfg.b) {
      throw Error(ErrorKind::DegenerateGap, "sector gap closes near " + point_string(t, p));
    }
    return s[label].vector;
  };
  const State4 a = state(t0, p0);
  const State4 b = state(t0, p1);
  const State4 c = state(t1, p1);
  const State4 d = state(t1, p0);
  return oriented_plaquette(a, b, c, d);
}

}  // namespace

CurvatureSample curvature_numeric(const DriveConfig& cfg, double theta, double varphi,
                                  StateLabel label, Regime regime, double h) {
  cfg.validate();
  CurvatureSample out;
  out.theta = theta;
  out.label = label;
  out.regime = regime;
  out.value = plaquette_angle(cfg, theta, varphi, label, regime, h) / (h * h);
  return out;
}

double field_strength_numeric(const DriveConfig& cfg, double theta, double varphi,
                              StateLabel label, Regime regime, double h) {
  return -curvature_numeric(cfg, theta, varphi, label, regime, h).value;
}

LatticeFlux lattice_flux(const StateGrid& grid, int threads) {
  const int rows = grid.n_theta - 1;
  std::vector<double> row_sum(static_cast<std::size_t>(std::max(rows, 0)), 0.0);
  std::vector<double> row_max(row_sum.size(), 0.0);
  parallel_for(rows, threads, [&](int i) {
    double sum = 0.0;
    double peak = 0.0;
    for (int j = 0; j < grid.n_phi; ++j) {
      const int jn = (j + 1) % grid.n_phi;
      const double angle =
          oriented_plaquette(grid.at(i, j), grid.at(i, jn), grid.at(i + 1, jn), grid.at(i + 1, j));
      sum += angle;
      peak = std::max(peak, std::abs(angle));
    }
    row_sum[static_cast<std::size_t>(i)] = sum;
    row_max[static_cast<std::size_t>(i)] = peak;
  });
  LatticeFlux out;
  for (std::size_t i = 0; i < row_sum.size(); ++i) {
    out.total += row_sum[i];
    out.max_plaquette = std::max(out.max_plaquette, row_max[i]);
  }
  return out;
}

BandGrids sample_band_grids(const DriveConfig& cfg, int n_theta, int n_phi, Regime regime,
                            int threads) {
  cfg.validate();
  require_phase_branch(cfg);
  if (n_theta < 20 || n_phi < 20) {
    throw Error(ErrorKind::InvalidArgument, "lattice Chern grid needs n_theta, n_phi >= 20");
  }

  BandGrids out;
  for (auto& g : out.grids) {
    g.n_theta = n_theta;
    g.n_phi = n_phi;
    g.states.resize(static_cast<std::size_t>(n_theta * n_phi));
  }

  struct RowGap {
    std::array<double, 2> gap{};
    std::array<double, 2> phi{};
  };
  std::vector<RowGap> row_gaps(static_cast<std::size_t>(n_theta));

  parallel_for(n_theta, threads, [&](int i) {
    const double theta = (i == n_theta - 1) ? kPi : kPi * i / (n_theta - 1);
    const DriveConfig at = cfg.with_theta(theta);
    const bool pole = (i == 0 || i == n_theta - 1);
    RowGap rg;
    rg.gap = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (int j = 0; j < n_phi; ++j) {
      const double phi = kTwoPi * j / n_phi;
      if (pole && j > 0) {
        // the drive term vanishes at the poles: one state serves the whole row
        for (auto& g : out.grids) g.at(i, j) = g.at(i, 0);
        continue;
      }
      const SectorSpectrum s = band_states(at, regime, phi);
      for (int sector = 0; sector < 2; ++sector) {
        if (s.sector_gap[sector] < rg.gap[sector]) {
          rg.gap[sector] = s.sector_gap[sector];
          rg.phi[sector] = phi;
        }
      }
      for (const StateLabel label : kAllLabels) {
        out.grids[label.index()].at(i, j) = s[label].vector;
      }
    }
    row_gaps[static_cast<std::size_t>(i)] = rg;
  });

  out.min_gap = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (int i = 0; i < n_theta; ++i) {
    const RowGap& rg = row_gaps[static_cast<std::size_t>(i)];
    for (int sector = 0; sector < 2; ++sector) {
      if (rg.gap[sector] < out.min_gap[sector]) {
        out.min_gap[sector] = rg.gap[sector];
        out.min_gap_theta[sector] = kPi * i / (n_theta - 1);
        out.min_gap_phi[sector] = rg.phi[sector];
      }
    }
  }
  return out;
}

namespace {

void require_sector_gap(const BandGrids& bands, int sector, double b) {
  if (bands.min_gap[sector] < kGapTol * b) {
    throw Error(ErrorKind::DegenerateGap,
                std::string("m2=") + (sector == 0 ? "+1" : "-1") + " sector gap " +
                    std::to_string(bands.min_gap[sector]) + " below 1e-6 b at grid point " +
                    point_string(bands.min_gap_theta[sector], bands.min_gap_phi[sector]));
  }
}

}  // namespace

ChernReport chern_lattice(const DriveConfig& cfg, int n_theta, int n_phi, Regime regime,
                          int threads) {
  const BandGrids bands = sample_band_grids(cfg, n_theta, n_phi, regime, threads);
  require_sector_gap(bands, 0, cfg.b);
  require_sector_gap(bands, 1, cfg.b);

  ChernReport report;
  report.n_theta = n_theta;
  report.n_phi = n_phi;
  report.regime = regime;
  report.min_gap = std::min(bands.min_gap[0], bands.min_gap[1]);
  for (const StateLabel label : kAllLabels) {
    const int idx = label.index();
    const double winding = lattice_flux(bands.grids[idx], threads).total / kTwoPi;
    report.flux[idx] = winding;
    report.c1[idx] = static_cast<int>(std::lround(winding));
    report.max_residual = std::max(report.max_residual, std::abs(winding - report.c1[idx]));
  }
  return report;
}

int chern_lattice_band(const DriveConfig& cfg, StateLabel label, int n_theta, int n_phi,
                       Regime regime, int threads) {
  label.validate();
  const BandGrids bands = sample_band_grids(cfg, n_theta, n_phi, regime, threads);
  require_sector_gap(bands, label.m2 > 0 ? 0 : 1, cfg.b);
  const double winding = lattice_flux(bands.grids[label.index()], threads).total / kTwoPi;
  return static_cast<int>(std::lround(winding));
}

int chern_closed(const DriveConfig& cfg, StateLabel label, Regime regime) {
  cfg.validate();
  const double x = std::abs(effective_ratio(cfg, label, regime));
  if (std::abs(x - 1.0) < kTransitionTol) {
    throw Error(ErrorKind::OnTransition, "|x| = 1 for " + label.name() + " in " +
                                             to_string(regime) + " regime");
  }
  return x < 1.0 ? label.m1 : 0;
}

}  // namespace qtopo
