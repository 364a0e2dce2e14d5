#include "qtopo/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qtopo/errors.hpp"

namespace qtopo {

namespace {

constexpr int kMaxSweeps = 50;
constexpr double kOffDiagonalTol = 1e-14;
constexpr double kDegeneracyTol = 1e-6;
constexpr double kAssignmentTol = 1e-8;

void fix_phase(Eigen::Ref<State4> v) {
  int best = 0;
  double best_abs = std::abs(v(0));
  for (int k = 1; k < 4; ++k) {
    const double a = std::abs(v(k));
    if (a > best_abs * (1.0 + 1e-12)) {
      best = k;
      best_abs = a;
    }
  }
  if (best_abs > 0.0) v *= std::conj(v(best)) / best_abs;
  v(best) = Complex(std::abs(v(best)), 0.0);
}

double off_diagonal_norm2(const Operator4& a) {
  double s = 0.0;
  for (int p = 0; p < 4; ++p)
    for (int q = p + 1; q < 4; ++q) s += std::norm(a(p, q));
  return 2.0 * s;
}

}  // namespace

EigenSystem eigensystem_unchecked(const Operator4& h) {
  Operator4 a = h;
  Operator4 v = Operator4::Identity();
  const double scale2 = a.squaredNorm();
  const double target2 = kOffDiagonalTol * kOffDiagonalTol * scale2;

  int sweep = 0;
  for (; sweep <= kMaxSweeps; ++sweep) {
    if (off_diagonal_norm2(a) <= target2) break;
    if (sweep == kMaxSweeps) {
      throw Error(ErrorKind::NonConverged, "Jacobi eigensolver exceeded " +
                                               std::to_string(kMaxSweeps) + " sweeps");
    }
    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        const double g = std::abs(a(p, q));
        if (g == 0.0) continue;
        const Complex e = a(p, q) / g;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // real-symmetric rotation on [[app, g], [g, aqq]] after removing the phase e
        const double tau = (aqq - app) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex se = s * e;
        const Complex se_bar = std::conj(se);

        // A <- A J with J(:,p) = (c, -s conj(e)), J(:,q) = (s e, c) on rows p, q
        for (int k = 0; k < 4; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - se_bar * akq;
          a(k, q) = se * akp + c * akq;
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - se_bar * vkq;
          v(k, q) = se * vkp + c * vkq;
        }
        // A <- J^dag A
        for (int k = 0; k < 4; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - se * aqk;
          a(q, k) = se_bar * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::array<int, 4> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return a(x, x).real() < a(y, y).real(); });

  EigenSystem es;
  es.sweeps = sweep;
  for (int k = 0; k < 4; ++k) {
    es.values[k] = a(order[k], order[k]).real();
    es.vectors.col(k) = v.col(order[k]);
    fix_phase(es.vectors.col(k));
  }
  return es;
}

EigenSystem eigensystem(const Operator4& h) {
  if (!is_hermitian(h)) {
    throw Error(ErrorKind::NotHermitian, "max|H - H^dag| exceeds 1e-12 max|H|");
  }
  return eigensystem_unchecked(h);
}

namespace {

double radicand(double x, double cos_theta) { return 1.0 + x * x - 2.0 * x * cos_theta; }

}  // namespace

double closed_form_adiabatic_energy(const DriveConfig& cfg, StateLabel label) {
  label.validate();
  const double half_b = 0.5 * cfg.b;
  const double lam = cfg.lambda();
  switch (require_phase_branch(cfg)) {
    case PhaseBranch::in_phase:
      return -half_b * (label.m1 + label.m2 * lam);
    case PhaseBranch::opposed:
      return -label.m1 * half_b *
             std::sqrt(std::max(0.0, radicand(label.m2 * lam, std::cos(cfg.theta))));
  }
  return 0.0;
}

double closed_form_quasienergy(const DriveConfig& cfg, StateLabel label) {
  label.validate();
  const double half_b = 0.5 * cfg.b;
  const double c = std::cos(cfg.theta);
  switch (require_phase_branch(cfg)) {
    case PhaseBranch::in_phase:
      return -label.m1 * half_b * std::sqrt(std::max(0.0, radicand(cfg.mu(), c))) -
             label.m2 * cfg.t_lr;
    case PhaseBranch::opposed:
      return -label.m1 * half_b * std::sqrt(std::max(0.0, radicand(cfg.delta(label.m2), c)));
  }
  return 0.0;
}

double closed_form_energy(const DriveConfig& cfg, StateLabel label, Regime regime) {
  return regime == Regime::adiabatic ? closed_form_adiabatic_energy(cfg, label)
                                     : closed_form_quasienergy(cfg, label);
}

LabeledSpectrum label_eigenstates(const EigenSystem& es, const DriveConfig& cfg, Regime regime) {
  require_phase_branch(cfg);

  double gap_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k + 1 < 4; ++k) gap_min = std::min(gap_min, es.values[k + 1] - es.values[k]);
  if (gap_min < kDegeneracyTol * cfg.b) {
    throw Error(ErrorKind::DegenerateGap,
                "eigenvalue separation " + std::to_string(gap_min) + " below 1e-6 b");
  }

  std::array<double, 4> closed{};
  for (const StateLabel label : kAllLabels) {
    closed[label.index()] = closed_form_energy(cfg, label, regime);
  }

  // perm[label index] = eigenpair index; brute force over the 24 bijections
  std::array<int, 4> perm{0, 1, 2, 3};
  std::array<int, 4> best_perm = perm;
  double best = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (int l = 0; l < 4; ++l) cost += std::abs(es.values[perm[l]] - closed[l]);
    if (cost < best) {
      second = best;
      best = cost;
      best_perm = perm;
    } else if (cost < second) {
      second = cost;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  if (second - best <= kAssignmentTol * cfg.b) {
    throw Error(ErrorKind::AmbiguousMatch, "two label assignments tie within 1e-8 b");
  }

  LabeledSpectrum out;
  out.gap_min = gap_min;
  for (int l = 0; l < 4; ++l) {
    const int k = best_perm[l];
    const double residual = std::abs(es.values[k] - closed[l]);
    if (residual > kAssignmentTol * cfg.b) {
      throw Error(ErrorKind::AmbiguousMatch,
                  "no label assignment matches the closed-form energies within 1e-8 b");
    }
    out.max_residual = std::max(out.max_residual, residual);
    out.levels[l].energy = es.values[k];
    out.levels[l].vector = es.vectors.col(k);
  }
  return out;
}

Operator4 sector_operator(PhaseBranch branch) {
  const auto& ops = spin_site_operators();
  if (branch == PhaseBranch::in_phase) return ops.hop;
  return 2.0 * ops.hop * ops.sz_total;
}

SectorSpectrum sector_eigenstates(const Operator4& h, PhaseBranch branch) {
  const Operator4 p = sector_operator(branch);
  // Shift the two sectors apart by more than the spectral width of h; the
  // eigenvectors of h + shift * P are then simultaneous eigenvectors.
  const double width = h.norm();
  const double shift = 4.0 * width + 1.0;
  const EigenSystem es = eigensystem_unchecked(h + shift * p);

  // lower pair has P = -1 (m2 = +1), upper pair P = +1 (m2 = -1)
  SectorSpectrum out;
  for (int k = 0; k < 4; ++k) {
    const int m2 = k < 2 ? 1 : -1;
    const int m1 = (k % 2 == 0) ? 1 : -1;
    const StateLabel label{m1, m2};
    out.levels[label.index()].energy = es.values[k] + m2 * shift;
    out.levels[label.index()].vector = es.vectors.col(k);
  }
  out.sector_gap[0] = es.values[1] - es.values[0];
  out.sector_gap[1] = es.values[3] - es.values[2];
  return out;
}

}  // namespace qtopo
