#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "eos.hpp"
#include "errors.hpp"

namespace mgflow {

struct FluidState {
  double rho;  // kg/m^3
  double u;    // m/s
  double p;    // Pa
};

enum class WaveType { shock, rarefaction };

struct WaveSpeeds {
  double head;  // m/s; head == tail for a shock
  double tail;
};

// Largest density reachable through a single shock from rho_k: the root of
// (rho/rho_k - 1) G(rho) = 2. Past it the Hugoniot has no physical branch.
struct RhoMaxResult {
  double rho;            // root of the compression-limit equation
  bool beyond_validity;  // true when the root exceeds the interval on which
                         // the admissibility conditions are guaranteed
};

// One evaluation of a wave-curve branch at pressure p:
//   f    velocity change across the wave (negative on rarefactions)
//   df   df/dp, always positive
//   rho  density behind the wave
struct BranchEval {
  double f;
  double df;
  double rho;
};

struct VacuumCheck {
  double margin;      // m/s; vacuum forms when <= 0
  double integral_l;  // acoustic integral of dp/(rho c) down each isentrope
  double integral_r;
  bool converged;     // false when refinement stalled or the tail estimate
                      // is not negligible against the margin
};

struct SolveOptions {
  double tol = 1e-8;          // relative pressure change between iterates
  int max_iter = 100;
  int substeps = 64;          // RK4 sub-steps per rarefaction evaluation;
                              // 1 gives the single four-stage update
  double hugoniot_tol = 1e-8; // relative density change in the inner solve
};

struct StarState {
  double p;      // Pa
  double u;      // m/s
  double rho_l;  // density behind the left wave
  double rho_r;  // density behind the right wave
  WaveType wave_l, wave_r;
  WaveSpeeds speeds_l, speeds_r;
  int iterations;
  double residual;  // relative pressure change at termination
};

namespace detail {

// Wave-curve prerequisites only; evolving flow states may sit outside the
// guaranteed admissibility interval (see validate_state for input checks).
inline void check_state(const EosModel& eos, const FluidState& s,
                        const char* side) {
  check_positive_density(eos, s.rho);
  if (!(s.p > 0.0))
    throw EosDomainError(std::string(side) + " state has nonpositive pressure " +
                         std::to_string(s.p));
  if (!std::isfinite(s.u))
    throw EosDomainError(std::string(side) + " state has non-finite velocity");
}

}  // namespace detail

// Full input validation: density inside the interval where the
// admissibility conditions are guaranteed, positive pressure, finite
// velocity. Applied where states enter from outside (problem setup, solver
// front ends), not to evolving flow states.
inline void validate_state(const EosModel& eos, const FluidState& s,
                           const char* label) {
  detail::check_density(eos, s.rho);
  if (!(s.p > 0.0))
    throw EosDomainError(std::string(label) +
                         " state has nonpositive pressure " +
                         std::to_string(s.p));
  if (!std::isfinite(s.u))
    throw EosDomainError(std::string(label) + " state has non-finite velocity");
}

// Shock adiabat residual: the state (p, rho) lies on the Hugoniot centered
// at state k exactly when phi = 0. Positive at rho_k, negative at the
// compression limit, strictly decreasing in between.
inline double hugoniot_phi(const EosModel& eos, const FluidState& k, double p,
                           double rho) {
  const CoeffBundle ck = coefficients(eos, k.rho);
  const CoeffBundle c = coefficients(eos, rho);
  return ck.gamma * k.rho * (p - c.h) - c.gamma * rho * (k.p - ck.h) -
         0.5 * ck.gamma * c.gamma * (p + k.p) * (rho - k.rho);
}

inline double hugoniot_dphi_drho(const EosModel& eos, const FluidState& k,
                                 double p, double rho) {
  const CoeffBundle ck = coefficients(eos, k.rho);
  const CoeffBundle c = coefficients(eos, rho);
  return -ck.gamma * k.rho * c.dh -
         (c.gamma + rho * c.dgamma) * (k.p - ck.h) -
         0.5 * ck.gamma * (p + k.p) *
             (c.gamma + c.dgamma * (rho - k.rho));
}

// Slope dp/drho along the Hugoniot centered at k, by implicit
// differentiation of phi. Equals c^2 in the weak-shock limit.
inline double hugoniot_slope(const EosModel& eos, const FluidState& k,
                             double p, double rho) {
  const CoeffBundle ck = coefficients(eos, k.rho);
  const CoeffBundle c = coefficients(eos, rho);
  const double denom = ck.gamma * (2.0 * k.rho - c.gamma * (rho - k.rho));
  return -2.0 * hugoniot_dphi_drho(eos, k, p, rho) / denom;
}

inline RhoMaxResult rho_max(const EosModel& eos, const FluidState& k) {
  detail::check_state(eos, k, "reference");
  const auto W = [&](double rho) {
    return (rho / k.rho - 1.0) * coefficients(eos, rho).gamma - 2.0;
  };
  // Bracket the root; W(rho_k) = -2 and W grows without bound since
  // G tends to a positive limit.
  double hi = k.rho * (1.0 + 2.0 / coefficients(eos, k.rho).gamma);
  int guard = 0;
  while (W(hi) < 0.0) {
    hi *= 2.0;
    if (++guard > 200)
      throw ConvergenceError("compression-limit bracket failed to expand",
                             guard, W(hi));
  }
  double lo = k.rho;
  double rho = std::min(hi, k.rho * (1.0 + 2.0 / coefficients(eos, k.rho).gamma));
  for (int it = 0; it < 200; ++it) {
    const CoeffBundle c = coefficients(eos, rho);
    const double w = (rho / k.rho - 1.0) * c.gamma - 2.0;
    if (w > 0.0)
      hi = rho;
    else
      lo = rho;
    const double dw = c.gamma / k.rho + (rho / k.rho - 1.0) * c.dgamma;
    double next = rho - w / dw;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double change = std::abs(next - rho) / next;
    rho = next;
    if (change < 1e-12) return {rho, rho > validity_domain(eos).hi};
  }
  throw ConvergenceError("compression-limit iteration stalled", 200, 0.0);
}

// Density behind a shock of strength p >= p_k centered at k. Safeguarded
// Newton on phi over (rho_k, rho_max].
inline double hugoniot_density(const EosModel& eos, const FluidState& k,
                               double p, double tol = 1e-8) {
  detail::check_state(eos, k, "pre-shock");
  if (!(p >= k.p))
    throw EosDomainError("shock branch evaluated below the reference pressure");
  if (p == k.p) return k.rho;

  const RhoMaxResult rm = rho_max(eos, k);
  double lo = k.rho;
  double hi = rm.rho;
  if (!(hugoniot_phi(eos, k, p, hi) < 0.0))
    throw EosDomainError(std::string("shock at p=") + std::to_string(p) +
                         " has no post-shock density below the compression "
                         "limit of " + eos.kind() + " EOS (rho_max=" +
                         std::to_string(hi) + " kg/m^3)");

  // Constant-G Hugoniot as the starting point; exact for h = 0.
  const double g = coefficients(eos, k.rho).gamma;
  double rho = k.rho * ((g + 2.0) * p + g * k.p) / (g * p + (g + 2.0) * k.p);
  rho = std::clamp(rho, lo + 1e-14 * lo, hi - 1e-14 * hi);

  for (int it = 0; it < 200; ++it) {
    const double phi = hugoniot_phi(eos, k, p, rho);
    if (phi > 0.0)
      lo = rho;
    else
      hi = rho;
    const double dphi = hugoniot_dphi_drho(eos, k, p, rho);
    double next = rho - phi / dphi;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double change = std::abs(next - rho) / next;
    rho = next;
    if (change < tol) return rho;
  }
  throw ConvergenceError("Hugoniot density iteration stalled", 200, 0.0);
}

inline BranchEval shock_branch(const EosModel& eos, const FluidState& k,
                               double p, double tol = 1e-8) {
  const double rho = hugoniot_density(eos, k, p, tol);
  // Degenerate strength: fall back to the acoustic limit of dF/dp.
  if (p - k.p <= 1e-9 * k.p) {
    const double c = sound_speed(eos, k.rho, k.p);
    return {0.0, 1.0 / (k.rho * c), k.rho};
  }
  const double dv = 1.0 / k.rho - 1.0 / rho;
  const double f = std::sqrt((p - k.p) * dv);
  const double chi = hugoniot_slope(eos, k, p, rho);
  const double df =
      0.5 / f * (dv + (p - k.p) / (rho * rho * chi));
  return {f, df, rho};
}

// Integrates df/dp = 1/(rho c), drho/dp = 1/c^2 from (p_k, rho_k) down to
// p <= p_k with `substeps` classical RK4 steps. One step reproduces the
// four-stage update used by the outer iteration.
inline BranchEval rarefaction_branch(const EosModel& eos, const FluidState& k,
                                     double p, int substeps = 1) {
  detail::check_state(eos, k, "pre-rarefaction");
  if (!(p <= k.p))
    throw EosDomainError(
        "rarefaction branch evaluated above the reference pressure");
  if (substeps < 1) substeps = 1;

  const auto stage = [&](double pr, double rho, const char* name) {
    if (!(rho > 0.0))
      throw EosDomainError(std::string("isentrope reached nonpositive "
                                       "density in ") + eos.kind() +
                           " EOS at stage " + name +
                           " (rho=" + std::to_string(rho) +
                           ", p=" + std::to_string(pr) + ")");
    const CoeffBundle c = coefficients(eos, rho);
    const double c2 = detail::sound_speed_sq(c, rho, pr);
    if (!(c2 > 0.0))
      throw HyperbolicityError(std::string("isentrope breakdown in ") +
                               eos.kind() + " EOS at stage " + name +
                               " (rho=" + std::to_string(rho) +
                               ", p=" + std::to_string(pr) + ")");
    return c2;
  };

  double rho = k.rho;
  double f = 0.0;
  double pa = k.p;
  // Interior nodes are log-spaced in pressure: deep releases (p << p_k)
  // keep a bounded pressure ratio per step where 1/c^2 blows up, and for
  // p near p_k the spacing is indistinguishable from uniform. Nonpositive
  // targets fall back to uniform nodes and fail in the stage checks.
  const bool log_nodes = p > 0.0 && k.p > 0.0;
  const double ratio = log_nodes ? p / k.p : 0.0;
  for (int i = 0; i < substeps; ++i) {
    const double pb = (i == substeps - 1) ? p
                      : log_nodes
                          ? k.p * std::pow(ratio, double(i + 1) / substeps)
                          : k.p + (p - k.p) * (i + 1) / substeps;
    const double h = pb - pa;
    const double pm = pa + 0.5 * h;

    const double c2_1 = stage(pa, rho, "1");
    const double k1r = 1.0 / c2_1;
    const double k1f = 1.0 / (rho * std::sqrt(c2_1));

    const double r2 = rho + 0.5 * h * k1r;
    const double c2_2 = stage(pm, r2, "2");
    const double k2r = 1.0 / c2_2;
    const double k2f = 1.0 / (r2 * std::sqrt(c2_2));

    const double r3 = rho + 0.5 * h * k2r;
    const double c2_3 = stage(pm, r3, "3");
    const double k3r = 1.0 / c2_3;
    const double k3f = 1.0 / (r3 * std::sqrt(c2_3));

    const double r4 = rho + h * k3r;
    const double c2_4 = stage(pb, r4, "4");
    const double k4r = 1.0 / c2_4;
    const double k4f = 1.0 / (r4 * std::sqrt(c2_4));

    rho += h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
    f += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
    pa = pb;
  }
  const double c2 = stage(p, rho, "end");
  return {f, 1.0 / (rho * std::sqrt(c2)), rho};
}

// Two-impedance acoustic estimate of the star pressure. May come out
// nonpositive for strongly separating states; callers clamp to a floor.
inline double acoustic_guess(const EosModel& eos_l, const FluidState& l,
                             const EosModel& eos_r, const FluidState& r) {
  const double zl = l.rho * sound_speed(eos_l, l.rho, l.p);
  const double zr = r.rho * sound_speed(eos_r, r.rho, r.p);
  return (zl * r.p + zr * l.p + zl * zr * (l.u - r.u)) / (zl + zr);
}

namespace detail {

struct AcousticIntegral {
  double value = 0.0;   // integral including the extrapolated tail
  double tail = 0.0;
  bool reached_floor = false;  // false when stopped early at `early_stop`
  bool tail_ok = true;
};

// Integral of dp/(rho c) along the isentrope from p_k down to
// p_k * 1e-60, marched in log-pressure with RK4. Returns early once the
// running value exceeds `early_stop` (the remainder is positive, so any
// vacuum verdict is already decided). The sub-floor remainder is
// extrapolated from the local power-law slope of the integrand.
inline AcousticIntegral inv_impedance_integral(const EosModel& eos,
                                               const FluidState& k,
                                               double early_stop,
                                               int steps_per_decade) {
  constexpr int kDecades = 60;
  const double ln10 = std::log(10.0);

  const auto integrand = [&](double s, double rho, double* drho_ds) {
    const double p = std::exp(s);
    const CoeffBundle c = coefficients(eos, rho);
    const double c2 = sound_speed_sq(c, rho, p);
    if (!(rho > 0.0) || !(c2 > 0.0))
      throw EosDomainError(std::string("isentrope breakdown in ") + eos.kind() +
                           " EOS during vacuum check (rho=" +
                           std::to_string(rho) + ", p=" + std::to_string(p) +
                           ")");
    *drho_ds = p / c2;
    return p / (rho * std::sqrt(c2));
  };

  AcousticIntegral out;
  double s = std::log(k.p);
  double rho = k.rho;
  double g_prev_decade = 0.0;
  const double hstep = -ln10 / steps_per_decade;

  for (int d = 0; d < kDecades; ++d) {
    for (int i = 0; i < steps_per_decade; ++i) {
      double dr1, dr2, dr3, dr4;
      const double g1 = integrand(s, rho, &dr1);
      const double g2 = integrand(s + 0.5 * hstep, rho + 0.5 * hstep * dr1, &dr2);
      const double g3 = integrand(s + 0.5 * hstep, rho + 0.5 * hstep * dr2, &dr3);
      const double g4 = integrand(s + hstep, rho + hstep * dr3, &dr4);
      out.value += -hstep / 6.0 * (g1 + 2.0 * g2 + 2.0 * g3 + g4);
      rho += hstep / 6.0 * (dr1 + 2.0 * dr2 + 2.0 * dr3 + dr4);
      s += hstep;
    }
    if (out.value > early_stop) return out;
    double unused;
    g_prev_decade = (d == kDecades - 2)
                        ? integrand(s, rho, &unused) / std::exp(s)
                        : g_prev_decade;
  }
  out.reached_floor = true;

  // Tail below the floor: fit 1/(rho c) ~ C p^(-a) over the last decade.
  double unused;
  const double pf = std::exp(s);
  const double gf = integrand(s, rho, &unused) / pf;  // 1/(rho c) at floor
  if (g_prev_decade > 0.0 && gf > 0.0) {
    const double a = std::log(gf / g_prev_decade) / ln10;
    if (a < 0.999) {
      out.tail = pf * gf / (1.0 - a);
      out.value += out.tail;
    } else {
      out.tail_ok = false;
    }
  } else {
    out.tail_ok = false;
  }
  return out;
}

inline AcousticIntegral refined_integral(const EosModel& eos,
                                         const FluidState& k, bool* converged) {
  const double inf = std::numeric_limits<double>::infinity();
  AcousticIntegral prev = inv_impedance_integral(eos, k, inf, 32);
  for (int n = 64; n <= 256; n *= 2) {
    AcousticIntegral cur = inv_impedance_integral(eos, k, inf, n);
    if (std::abs(cur.value - prev.value) <= 1e-7 * std::abs(cur.value)) {
      *converged = cur.tail_ok;
      return cur;
    }
    prev = cur;
  }
  *converged = false;
  return prev;
}

}  // namespace detail

inline VacuumCheck check_vacuum(const EosModel& eos_l, const FluidState& l,
                                const EosModel& eos_r, const FluidState& r) {
  detail::check_state(eos_l, l, "left");
  detail::check_state(eos_r, r, "right");
  bool ok_l = false, ok_r = false;
  const detail::AcousticIntegral il = detail::refined_integral(eos_l, l, &ok_l);
  const detail::AcousticIntegral ir = detail::refined_integral(eos_r, r, &ok_r);
  VacuumCheck out;
  out.integral_l = il.value;
  out.integral_r = ir.value;
  out.margin = il.value + ir.value - (r.u - l.u);
  out.converged = ok_l && ok_r &&
                  (il.tail + ir.tail) <= 1e-6 * std::abs(out.margin);
  return out;
}

namespace detail {

// Cheap sufficient test used on the solver hot path. Returns true when the
// margin is safely positive without integrating to the floor.
inline bool vacuum_margin_positive_fast(const EosModel& eos_l,
                                        const FluidState& l,
                                        const EosModel& eos_r,
                                        const FluidState& r) {
  const double du = r.u - l.u;
  if (du <= 0.0) return true;  // both integrals are strictly positive
  const AcousticIntegral il = inv_impedance_integral(eos_l, l, du, 32);
  if (!il.reached_floor) return true;
  const AcousticIntegral ir =
      inv_impedance_integral(eos_r, r, du - il.value, 32);
  if (!ir.reached_floor) return true;
  const double margin = il.value + ir.value - du;
  // Anything this close to the cavitation threshold gets the accurate check.
  return margin > 1e-4 * (il.value + ir.value);
}

inline BranchEval eval_branch(const EosModel& eos, const FluidState& k,
                              double p, const SolveOptions& opt) {
  return p > k.p ? shock_branch(eos, k, p, opt.hugoniot_tol)
                 : rarefaction_branch(eos, k, p, opt.substeps);
}

}  // namespace detail

// Star-region solve: Newton iteration on
//   f(p) = F_l(p) + F_r(p) + u_r - u_l
// with branch selection against each initial pressure per iterate. The
// rarefaction branch uses a fixed small number of RK4 sub-steps, so this is
// an inexact Newton method; tolerance applies to the pressure iterates.
inline StarState solve_star(const EosModel& eos_l, const FluidState& l,
                            const EosModel& eos_r, const FluidState& r,
                            const SolveOptions& opt = {}) {
  detail::check_state(eos_l, l, "left");
  detail::check_state(eos_r, r, "right");
  const double cl = sound_speed(eos_l, l.rho, l.p);
  const double cr = sound_speed(eos_r, r.rho, r.p);

  if (!detail::vacuum_margin_positive_fast(eos_l, l, eos_r, r)) {
    const VacuumCheck vc = check_vacuum(eos_l, l, eos_r, r);
    if (vc.margin <= 0.0)
      throw VacuumError("states separate into vacuum (margin " +
                            std::to_string(vc.margin) + " m/s)",
                        vc.margin);
  }

  const double p_floor = 1e-8 * std::min(l.p, r.p);
  const double du = r.u - l.u;

  double p = std::max(acoustic_guess(eos_l, l, eos_r, r), p_floor);
  double lo = p_floor;
  double hi = std::numeric_limits<double>::infinity();
  bool have_flo = false;  // f < 0 observed at the low end of the bracket
  bool have_fhi = false;  // f > 0 observed at the high end
  int iterations = 0;
  double residual = std::numeric_limits<double>::infinity();

  BranchEval bl{}, br{};
  bool converged = false;
  std::string domain_msg;
  // A bracket that collapses before both signs of f were seen holds no
  // root: the wave curves end (compression limit, isentrope breakdown)
  // before they meet.
  const auto check_pinch = [&]() {
    if (std::isfinite(hi) && hi - lo <= 1e-12 * hi &&
        !(have_flo && have_fhi))
      throw EosDomainError(
          "star state is not reachable within the usable range of the wave "
          "curves" +
          (domain_msg.empty() ? std::string() : ": " + domain_msg));
  };
  while (iterations < opt.max_iter) {
    ++iterations;

    // A trial pressure can step outside an EOS's usable wave-curve range
    // (too strong a shock, or an isentrope breakdown) even when the root
    // itself is fine; shrink the bracket on the offending side and continue
    // instead of giving up.
    bool dom_high = false;
    bool dom_fail = false;
    const auto try_eval = [&](const EosModel& eos, const FluidState& k) {
      try {
        return detail::eval_branch(eos, k, p, opt);
      } catch (const EosDomainError& e) {
        dom_fail = true;
        dom_high = p > k.p;
        domain_msg = e.what();
        return BranchEval{};
      }
    };
    bl = try_eval(eos_l, l);
    if (!dom_fail) br = try_eval(eos_r, r);
    if (dom_fail) {
      if (dom_high)
        hi = std::min(hi, p);
      else
        lo = std::max(lo, p);
      check_pinch();
      p = std::max(std::isinf(hi) ? 2.0 * p : 0.5 * (lo + hi), p_floor);
      continue;
    }

    const double f = bl.f + br.f + du;
    const double slope = bl.df + br.df;
    if (!(slope > 0.0))
      throw ConvergenceError("wave-curve slope lost positivity", iterations,
                             f);
    if (f == 0.0) {
      residual = 0.0;
      converged = true;
      break;
    }
    if (f > 0.0) {
      hi = std::min(hi, p);
      have_fhi = true;
    } else {
      lo = std::max(lo, p);
      have_flo = true;
    }
    if (have_flo && have_fhi && hi - lo <= opt.tol * hi) {
      // Sign change confined to relative width tol; p itself was just
      // evaluated successfully inside it.
      residual = (hi - lo) / hi;
      converged = true;
      break;
    }
    check_pinch();

    double next = p - f / slope;
    if (std::isfinite(next) && next > 0.0 &&
        std::abs(next - p) / next < opt.tol) {
      // Newton contraction near the root; accept even if the step grazes
      // the bracket edge.
      residual = std::abs(next - p) / next;
      p = std::max(next, p_floor);
      converged = true;
      break;
    }
    if (!(next > lo && next < hi))
      next = std::isinf(hi) ? std::max(2.0 * p, p_floor) : 0.5 * (lo + hi);
    next = std::max(next, p_floor);

    residual = std::abs(next - p) / next;
    p = next;
  }
  if (!converged)
    throw ConvergenceError("star-state iteration exhausted its budget",
                           iterations, residual);

  // Evaluate both branches at the accepted pressure so the reported star
  // densities and velocity are mutually consistent.
  try {
    bl = detail::eval_branch(eos_l, l, p, opt);
    br = detail::eval_branch(eos_r, r, p, opt);
  } catch (const EosDomainError& e) {
    throw EosDomainError(std::string("star state converged onto the edge of "
                                     "the usable wave-curve range: ") +
                         e.what());
  }

  StarState st;
  st.p = p;
  // Two-term form: a velocity shift common to both sides then moves u*
  // by exactly that shift (the branch difference is unchanged bit for bit).
  st.u = 0.5 * (l.u + r.u) + 0.5 * (br.f - bl.f);
  st.rho_l = bl.rho;
  st.rho_r = br.rho;
  st.wave_l = p > l.p ? WaveType::shock : WaveType::rarefaction;
  st.wave_r = p > r.p ? WaveType::shock : WaveType::rarefaction;
  st.iterations = iterations;
  st.residual = residual;

  const auto shock_speed = [](const FluidState& k, double rho_s, double u_s,
                              double c_k, int sign) {
    // Mass balance across the discontinuity; acoustic fallback for
    // vanishing strength.
    if (std::abs(rho_s - k.rho) <= 1e-12 * k.rho) return k.u + sign * c_k;
    return (rho_s * u_s - k.rho * k.u) / (rho_s - k.rho);
  };

  if (st.wave_l == WaveType::shock) {
    const double s = shock_speed(l, st.rho_l, st.u, cl, -1);
    st.speeds_l = {s, s};
  } else {
    st.speeds_l = {l.u - cl, st.u - sound_speed(eos_l, st.rho_l, st.p)};
  }
  if (st.wave_r == WaveType::shock) {
    const double s = shock_speed(r, st.rho_r, st.u, cr, +1);
    st.speeds_r = {s, s};
  } else {
    st.speeds_r = {r.u + cr, st.u + sound_speed(eos_r, st.rho_r, st.p)};
  }
  return st;
}

// Self-similar solution sampler. Region boundaries come from the star
// state; interior rarefaction states are found on a precomputed isentrope
// table refined with local re-integration.
class RiemannFan {
 public:
  struct Sample {
    FluidState state;
    int side;  // -1: left fluid, +1: right fluid
  };

  RiemannFan(const EosModel& eos_l, const FluidState& l, const EosModel& eos_r,
             const FluidState& r, const StarState& star, int table_steps = 2048)
      : eos_l_(eos_l), eos_r_(eos_r), l_(l), r_(r), star_(star) {
    if (star.wave_l == WaveType::rarefaction)
      build_table(eos_l_, l_, -1, table_steps, fan_l_);
    if (star.wave_r == WaveType::rarefaction)
      build_table(eos_r_, r_, +1, table_steps, fan_r_);
  }

  Sample sample(double xi) const {
    if (xi <= star_.u) {
      if (star_.wave_l == WaveType::shock) {
        if (xi < star_.speeds_l.head) return {l_, -1};
        return {{star_.rho_l, star_.u, star_.p}, -1};
      }
      if (xi <= star_.speeds_l.head) return {l_, -1};
      if (xi >= star_.speeds_l.tail) return {{star_.rho_l, star_.u, star_.p}, -1};
      return {fan_state(fan_l_, eos_l_, l_, -1, xi), -1};
    }
    if (star_.wave_r == WaveType::shock) {
      if (xi > star_.speeds_r.head) return {r_, +1};
      return {{star_.rho_r, star_.u, star_.p}, +1};
    }
    if (xi >= star_.speeds_r.head) return {r_, +1};
    if (xi <= star_.speeds_r.tail) return {{star_.rho_r, star_.u, star_.p}, +1};
    return {fan_state(fan_r_, eos_r_, r_, +1, xi), +1};
  }

 private:
  struct FanNode {
    double p, rho, f, lambda;
  };

  void build_table(const EosModel& eos, const FluidState& k, int sign,
                   int steps, std::vector<FanNode>& tab) {
    tab.clear();
    tab.reserve(steps + 1);
    const double c0 = sound_speed(eos, k.rho, k.p);
    tab.push_back({k.p, k.rho, 0.0, k.u + sign * c0});
    double p = k.p, rho = k.rho, f = 0.0;
    const double dp = (star_.p - k.p) / steps;
    for (int i = 1; i <= steps; ++i) {
      const double pb = (i == steps) ? star_.p : k.p + dp * i;
      rk4_step(eos, p, pb, &rho, &f);
      p = pb;
      const double c = sound_speed(eos, rho, p);
      const double u = sign < 0 ? k.u - f : k.u + f;
      tab.push_back({p, rho, f, u + sign * c});
    }
  }

  static void rk4_step(const EosModel& eos, double pa, double pb, double* rho,
                       double* f) {
    const double h = pb - pa;
    const double pm = pa + 0.5 * h;
    const auto c2_at = [&](double rr, double pp) {
      const CoeffBundle c = coefficients(eos, rr);
      const double c2 = detail::sound_speed_sq(c, rr, pp);
      if (!(c2 > 0.0))
        throw HyperbolicityError("isentrope breakdown while sampling fan");
      return c2;
    };
    const double c2_1 = c2_at(*rho, pa);
    const double k1r = 1.0 / c2_1, k1f = 1.0 / (*rho * std::sqrt(c2_1));
    const double r2 = *rho + 0.5 * h * k1r;
    const double c2_2 = c2_at(r2, pm);
    const double k2r = 1.0 / c2_2, k2f = 1.0 / (r2 * std::sqrt(c2_2));
    const double r3 = *rho + 0.5 * h * k2r;
    const double c2_3 = c2_at(r3, pm);
    const double k3r = 1.0 / c2_3, k3f = 1.0 / (r3 * std::sqrt(c2_3));
    const double r4 = *rho + h * k3r;
    const double c2_4 = c2_at(r4, pb);
    const double k4r = 1.0 / c2_4, k4f = 1.0 / (r4 * std::sqrt(c2_4));
    *rho += h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
    *f += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
  }

  FluidState fan_state(const std::vector<FanNode>& tab, const EosModel& eos,
                       const FluidState& k, int sign, double xi) const {
    // lambda is monotone along the table; locate the bracketing segment.
    const auto less = [](const FanNode& n, double x) { return n.lambda < x; };
    size_t j;
    if (tab.back().lambda >= tab.front().lambda) {
      j = std::lower_bound(tab.begin(), tab.end(), xi, less) - tab.begin();
    } else {
      j = tab.size() - (std::lower_bound(tab.rbegin(), tab.rend(), xi, less) -
                        tab.rbegin());
    }
    if (j == 0) j = 1;
    if (j >= tab.size()) j = tab.size() - 1;
    const FanNode& a = tab[j - 1];
    const FanNode& b = tab[j];

    // Regula falsi on lambda(p) - xi inside the segment, re-integrating
    // from the left node each time; two updates reach machine precision on
    // a table this fine.
    double pa = a.p, ga = a.lambda - xi;
    double pb = b.p, gb = b.lambda - xi;
    double p = pb, rho = b.rho, f = b.f;
    for (int it = 0; it < 3; ++it) {
      if (ga == gb) break;
      const double pm = pa - ga * (pb - pa) / (gb - ga);
      double rm = a.rho, fm = a.f;
      rk4_step(eos, a.p, pm, &rm, &fm);
      const double c = sound_speed(eos, rm, pm);
      const double u = sign < 0 ? k.u - fm : k.u + fm;
      const double gm = u + sign * c - xi;
      p = pm, rho = rm, f = fm;
      if ((gm < 0.0) == (ga < 0.0))
        pa = pm, ga = gm;
      else
        pb = pm, gb = gm;
    }
    const double u = sign < 0 ? k.u - f : k.u + f;
    return {rho, u, p};
  }

  EosModel eos_l_, eos_r_;
  FluidState l_, r_;
  StarState star_;
  std::vector<FanNode> fan_l_, fan_r_;
};

inline FluidState sample_solution(const EosModel& eos_l, const FluidState& l,
                                  const EosModel& eos_r, const FluidState& r,
                                  const StarState& star, double xi) {
  return RiemannFan(eos_l, l, eos_r, r, star).sample(xi).state;
}

}  // namespace mgflow
