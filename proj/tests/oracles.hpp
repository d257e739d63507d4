#pragma once

// Reference solutions computed by routes independent of the library's star
// iteration: the textbook closed-form ideal-gas solver (shock jump +
// isentrope power laws, plain bisection) and, for general EOS, bisection on
// the pressure residual with heavily oversampled wave curves. Frozen
// constants in the tests were produced by these oracles.

#include <cmath>
#include <stdexcept>

#include <mgflow/riemann.hpp>

namespace oracle {

struct IdealSide {
  double rho, u, p, gamma;
};

struct Star {
  double p, u, rho_l, rho_r;
};

// Classical two-branch pressure function: exact shock relation above p_k,
// exact isentrope release below. No library calls.
inline double ideal_f(const IdealSide& s, double p) {
  const double g = s.gamma;
  if (p > s.p) {
    const double a = 2.0 / ((g + 1.0) * s.rho);
    const double b = (g - 1.0) / (g + 1.0) * s.p;
    return (p - s.p) * std::sqrt(a / (p + b));
  }
  const double c = std::sqrt(g * s.p / s.rho);
  return 2.0 * c / (g - 1.0) *
         (std::pow(p / s.p, (g - 1.0) / (2.0 * g)) - 1.0);
}

inline double ideal_rho_star(const IdealSide& s, double p) {
  const double g = s.gamma;
  if (p > s.p) {
    const double beta = (g - 1.0) / (g + 1.0);
    return s.rho * (p / s.p + beta) / (beta * (p / s.p) + 1.0);
  }
  return s.rho * std::pow(p / s.p, 1.0 / g);
}

inline Star ideal_star(const IdealSide& l, const IdealSide& r) {
  const double du = r.u - l.u;
  const auto f = [&](double p) { return ideal_f(l, p) + ideal_f(r, p) + du; };
  double lo = 1e-14 * std::min(l.p, r.p);
  double hi = std::max(l.p, r.p);
  if (f(lo) > 0.0) throw std::runtime_error("oracle: vacuum-side input");
  int guard = 0;
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (++guard > 400) throw std::runtime_error("oracle: no upper bracket");
  }
  while (hi - lo > 1e-15 * hi) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  const double p = 0.5 * (lo + hi);
  return {p, 0.5 * (l.u + r.u) + 0.5 * (ideal_f(r, p) - ideal_f(l, p)),
          ideal_rho_star(l, p), ideal_rho_star(r, p)};
}

struct Profile {
  double rho, u, p;
};

// Exact similarity solution at xi = x/t for an ideal-gas pair, including
// rarefaction-fan interiors. Standard formulas throughout.
inline Profile ideal_sample(const IdealSide& l, const IdealSide& r,
                            const Star& st, double xi) {
  if (xi <= st.u) {
    const double g = l.gamma;
    const double c = std::sqrt(g * l.p / l.rho);
    if (st.p > l.p) {
      const double s =
          l.u - c * std::sqrt((g + 1.0) / (2.0 * g) * st.p / l.p +
                              (g - 1.0) / (2.0 * g));
      if (xi < s) return {l.rho, l.u, l.p};
      return {st.rho_l, st.u, st.p};
    }
    const double cs = c * std::pow(st.p / l.p, (g - 1.0) / (2.0 * g));
    if (xi < l.u - c) return {l.rho, l.u, l.p};
    if (xi > st.u - cs) return {st.rho_l, st.u, st.p};
    const double cf = 2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * (l.u - xi));
    return {l.rho * std::pow(cf / c, 2.0 / (g - 1.0)),
            2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * l.u + xi),
            l.p * std::pow(cf / c, 2.0 * g / (g - 1.0))};
  }
  const double g = r.gamma;
  const double c = std::sqrt(g * r.p / r.rho);
  if (st.p > r.p) {
    const double s =
        r.u + c * std::sqrt((g + 1.0) / (2.0 * g) * st.p / r.p +
                            (g - 1.0) / (2.0 * g));
    if (xi > s) return {r.rho, r.u, r.p};
    return {st.rho_r, st.u, st.p};
  }
  const double cs = c * std::pow(st.p / r.p, (g - 1.0) / (2.0 * g));
  if (xi > r.u + c) return {r.rho, r.u, r.p};
  if (xi < st.u + cs) return {st.rho_r, st.u, st.p};
  const double cf = 2.0 / (g + 1.0) * (c - 0.5 * (g - 1.0) * (r.u - xi));
  return {r.rho * std::pow(cf / c, 2.0 / (g - 1.0)),
          2.0 / (g + 1.0) * (-c + 0.5 * (g - 1.0) * r.u + xi),
          r.p * std::pow(cf / c, 2.0 * g / (g - 1.0))};
}

// Plain bisection on f(p) = F_l(p) + F_r(p) + u_r - u_l. The wave curves
// are evaluated with 4096 rarefaction sub-steps and 1e-13 Hugoniot solves,
// so the only shared code with the production path is the curve
// definitions themselves; the root find is independent.
inline Star bisect_star(const mgflow::EosModel& el, const mgflow::FluidState& l,
                        const mgflow::EosModel& er,
                        const mgflow::FluidState& r) {
  const auto branch = [](const mgflow::EosModel& e, const mgflow::FluidState& k,
                         double p) {
    return p > k.p ? mgflow::shock_branch(e, k, p, 1e-13)
                   : mgflow::rarefaction_branch(e, k, p, 4096);
  };
  const auto f = [&](double p) {
    return branch(el, l, p).f + branch(er, r, p).f + (r.u - l.u);
  };
  double lo = 1e-10 * std::min(l.p, r.p);
  double hi = std::max(l.p, r.p);
  // If the wave curves are not evaluable this deep, raise the lower probe;
  // the sign requirement below still guards against vacuum-side inputs.
  for (;;) {
    try {
      if (!(f(lo) < 0.0)) throw std::runtime_error("oracle: vacuum-side input");
      break;
    } catch (const mgflow::EosDomainError&) {
      lo *= 10.0;
      if (lo > 0.5 * std::min(l.p, r.p))
        throw std::runtime_error("oracle: no evaluable lower bracket");
    }
  }
  int guard = 0;
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (++guard > 400) throw std::runtime_error("oracle: no upper bracket");
  }
  while (hi - lo > 1e-13 * hi) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  const double p = 0.5 * (lo + hi);
  const mgflow::BranchEval bl = branch(el, l, p);
  const mgflow::BranchEval br = branch(er, r, p);
  return {p, 0.5 * (l.u + r.u) + 0.5 * (br.f - bl.f), bl.rho, br.rho};
}

}  // namespace oracle
