#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <variant>

#include "errors.hpp"

namespace mgflow {

// Pressure law of the form
//
//   p(rho, e) = G(rho) * rho * e + h(rho)
//
// with Grueneisen coefficient G(rho) and a cold-pressure term h(rho).
// Each model supplies G, h and their first two density derivatives; sound
// speed, convexity and the wave curves are generic on top of that.
//
// Admissibility assumed downstream (checked by tests, used in proofs of
// wave-curve monotonicity): G' <= 0, (rho G)' >= 0, (rho G)'' >= 0,
// G -> G_inf > 0 with G <= G_inf + 2, and h' >= 0, h'' >= 0. Each model
// reports the interval on which all of these are guaranteed
// (validity_domain). Evaluations only require rho > 0: strong shocks can
// compress marginally past the guaranteed interval while the wave curves
// stay monotone, so the interval is enforced where states enter the solvers
// (problem setup, star-state inputs), not per evaluation. Hyperbolicity
// (c^2 > 0) is enforced wherever a sound speed is taken.

struct CoeffBundle {
  double gamma;    // G(rho), dimensionless
  double dgamma;   // G'(rho)
  double d2gamma;  // G''(rho)
  double h;        // h(rho), Pa
  double dh;       // h'(rho)
  double d2h;      // h''(rho)
};

struct DensityInterval {
  double lo;  // kg/m^3, inclusive; 0 means "any positive density"
  double hi;  // kg/m^3, inclusive; +inf when unbounded
  bool contains(double rho) const { return rho >= lo && rho <= hi; }
};

struct IdealGas {
  double gamma;
};

struct StiffenedGas {
  double gamma;
  double p_inf;  // Pa
};

// Compression branch (mu = rho/rho0 - 1 >= 0):
//   p = (a1 mu + a2 mu^2 + a3 mu^3) + (b0 + b1 mu) rho0 e
// Tension branch (mu < 0) uses t1 mu + t2 mu^2 for the cold part and the
// same (b0 + b1 mu) rho0 e thermal part, which keeps G(rho) continuous.
struct Polynomial {
  double a1, a2, a3;  // Pa
  double b0, b1;      // dimensionless
  double t1, t2;      // Pa
  double rho0;        // kg/m^3
};

struct Jwl {
  double a1, a2;  // Pa
  double omega;
  double r1, r2;
  double rho0;  // kg/m^3
};

struct CochranChan {
  double a1, a2;  // Pa
  double omega;
  double r1, r2;
  double rho0;  // kg/m^3
};

class EosModel {
 public:
  EosModel(IdealGas m) : kind_storage_(m) {
    require(m.gamma > 1.0, "ideal gas needs gamma > 1");
    domain_ = {0.0, inf()};
  }

  EosModel(StiffenedGas m) : kind_storage_(m) {
    require(m.gamma > 1.0, "stiffened gas needs gamma > 1");
    require(m.p_inf >= 0.0, "stiffened gas needs p_inf >= 0");
    domain_ = {0.0, inf()};
  }

  EosModel(Polynomial m) : kind_storage_(m) {
    require(m.rho0 > 0.0, "polynomial EOS needs rho0 > 0");
    require(m.a1 > 0.0 && m.a2 > 0.0 && m.a3 > 0.0,
            "polynomial EOS needs a1, a2, a3 > 0");
    require(m.b0 > 0.0 && m.b1 > 0.0, "polynomial EOS needs b0, b1 > 0");
    require(m.t1 > 0.0 && m.t2 >= 0.0,
            "polynomial EOS needs t1 > 0 and t2 >= 0");
    // b1 <= b0 gives G' <= 0; b0 <= b1 + 2 keeps G <= G_inf + 2.
    require(m.b1 <= m.b0 && m.b0 <= m.b1 + 2.0,
            "polynomial EOS needs b1 <= b0 <= b1 + 2");
    require(m.t1 >= 2.0 * m.t2, "polynomial EOS needs t1 >= 2 t2");
    // Below this density the Grueneisen coefficient is no longer guaranteed
    // under the G_inf + 2 cap.
    domain_ = {m.b0 * m.rho0 / (m.b1 + 2.0), inf()};
  }

  EosModel(Jwl m) : kind_storage_(m) {
    require(m.a1 > 0.0 && m.a2 > 0.0, "JWL EOS needs a1, a2 > 0");
    require(m.omega > 0.0, "JWL EOS needs omega > 0");
    require(m.r1 > m.r2 && m.r2 > 0.0, "JWL EOS needs r1 > r2 > 0");
    require(m.rho0 > 0.0, "JWL EOS needs rho0 > 0");
    // h'' >= 0 is guaranteed up to rho = r1 rho0 / (2 + omega + alpha), where
    // alpha bounds the second exponential's contribution from above. The
    // sharp convexity edge usually sits higher (detail::jwl_convexity_limit).
    const double alpha = m.a2 * m.r2 * m.r2 / (m.a1 * m.r1 * (m.r1 - m.r2)) *
                         std::exp(((2.0 + m.omega) * (m.r1 - m.r2) - m.r2) /
                                  m.r2);
    domain_ = {0.0, m.r1 * m.rho0 / (2.0 + m.omega + alpha)};
  }

  EosModel(CochranChan m) : kind_storage_(m) {
    require(m.a1 > 0.0 && m.a2 > 0.0, "Cochran-Chan EOS needs a1, a2 > 0");
    require(m.rho0 > 0.0, "Cochran-Chan EOS needs rho0 > 0");
    // 1 < r2 <= 1 + omega <= r1 makes both cold-curve terms monotone and
    // convex for every positive density.
    require(m.r2 > 1.0 && m.r2 <= 1.0 + m.omega && 1.0 + m.omega <= m.r1,
            "Cochran-Chan EOS needs 1 < r2 <= 1 + omega <= r1");
    domain_ = {0.0, inf()};
  }

  const DensityInterval& validity() const { return domain_; }

  const char* kind() const {
    struct V {
      const char* operator()(const IdealGas&) const { return "ideal"; }
      const char* operator()(const StiffenedGas&) const { return "stiffened"; }
      const char* operator()(const Polynomial&) const { return "polynomial"; }
      const char* operator()(const Jwl&) const { return "jwl"; }
      const char* operator()(const CochranChan&) const { return "cochran-chan"; }
    };
    return std::visit(V{}, kind_storage_);
  }

  template <class Visitor>
  decltype(auto) visit(Visitor&& v) const {
    return std::visit(std::forward<Visitor>(v), kind_storage_);
  }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&kind_storage_);
  }

 private:
  static double inf() { return std::numeric_limits<double>::infinity(); }
  static void require(bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  }

  std::variant<IdealGas, StiffenedGas, Polynomial, Jwl, CochranChan>
      kind_storage_;
  DensityInterval domain_{};
};

namespace detail {

inline CoeffBundle coeffs(const IdealGas& m, double /*rho*/) {
  return {m.gamma - 1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
}

inline CoeffBundle coeffs(const StiffenedGas& m, double /*rho*/) {
  return {m.gamma - 1.0, 0.0, 0.0, -m.gamma * m.p_inf, 0.0, 0.0};
}

inline CoeffBundle coeffs(const Polynomial& m, double rho) {
  const double mu = rho / m.rho0 - 1.0;
  CoeffBundle c;
  // rho G = (b0 + b1 mu) rho0 = b1 rho + (b0 - b1) rho0, both branches.
  c.gamma = m.b1 + (m.b0 - m.b1) * m.rho0 / rho;
  c.dgamma = -(m.b0 - m.b1) * m.rho0 / (rho * rho);
  c.d2gamma = 2.0 * (m.b0 - m.b1) * m.rho0 / (rho * rho * rho);
  if (mu >= 0.0) {
    c.h = (m.a1 + (m.a2 + m.a3 * mu) * mu) * mu;
    c.dh = (m.a1 + (2.0 * m.a2 + 3.0 * m.a3 * mu) * mu) / m.rho0;
    c.d2h = (2.0 * m.a2 + 6.0 * m.a3 * mu) / (m.rho0 * m.rho0);
  } else {
    c.h = (m.t1 + m.t2 * mu) * mu;
    c.dh = (m.t1 + 2.0 * m.t2 * mu) / m.rho0;
    c.d2h = 2.0 * m.t2 / (m.rho0 * m.rho0);
  }
  return c;
}

inline CoeffBundle coeffs(const Jwl& m, double rho) {
  const double q1 = m.r1 * m.rho0 / rho;
  const double q2 = m.r2 * m.rho0 / rho;
  const double e1 = std::exp(-q1);
  const double e2 = std::exp(-q2);
  CoeffBundle c;
  c.gamma = m.omega;
  c.dgamma = 0.0;
  c.d2gamma = 0.0;
  c.h = m.a1 * (1.0 - m.omega * rho / (m.r1 * m.rho0)) * e1 +
        m.a2 * (1.0 - m.omega * rho / (m.r2 * m.rho0)) * e2;
  c.dh = m.a1 * (q1 / rho - m.omega / rho - m.omega / (m.r1 * m.rho0)) * e1 +
         m.a2 * (q2 / rho - m.omega / rho - m.omega / (m.r2 * m.rho0)) * e2;
  c.d2h = m.a1 * q1 / (rho * rho) * (q1 - 2.0 - m.omega) * e1 +
          m.a2 * q2 / (rho * rho) * (q2 - 2.0 - m.omega) * e2;
  return c;
}

inline CoeffBundle coeffs(const CochranChan& m, double rho) {
  const double x = rho / m.rho0;
  const double k1 = m.a1 * (m.r1 - 1.0 - m.omega) / (m.r1 - 1.0);
  const double k2 = m.a2 * (m.r2 - 1.0 - m.omega) / (m.r2 - 1.0);
  const double p1 = std::pow(x, m.r1 - 2.0);
  const double p2 = std::pow(x, m.r2 - 2.0);
  CoeffBundle c;
  c.gamma = m.omega;
  c.dgamma = 0.0;
  c.d2gamma = 0.0;
  c.h = k1 * p1 * x * x - k2 * p2 * x * x;
  c.dh = (k1 * m.r1 * p1 * x - k2 * m.r2 * p2 * x) / m.rho0;
  c.d2h = (k1 * m.r1 * (m.r1 - 1.0) * p1 - k2 * m.r2 * (m.r2 - 1.0) * p2) /
          (m.rho0 * m.rho0);
  return c;
}

// Sharp convexity edge of the JWL cold curve, above the guaranteed interval.
// h'(0+) = 0, so h' stays nonnegative wherever h'' does. With nu = rho0/rho,
// h'' >= 0 reads
//
//   r1 nu - 2 - omega >= (a2 r2 / (a1 r1)) (2 + omega - r2 nu) e^{(r1-r2) nu}
//
// and holds automatically for nu >= (2 + omega) / r2, where the right side
// is nonpositive. The slack is negative as nu -> 0 (any such cold curve
// loses convexity at high enough compression), so scan down from
// (2 + omega) / r2 for the topmost sign change and refine it.
inline double jwl_convexity_limit(const Jwl& m) {
  const double scale = m.a2 * m.r2 / (m.a1 * m.r1);
  const auto slack = [&](double nu) {
    return m.r1 * nu - 2.0 - m.omega -
           scale * (2.0 + m.omega - m.r2 * nu) * std::exp((m.r1 - m.r2) * nu);
  };
  const double nu_top = (2.0 + m.omega) / m.r2;
  const int n = 4096;
  double below = 0.0;  // largest grid nu with negative slack
  for (int i = n - 1; i >= 1; --i) {
    const double nu = nu_top * i / n;
    if (slack(nu) < 0.0) {
      below = nu;
      break;
    }
  }
  double lo = below;               // slack < 0 (holds at nu -> 0 too)
  double hi = below + nu_top / n;  // slack >= 0
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (slack(mid) < 0.0 ? lo : hi) = mid;
  }
  return m.rho0 / hi;
}

inline void check_positive_density(const EosModel& eos, double rho) {
  if (!(rho > 0.0))
    throw EosDomainError(std::string(eos.kind()) +
                         " EOS evaluated at nonpositive density " +
                         std::to_string(rho));
}

inline void check_density(const EosModel& eos, double rho) {
  check_positive_density(eos, rho);
  const DensityInterval& d = eos.validity();
  if (!d.contains(rho))
    throw EosDomainError(std::string(eos.kind()) + " EOS density " +
                         std::to_string(rho) + " outside usable interval [" +
                         std::to_string(d.lo) + ", " + std::to_string(d.hi) +
                         "]");
}

}  // namespace detail

// G, h and derivatives at a density. Requires rho > 0 only.
inline CoeffBundle coefficients(const EosModel& eos, double rho) {
  detail::check_positive_density(eos, rho);
  return eos.visit([rho](const auto& m) { return detail::coeffs(m, rho); });
}

inline double pressure(const EosModel& eos, double rho, double e) {
  const CoeffBundle c = coefficients(eos, rho);
  return c.gamma * rho * e + c.h;
}

inline double internal_energy(const EosModel& eos, double rho, double p) {
  const CoeffBundle c = coefficients(eos, rho);
  return (p - c.h) / (c.gamma * rho);  // c.gamma > 0 by construction
}

namespace detail {

// (dp/drho) at constant entropy, expressed through the coefficient bundle.
inline double sound_speed_sq(const CoeffBundle& c, double rho, double p) {
  return (1.0 / rho + c.dgamma / c.gamma) * (p - c.h) + p * c.gamma / rho +
         c.dh;
}

}  // namespace detail

inline double sound_speed(const EosModel& eos, double rho, double p) {
  detail::check_positive_density(eos, rho);
  const CoeffBundle c = coefficients(eos, rho);
  const double c2 = detail::sound_speed_sq(c, rho, p);
  if (!(c2 > 0.0))
    throw HyperbolicityError(std::string(eos.kind()) +
                             " EOS lost hyperbolicity at rho=" +
                             std::to_string(rho) + ", p=" + std::to_string(p));
  return std::sqrt(c2);
}

// G = 1 + (rho/c) (dc/drho)_s. Positive G means genuinely nonlinear
// characteristic fields: shocks compress, rarefactions expand.
inline double fundamental_derivative(const EosModel& eos, double rho,
                                     double p) {
  detail::check_positive_density(eos, rho);
  const CoeffBundle c = coefficients(eos, rho);
  const double c2 = detail::sound_speed_sq(c, rho, p);
  if (!(c2 > 0.0))
    throw HyperbolicityError(std::string(eos.kind()) +
                             " EOS lost hyperbolicity at rho=" +
                             std::to_string(rho) + ", p=" + std::to_string(p));
  const double e = (p - c.h) / (c.gamma * rho);
  const double rg1 = c.gamma + rho * c.dgamma;         // (rho G)'
  const double rg2 = 2.0 * c.dgamma + rho * c.d2gamma;  // (rho G)''
  const double num = 0.5 * (rho * rg2 + rg1 * (2.0 + c.gamma)) * e +
                     0.5 * rho * c.d2h +
                     p / (2.0 * rho) * (c.gamma * c.gamma + 2.0 * rg1) +
                     0.5 * (2.0 + c.gamma) * c.dh;
  return num / c2;
}

inline DensityInterval validity_domain(const EosModel& eos) {
  return eos.validity();
}

}  // namespace mgflow
