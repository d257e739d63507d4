#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "eos.hpp"
#include "errors.hpp"
#include "riemann.hpp"

namespace mgflow {

enum class Geometry { planar, spherical };
enum class BoundaryType { outflow, reflective };

struct Simulation1DConfig {
  Geometry geometry = Geometry::planar;
  double x_lo = 0.0;
  double x_hi = 1.0;
  int cells = 400;
  double interface_x = 0.5;
  BoundaryType bc_lo = BoundaryType::outflow;
  BoundaryType bc_hi = BoundaryType::outflow;
  double cfl = 0.5;
  double t_end = 0.0;
  double small_cell_theta = 0.5;  // cut sub-cells thinner than this fraction
                                  // of a full cell are merged with a
                                  // same-fluid neighbor after each step
  double p_ambient = 0.0;         // baseline for gauge overpressure
  SolveOptions solver;
  std::vector<double> gauges;
  std::vector<double> snapshot_times;
  long max_steps = 50'000'000;
};

struct GaugeRecord {
  double t;
  double p;
};

struct SnapshotRow {
  double x;  // sub-cell midpoint
  double rho, u, p, e;
  const char* tag;  // "minus", "plus", or "cut" for cut-cell sub-cells
};

struct Snapshot {
  double t;
  std::vector<SnapshotRow> rows;
};

// Relative conservation drift over a run, corrected for what entered or
// left through the domain boundaries (and, radially, for the geometric
// momentum source). Mass is tracked per fluid; the interface exchanges no
// mass and transfers momentum/energy one-to-one between the fluids.
struct ConservationReport {
  double drift_mass_minus = 0.0;
  double drift_mass_plus = 0.0;
  double drift_momentum = 0.0;
  double drift_energy = 0.0;
};

struct SimResult {
  double t_final = 0.0;
  double interface_x = 0.0;
  long steps = 0;
  std::vector<Snapshot> snapshots;
  std::vector<std::vector<GaugeRecord>> gauge_records;  // parallel to gauges
  ConservationReport conservation;
  double wall_seconds = 0.0;
};

struct ShockMetrics {
  double peak_overpressure = 0.0;
  bool arrived = false;
  double arrival_time = 0.0;
  double impulse = 0.0;  // time integral of positive overpressure
};

// Gauge post-processing. Arrival is the first sample above a 0.1% relative
// threshold; the impulse integrates positive overpressure over the whole
// record, or only up to the first return to ambient after arrival when
// `positive_phase_only` is set.
inline ShockMetrics shock_metrics(const std::vector<GaugeRecord>& rec,
                                  double p_ambient,
                                  bool positive_phase_only = false) {
  ShockMetrics m;
  const double threshold = p_ambient * 1e-3;
  for (const GaugeRecord& g : rec) {
    m.peak_overpressure = std::max(m.peak_overpressure, g.p - p_ambient);
    if (!m.arrived && g.p - p_ambient > threshold) {
      m.arrived = true;
      m.arrival_time = g.t;
    }
  }
  size_t end = rec.size();
  if (positive_phase_only && m.arrived) {
    for (size_t i = 0; i + 1 < rec.size(); ++i) {
      if (rec[i].t >= m.arrival_time && rec[i].p - p_ambient > threshold &&
          rec[i + 1].p <= p_ambient) {
        end = i + 2;
        break;
      }
    }
  }
  for (size_t i = 1; i < end; ++i) {
    const double fa = std::max(rec[i - 1].p - p_ambient, 0.0);
    const double fb = std::max(rec[i].p - p_ambient, 0.0);
    m.impulse += 0.5 * (fa + fb) * (rec[i].t - rec[i - 1].t);
  }
  return m;
}

// Two-medium finite-volume scheme on a uniform grid with a tracked sharp
// interface. The interface splits one cell into two sub-cells; each fluid
// is advanced with single-fluid fluxes on its own side and the two sides
// are coupled only through the interface pressure and velocity from the
// two-medium Riemann solve. All bookkeeping is on extensive quantities, so
// redistribution steps conserve exactly.
class TwoMediumSim {
 public:
  using Content = std::array<double, 3>;  // mass, momentum, total energy

  TwoMediumSim(const EosModel& eos_minus, const FluidState& init_minus,
               const EosModel& eos_plus, const FluidState& init_plus,
               const Simulation1DConfig& cfg)
      : cfg_(cfg), eos_m_(eos_minus), eos_p_(eos_plus) {
    if (!(cfg.cells >= 4)) throw ConfigError("grid needs at least 4 cells");
    if (!(cfg.x_hi > cfg.x_lo)) throw ConfigError("empty spatial domain");
    if (!(cfg.cfl > 0.0 && cfg.cfl < 1.0))
      throw ConfigError("cfl must lie in (0,1)");
    if (!(cfg.interface_x > cfg.x_lo && cfg.interface_x < cfg.x_hi))
      throw ConfigError("interface must start strictly inside the domain");
    if (cfg.geometry == Geometry::spherical && cfg.x_lo < 0.0)
      throw ConfigError("radial domain cannot extend below r=0");
    validate_state(eos_m_, init_minus, "lower-fluid initial");
    validate_state(eos_p_, init_plus, "upper-fluid initial");
    n_ = cfg.cells;
    dx_ = (cfg.x_hi - cfg.x_lo) / n_;
    nodes_.resize(n_ + 1);
    for (int j = 0; j <= n_; ++j) nodes_[j] = cfg.x_lo + j * dx_;
    nodes_[n_] = cfg.x_hi;

    xi_ = cfg.interface_x;
    ic_ = locate_cell(xi_);

    minus_.assign(n_, Content{0, 0, 0});
    plus_.assign(n_, Content{0, 0, 0});
    for (int i = 0; i < n_; ++i) {
      if (i < ic_) {
        minus_[i] = content_of(init_minus, eos_m_, cell_measure(i));
      } else if (i > ic_) {
        plus_[i] = content_of(init_plus, eos_p_, cell_measure(i));
      } else {
        const double vm = measure(nodes_[i], xi_);
        const double vp = measure(xi_, nodes_[i + 1]);
        if (vm > 0.0) minus_[i] = content_of(init_minus, eos_m_, vm);
        plus_[i] = content_of(init_plus, eos_p_, vp);
      }
    }
    start_totals_ = totals();
    momentum_scale_ = signal_scale();
  }

  double time() const { return t_; }
  long steps() const { return steps_; }
  double interface_position() const { return xi_; }
  const EosModel& eos_minus() const { return eos_m_; }
  const EosModel& eos_plus() const { return eos_p_; }

  // One forward-Euler step, optionally clipped so t lands on `t_target`.
  // Returns the dt actually taken.
  double step(double t_target = std::numeric_limits<double>::infinity()) {
    refresh_primitives();
    const StarState star = interface_solve();
    double dt = cfl_dt(star);
    if (t_ + dt > t_target) dt = t_target - t_;
    if (!(dt > 0.0)) throw StepError("nonpositive time step");

    advect(dt);
    apply_interface_flux(star, dt);
    if (cfg_.geometry == Geometry::spherical) apply_radial_source(dt);

    relabel(xi_ + star.u * dt);
    merge_small_cells();

    t_ += dt;
    if (++steps_ > cfg_.max_steps)
      throw StepError("step budget exhausted before reaching t_end");
    return dt;
  }

  SimResult run() {
    const auto t0 = std::chrono::steady_clock::now();
    SimResult res;
    res.gauge_records.resize(cfg_.gauges.size());
    record_gauges(res);

    std::vector<double> snaps = cfg_.snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    size_t si = 0;
    const double t_end = cfg_.t_end;
    if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
    while (si < snaps.size() && snaps[si] <= 0.0) {
      res.snapshots.push_back(snapshot());
      ++si;
    }

    while (t_ < t_end * (1.0 - 1e-12)) {
      double target = t_end;
      while (si < snaps.size() && snaps[si] <= t_ * (1.0 + 1e-12)) ++si;
      if (si < snaps.size()) target = std::min(target, snaps[si]);
      step(target);
      record_gauges(res);
      if (si < snaps.size() && t_ >= snaps[si] * (1.0 - 1e-12)) {
        res.snapshots.push_back(snapshot());
        ++si;
      }
    }

    res.t_final = t_;
    res.interface_x = xi_;
    res.steps = steps_;
    res.conservation = conservation_report();
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return res;
  }

  Snapshot snapshot() const {
    Snapshot s;
    s.t = t_;
    s.rows.reserve(n_ + 1);
    for (int i = 0; i < n_; ++i) {
      if (i < ic_) {
        s.rows.push_back(row(minus_[i], eos_m_, nodes_[i], nodes_[i + 1],
                             "minus"));
      } else if (i > ic_) {
        s.rows.push_back(row(plus_[i], eos_p_, nodes_[i], nodes_[i + 1],
                             "plus"));
      } else {
        if (xi_ > nodes_[i])
          s.rows.push_back(row(minus_[i], eos_m_, nodes_[i], xi_, "cut"));
        s.rows.push_back(row(plus_[i], eos_p_, xi_, nodes_[i + 1], "cut"));
      }
    }
    return s;
  }

  FluidState state_at(double x) const {
    int i = locate_cell(x);
    if (i < ic_ || (i == ic_ && x < xi_ && xi_ > nodes_[i]))
      return primitive_of(minus_[i], volume_minus(i), eos_m_);
    return primitive_of(plus_[i], volume_plus(i), eos_p_);
  }

  ConservationReport conservation_report() const {
    const Totals now = totals();
    ConservationReport r;
    r.drift_mass_minus = std::abs(now.minus[0] - start_totals_.minus[0] -
                                  influx_minus_[0]) /
                         mass_scale(start_totals_.minus[0], influx_minus_[0]);
    r.drift_mass_plus = std::abs(now.plus[0] - start_totals_.plus[0] -
                                 influx_plus_[0]) /
                        mass_scale(start_totals_.plus[0], influx_plus_[0]);
    const double mom_now = now.minus[1] + now.plus[1];
    const double mom_0 = start_totals_.minus[1] + start_totals_.plus[1];
    const double mom_in = influx_minus_[1] + influx_plus_[1] + source_momentum_;
    r.drift_momentum = std::abs(mom_now - mom_0 - mom_in) /
                       (momentum_scale_ + std::abs(mom_in));
    const double en_now = now.minus[2] + now.plus[2];
    const double en_0 = start_totals_.minus[2] + start_totals_.plus[2];
    const double en_in = influx_minus_[2] + influx_plus_[2];
    r.drift_energy =
        std::abs(en_now - en_0 - en_in) / (en_0 + std::abs(en_in));
    return r;
  }

 private:
  struct Prim {
    FluidState s{0, 0, 0};
    double c = 0.0;
    bool occupied = false;
  };

  struct Totals {
    Content minus{0, 0, 0}, plus{0, 0, 0};
  };

  double measure(double a, double b) const {
    if (cfg_.geometry == Geometry::spherical)
      return (b * b * b - a * a * a) / 3.0;
    return b - a;
  }
  double area(double r) const {
    return cfg_.geometry == Geometry::spherical ? r * r : 1.0;
  }
  double cell_measure(int i) const { return measure(nodes_[i], nodes_[i + 1]); }
  double volume_minus(int i) const {
    return i < ic_ ? cell_measure(i) : measure(nodes_[i], xi_);
  }
  double volume_plus(int i) const {
    return i > ic_ ? cell_measure(i) : measure(xi_, nodes_[i + 1]);
  }

  int locate_cell(double x) const {
    int i = static_cast<int>((x - cfg_.x_lo) / dx_);
    i = std::clamp(i, 0, n_ - 1);
    while (i + 1 < n_ && x >= nodes_[i + 1]) ++i;
    while (i > 0 && x < nodes_[i]) --i;
    return i;
  }

  static Content content_of(const FluidState& s, const EosModel& eos,
                            double vol) {
    const double e = internal_energy(eos, s.rho, s.p);
    return {vol * s.rho, vol * s.rho * s.u,
            vol * (s.rho * e + 0.5 * s.rho * s.u * s.u)};
  }

  static FluidState primitive_of(const Content& c, double vol,
                                 const EosModel& eos) {
    if (!(vol > 0.0) || !(c[0] > 0.0))
      throw StepError("state requested from an empty region");
    const double rho = c[0] / vol;
    const double u = c[1] / c[0];
    const double e = c[2] / c[0] - 0.5 * u * u;
    if (!(e > 0.0) || !std::isfinite(e))
      throw StepError("internal energy lost positivity (rho=" +
                      std::to_string(rho) + ", e=" + std::to_string(e) + ")");
    return {rho, u, pressure(eos, rho, e)};
  }

  SnapshotRow row(const Content& c, const EosModel& eos, double a, double b,
                  const char* tag) const {
    const FluidState s = primitive_of(c, measure(a, b), eos);
    const double e = internal_energy(eos, s.rho, s.p);
    return {0.5 * (a + b), s.rho, s.u, s.p, e, tag};
  }

  Totals totals() const {
    Totals t;
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < 3; ++k) {
        t.minus[k] += minus_[i][k];
        t.plus[k] += plus_[i][k];
      }
    return t;
  }

  // Momentum drift is measured against the acoustic momentum scale
  // sum(V rho (|u|+c)) of the initial data, since total momentum itself can
  // legitimately vanish.
  double signal_scale() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) {
      if (volume_minus(i) > 0.0 && minus_[i][0] > 0.0) {
        const FluidState st = primitive_of(minus_[i], volume_minus(i), eos_m_);
        s += minus_[i][0] * (std::abs(st.u) + sound_speed(eos_m_, st.rho, st.p));
      }
      if (volume_plus(i) > 0.0 && plus_[i][0] > 0.0) {
        const FluidState st = primitive_of(plus_[i], volume_plus(i), eos_p_);
        s += plus_[i][0] * (std::abs(st.u) + sound_speed(eos_p_, st.rho, st.p));
      }
    }
    return s;
  }

  static double mass_scale(double m0, double influx) {
    return m0 + std::abs(influx);
  }

  void refresh_primitives() {
    pm_.assign(n_, Prim{});
    pp_.assign(n_, Prim{});
    for (int i = 0; i < n_; ++i) {
      const double vm = volume_minus(i);
      if (i <= ic_ && vm > 0.0) {
        pm_[i].s = primitive_of(minus_[i], vm, eos_m_);
        pm_[i].c = sound_speed(eos_m_, pm_[i].s.rho, pm_[i].s.p);
        pm_[i].occupied = true;
      }
      if (i >= ic_) {
        pp_[i].s = primitive_of(plus_[i], volume_plus(i), eos_p_);
        pp_[i].c = sound_speed(eos_p_, pp_[i].s.rho, pp_[i].s.p);
        pp_[i].occupied = true;
      }
    }
  }

  // Effective width of a cell for flux draining: volume over the larger
  // face area. Equals dx in planar geometry; near the spherical origin it
  // drops to r/3, where a plain dx bound would let one step empty the cell.
  double cell_width(int i) const {
    return cell_measure(i) / area(nodes_[i + 1]);
  }

  // Every occupied sub-state contributes a full-cell signal crossing time;
  // sub-cell widths are deliberately left out so a shrinking cut cell
  // cannot collapse dt, yet fast material inside a cut cell still counts.
  // The star waves bound the step too: right after ignition they can run
  // far ahead of every pre-state signal.
  double cfl_dt(const StarState& star) const {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; ++i) {
      const double w = cell_width(i);
      if (pm_[i].occupied)
        m = std::min(m, w / (std::abs(pm_[i].s.u) + pm_[i].c));
      if (pp_[i].occupied)
        m = std::min(m, w / (std::abs(pp_[i].s.u) + pp_[i].c));
    }
    const double star_speed =
        std::max({std::abs(star.speeds_l.head), std::abs(star.speeds_l.tail),
                  std::abs(star.speeds_r.head), std::abs(star.speeds_r.tail),
                  std::abs(star.u)});
    if (star_speed > 0.0) m = std::min(m, cell_width(ic_) / star_speed);
    if (!std::isfinite(m)) throw StepError("no occupied cells");
    return cfg_.cfl * m;
  }

  static std::array<double, 3> phys_flux(const FluidState& s, double E_dens) {
    return {s.rho * s.u, s.rho * s.u * s.u + s.p, s.u * (E_dens + s.p)};
  }

  std::array<double, 3> numeric_flux(const Prim& L, const Prim& R,
                                     const EosModel& eos) const {
    const double eL = internal_energy(eos, L.s.rho, L.s.p);
    const double eR = internal_energy(eos, R.s.rho, R.s.p);
    const double EL = L.s.rho * eL + 0.5 * L.s.rho * L.s.u * L.s.u;
    const double ER = R.s.rho * eR + 0.5 * R.s.rho * R.s.u * R.s.u;
    const std::array<double, 3> FL = phys_flux(L.s, EL);
    const std::array<double, 3> FR = phys_flux(R.s, ER);
    const double lam =
        std::max(std::abs(L.s.u) + L.c, std::abs(R.s.u) + R.c);
    const std::array<double, 3> UL = {L.s.rho, L.s.rho * L.s.u, EL};
    const std::array<double, 3> UR = {R.s.rho, R.s.rho * R.s.u, ER};
    std::array<double, 3> f;
    for (int k = 0; k < 3; ++k)
      f[k] = 0.5 * (FL[k] + FR[k]) - 0.5 * lam * (UR[k] - UL[k]);
    return f;
  }

  Prim ghost(const Prim& interior, BoundaryType bc) const {
    Prim g = interior;
    if (bc == BoundaryType::reflective) g.s.u = -g.s.u;
    return g;
  }

  void advect(double dt) {
    // minus fluid: interior faces strictly left of the interface
    for (int j = 1; j < n_; ++j) {
      if (!(xi_ > nodes_[j])) break;
      const std::array<double, 3> f = numeric_flux(pm_[j - 1], pm_[j], eos_m_);
      const double a = dt * area(nodes_[j]);
      for (int k = 0; k < 3; ++k) {
        minus_[j - 1][k] -= a * f[k];
        minus_[j][k] += a * f[k];
      }
    }
    {  // lower boundary
      const Prim& in = pm_[0];
      const std::array<double, 3> f =
          numeric_flux(ghost(in, cfg_.bc_lo), in, eos_m_);
      const double a = dt * area(nodes_[0]);
      for (int k = 0; k < 3; ++k) {
        minus_[0][k] += a * f[k];
        influx_minus_[k] += a * f[k];
      }
    }
    // plus fluid: interior faces strictly right of the interface
    for (int j = n_ - 1; j >= 1; --j) {
      if (!(xi_ < nodes_[j])) break;
      const std::array<double, 3> f = numeric_flux(pp_[j - 1], pp_[j], eos_p_);
      const double a = dt * area(nodes_[j]);
      for (int k = 0; k < 3; ++k) {
        plus_[j - 1][k] -= a * f[k];
        plus_[j][k] += a * f[k];
      }
    }
    {  // upper boundary
      const Prim& in = pp_[n_ - 1];
      const std::array<double, 3> f =
          numeric_flux(in, ghost(in, cfg_.bc_hi), eos_p_);
      const double a = dt * area(nodes_[n_]);
      for (int k = 0; k < 3; ++k) {
        plus_[n_ - 1][k] -= a * f[k];
        influx_plus_[k] -= a * f[k];
      }
    }
  }

  StarState interface_solve() const {
    const Prim& left = (xi_ > nodes_[ic_]) ? pm_[ic_] : pm_[ic_ - 1];
    if (!left.occupied) throw StepError("interface lost its left donor state");
    const Prim& right = pp_[ic_];
    return solve_star(eos_m_, left.s, eos_p_, right.s, cfg_.solver);
  }

  void apply_interface_flux(const StarState& star, double dt) {
    const double a = dt * area(xi_);
    const int donor = (xi_ > nodes_[ic_]) ? ic_ : ic_ - 1;
    minus_[donor][1] -= a * star.p;
    minus_[donor][2] -= a * star.p * star.u;
    plus_[ic_][1] += a * star.p;
    plus_[ic_][2] += a * star.p * star.u;
  }

  // Radial geometric source: d(momentum)/dt = p d(r^2) across each
  // sub-cell, which balances the metric part of the area-weighted pressure
  // flux exactly for uniform states.
  void apply_radial_source(double dt) {
    for (int i = 0; i < n_; ++i) {
      if (pm_[i].occupied) {
        const double b = (i == ic_) ? xi_ : nodes_[i + 1];
        const double s = dt * pm_[i].s.p * (b * b - nodes_[i] * nodes_[i]);
        minus_[i][1] += s;
        source_momentum_ += s;
      }
      if (pp_[i].occupied) {
        const double a = (i == ic_) ? xi_ : nodes_[i];
        const double s =
            dt * pp_[i].s.p * (nodes_[i + 1] * nodes_[i + 1] - a * a);
        plus_[i][1] += s;
        source_momentum_ += s;
      }
    }
  }

  static bool has_content(const Content& c) { return c[0] > 0.0; }

  // Spread pooled content uniformly over the sub-volumes `vols`, writing
  // through `dst`. The last nonempty slot takes the exact remainder so the
  // pool total is preserved bit-for-bit.
  static void distribute(const Content& pooled, const std::vector<double>& vols,
                         const std::vector<Content*>& dst) {
    double total = 0.0;
    for (double v : vols) total += v;
    if (!(total > 0.0)) {
      for (Content* c : dst) *c = Content{0, 0, 0};
      return;
    }
    int last = -1;
    for (size_t i = 0; i < vols.size(); ++i)
      if (vols[i] > 0.0) last = static_cast<int>(i);
    Content assigned{0, 0, 0};
    for (size_t i = 0; i < vols.size(); ++i) {
      if (static_cast<int>(i) == last) break;
      const double w = vols[i] / total;
      for (int k = 0; k < 3; ++k) {
        (*dst[i])[k] = pooled[k] * w;
        assigned[k] += (*dst[i])[k];
      }
    }
    for (size_t i = 0; i < vols.size(); ++i)
      if (static_cast<int>(i) != last && vols[i] == 0.0)
        *dst[i] = Content{0, 0, 0};
    if (last >= 0)
      for (int k = 0; k < 3; ++k) (*dst[last])[k] = pooled[k] - assigned[k];
  }

  // Re-attribute per-cell content after the interface moves. In the common
  // case the cut cell is unchanged and only the sub-volumes shift. When the
  // interface crosses a node (or lands exactly on one, or sweeps into a
  // cell that held none of its fluid yet) the affected cells are pooled per
  // fluid and redistributed uniformly, which keeps every extensive total
  // exact.
  void relabel(double xi_new) {
    if (!(xi_new > nodes_[0] && xi_new < nodes_[n_]))
      throw StepError("interface reached the domain boundary");
    int ic_new = locate_cell(xi_new);
    if (std::abs(ic_new - ic_) > 1)
      throw StepError("interface crossed more than one cell in a step; "
                      "reduce the CFL number");
    const bool crossed = ic_new != ic_;
    const int lo = std::min(ic_, ic_new);
    const int hi = std::max(ic_, ic_new);

    // minus fluid: new zone [node(mlo), xi_new)
    {
      int mlo = lo;
      Content pooled{0, 0, 0};
      for (int i = mlo; i <= hi; ++i)
        for (int k = 0; k < 3; ++k) pooled[k] += minus_[i][k];
      auto zone_vol = [&](int a) { return measure(nodes_[a], xi_new); };
      bool need = crossed ||
                  (zone_vol(mlo) == 0.0 && has_content(pooled)) ||
                  (zone_vol(mlo) > 0.0 && !has_content(pooled));
      if (need) {
        while ((zone_vol(mlo) == 0.0 && has_content(pooled)) ||
               (zone_vol(mlo) > 0.0 && !has_content(pooled))) {
          if (mlo == 0)
            throw StepError("interface starved the lower fluid out");
          --mlo;
          for (int k = 0; k < 3; ++k) pooled[k] += minus_[mlo][k];
        }
        if (zone_vol(mlo) > 0.0) {
          std::vector<double> vols;
          std::vector<Content*> dst;
          for (int i = mlo; i <= std::max(hi, ic_new); ++i) {
            const double b = std::min(xi_new, nodes_[i + 1]);
            vols.push_back(i < ic_new ? cell_measure(i)
                                      : std::max(measure(nodes_[i], b), 0.0));
            if (i > ic_new) vols.back() = 0.0;
            dst.push_back(&minus_[i]);
          }
          distribute(pooled, vols, dst);
        } else {
          for (int i = mlo; i <= hi; ++i) minus_[i] = Content{0, 0, 0};
        }
      }
    }

    // plus fluid: new zone [xi_new, node(phi+1))
    {
      int phi = hi;
      Content pooled{0, 0, 0};
      for (int i = lo; i <= phi; ++i)
        for (int k = 0; k < 3; ++k) pooled[k] += plus_[i][k];
      bool need = crossed || !has_content(pooled);
      if (need) {
        while (!has_content(pooled)) {
          if (phi == n_ - 1)
            throw StepError("interface starved the upper fluid out");
          ++phi;
          for (int k = 0; k < 3; ++k) pooled[k] += plus_[phi][k];
        }
        std::vector<double> vols;
        std::vector<Content*> dst;
        for (int i = lo; i <= phi; ++i) {
          if (i < ic_new)
            vols.push_back(0.0);
          else if (i == ic_new)
            vols.push_back(measure(xi_new, nodes_[i + 1]));
          else
            vols.push_back(cell_measure(i));
          dst.push_back(&plus_[i]);
        }
        distribute(pooled, vols, dst);
      }
    }

    ic_ = ic_new;
    xi_ = xi_new;
  }

  // Conservative repair for thin cut sub-cells: average the sub-cell with
  // its full same-fluid neighbor. Skipped when no neighbor exists (the
  // fluid then only exchanges pressure work through wall and interface, so
  // the thin cell cannot drain).
  void merge_small_cells() {
    const double vfull = cell_measure(ic_);
    const double vm = measure(nodes_[ic_], xi_);
    if (vm > 0.0 && vm < cfg_.small_cell_theta * vfull && ic_ >= 1) {
      Content pooled;
      for (int k = 0; k < 3; ++k) pooled[k] = minus_[ic_ - 1][k] + minus_[ic_][k];
      std::vector<double> vols = {cell_measure(ic_ - 1), vm};
      std::vector<Content*> dst = {&minus_[ic_ - 1], &minus_[ic_]};
      distribute(pooled, vols, dst);
    }
    const double vp = measure(xi_, nodes_[ic_ + 1]);
    if (vp < cfg_.small_cell_theta * vfull && ic_ + 1 <= n_ - 1) {
      Content pooled;
      for (int k = 0; k < 3; ++k) pooled[k] = plus_[ic_][k] + plus_[ic_ + 1][k];
      std::vector<double> vols = {vp, cell_measure(ic_ + 1)};
      std::vector<Content*> dst = {&plus_[ic_], &plus_[ic_ + 1]};
      distribute(pooled, vols, dst);
    }
  }

  void record_gauges(SimResult& res) const {
    for (size_t g = 0; g < cfg_.gauges.size(); ++g) {
      const double x = cfg_.gauges[g];
      const int i = locate_cell(x);
      const Content* c;
      const EosModel* eos;
      double vol;
      if (i < ic_ || (i == ic_ && x < xi_ && xi_ > nodes_[i])) {
        c = &minus_[i];
        eos = &eos_m_;
        vol = volume_minus(i);
      } else {
        c = &plus_[i];
        eos = &eos_p_;
        vol = volume_plus(i);
      }
      const FluidState s = primitive_of(*c, vol, *eos);
      res.gauge_records[g].push_back({t_, s.p});
    }
  }

  Simulation1DConfig cfg_;
  EosModel eos_m_, eos_p_;
  int n_ = 0;
  double dx_ = 0.0;
  std::vector<double> nodes_;
  std::vector<Content> minus_, plus_;
  std::vector<Prim> pm_, pp_;
  int ic_ = 0;
  double xi_ = 0.0;
  double t_ = 0.0;
  long steps_ = 0;
  Totals start_totals_;
  Content influx_minus_{0, 0, 0}, influx_plus_{0, 0, 0};
  double source_momentum_ = 0.0;
  double momentum_scale_ = 0.0;
};

}  // namespace mgflow
