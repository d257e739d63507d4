#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "flow1d.hpp"

namespace mgflow {

// 17 significant digits: round-trips any double exactly, and keeps output
// byte-identical across runs.
inline std::string format_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline void write_snapshot_csv(const std::string& path, const Snapshot& snap) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "x,rho,u,p,e,fluid\n";
  for (const SnapshotRow& r : snap.rows) {
    out << format_full(r.x) << ',' << format_full(r.rho) << ','
        << format_full(r.u) << ',' << format_full(r.p) << ','
        << format_full(r.e) << ',' << r.tag << '\n';
  }
  if (!out) throw Error("write to '" + path + "' failed");
}

inline void write_gauge_csv(const std::string& path,
                            const std::vector<GaugeRecord>& rec) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "t,p\n";
  for (const GaugeRecord& g : rec)
    out << format_full(g.t) << ',' << format_full(g.p) << '\n';
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace mgflow
