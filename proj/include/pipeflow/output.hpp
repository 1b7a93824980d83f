#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "pipeflow/assembly.hpp"
#include "pipeflow/diagnostics.hpp"

namespace pipeflow {

/// One sample of a snapshot with the derived quantities p, u = m / rho, e, s.
struct SnapshotRow {
  double x, rho, m, theta, p, u, e, s;
};

struct Snapshot {
  double t = 0.0;
  std::vector<SnapshotRow> midpoints;  // element midpoints
  std::vector<SnapshotRow> nodes;      // mesh nodes
};

/// Samples the discrete fields without interpolating the P0 density: rho is
/// the element value (left element at interior nodes), m and theta are the
/// P1 fields.
Snapshot make_snapshot(const DiscreteProblem& problem, const State& state);

inline constexpr const char* kSnapshotHeader = "x,rho,m,theta,p,u,e,s";
inline constexpr const char* kBalanceHeader =
    "t,M,E,S,dM,dE,dS,visc,fric,cond,exch_E,exch_S,newton_iters";
inline constexpr const char* kRefineHeader = "h,tau,dM,dE,dS";
inline constexpr const char* kHistoryHeader = "t,drho,dm,dtheta";

/// Two blocks, "# midpoints" then "# nodes", each with its own header.
void write_snapshot_csv(std::ostream& out, const Snapshot& snap);
void write_balance_csv(std::ostream& out, std::span<const BalanceReport> series);

struct RefineRow {
  double h, tau, dM, dE, dS;
};
void write_refine_csv(std::ostream& out, std::span<const RefineRow> rows);

struct HistoryRow {
  double t;
  SteadyDistance distance;
};
void write_history_csv(std::ostream& out, std::span<const HistoryRow> rows);

/// gnuplot script that renders the given snapshot CSV files to PNG.
void write_snapshot_plot_script(std::ostream& out,
                                const std::vector<std::string>& csv_files,
                                const std::string& png_file);

void write_file(const std::string& path, const std::string& contents);

}  // namespace pipeflow
