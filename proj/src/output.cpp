#include "pipeflow/output.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace pipeflow {

namespace {

SnapshotRow sample(const GasModel& gas, double x, double rho, double m, double theta) {
  return {x,   rho, m, theta, gas.pressure({rho, theta}), m / rho,
          gas.internal_energy({rho, theta}), gas.entropy({rho, theta})};
}

void write_rows(std::ostream& out, const std::vector<SnapshotRow>& rows) {
  out << kSnapshotHeader << '\n';
  for (const auto& r : rows) {
    out << r.x << ',' << r.rho << ',' << r.m << ',' << r.theta << ',' << r.p << ','
        << r.u << ',' << r.e << ',' << r.s << '\n';
  }
}

}  // namespace

Snapshot make_snapshot(const DiscreteProblem& problem, const State& state) {
  problem.check_shape(state);
  const Mesh1D& mesh = problem.mesh();
  const GasModel& gas = problem.model();
  Snapshot snap;
  snap.t = state.t;
  for (int k = 0; k < mesh.n_elems; ++k) {
    snap.midpoints.push_back(sample(gas, mesh.midpoint(k), state.rho[k],
                                    0.5 * (state.m[k] + state.m[k + 1]),
                                    0.5 * (state.theta[k] + state.theta[k + 1])));
  }
  for (int i = 0; i <= mesh.n_elems; ++i) {
    const double x = mesh.node(i);
    snap.nodes.push_back(sample(gas, x, eval_Q(mesh, state.rho, x), state.m[i],
                                state.theta[i]));
  }
  return snap;
}

void write_snapshot_csv(std::ostream& out, const Snapshot& snap) {
  out << std::setprecision(17);
  out << "# t=" << snap.t << '\n';
  out << "# midpoints\n";
  write_rows(out, snap.midpoints);
  out << "# nodes\n";
  write_rows(out, snap.nodes);
}

void write_balance_csv(std::ostream& out, std::span<const BalanceReport> series) {
  out << std::setprecision(17) << kBalanceHeader << '\n';
  for (const auto& r : series) {
    out << r.t << ',' << r.M << ',' << r.E << ',' << r.S << ',' << r.dM << ',' << r.dE
        << ',' << r.dS << ',' << r.rates.visc << ',' << r.rates.fric << ','
        << r.rates.cond << ',' << r.rates.exch_E << ',' << r.rates.exch_S << ','
        << r.newton_iters << '\n';
  }
}

void write_refine_csv(std::ostream& out, std::span<const RefineRow> rows) {
  out << std::setprecision(17) << kRefineHeader << '\n';
  for (const auto& r : rows) {
    out << r.h << ',' << r.tau << ',' << r.dM << ',' << r.dE << ',' << r.dS << '\n';
  }
}

void write_history_csv(std::ostream& out, std::span<const HistoryRow> rows) {
  out << std::setprecision(17) << kHistoryHeader << '\n';
  for (const auto& r : rows) {
    out << r.t << ',' << r.distance.drho << ',' << r.distance.dm << ','
        << r.distance.dtheta << '\n';
  }
}

void write_snapshot_plot_script(std::ostream& out,
                                const std::vector<std::string>& csv_files,
                                const std::string& png_file) {
  // Only the midpoint block is plotted; the header lines are filtered out.
  out << "set terminal pngcairo size 1200,900\n"
      << "set output '" << png_file << "'\n"
      << "set datafile separator ','\n"
      << "set key off\n"
      << "set multiplot layout 3,2\n";
  const char* columns[] = {"rho", "p", "m", "u", "theta", "s"};
  const int index[] = {2, 5, 3, 6, 4, 8};
  for (int c = 0; c < 6; ++c) {
    out << "set title '" << columns[c] << "'\n";
    out << "plot ";
    for (std::size_t f = 0; f < csv_files.size(); ++f) {
      if (f > 0) out << ", ";
      out << "\"< sed -n '/^# midpoints/,/^# nodes/p' " << csv_files[f]
          << " | grep -v '^[#x]'\" using 1:" << index[c] << " with lines";
    }
    out << '\n';
  }
  out << "unset multiplot\n";
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
}

}  // namespace pipeflow
