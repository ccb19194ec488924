#pragma once

// Time-domain solution of a CircuitNetwork: trapezoidal integration of the
// modified nodal equations with Newton iteration on the varactor charges.

#include "ringwave/network.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ringwave {

struct TransientOptions {
    /// Nodes to record; empty records every node.
    std::vector<int> record_nodes;
    bool record_inductor_currents = false;
    /// Samples before this time are not stored (the solve still runs from 0).
    double record_from = 0.0;
    /// Initial node voltages; everything else starts at rest.
    std::vector<std::pair<int, double>> initial_voltages;
    double newton_rel_tol = 1e-9;
    int newton_max_iter = 50;
    int max_dt_halvings = 4;
    double gmin = 1e-12;  // S from every node to ground
    /// Skip the dt / run-length checks against the source frequencies.
    bool relax_preconditions = false;
};

struct TimeSeries {
    double dt = 0.0;
    double t_start = 0.0;  // time of the first stored sample
    std::vector<int> nodes;
    std::vector<std::string> names;
    std::vector<std::vector<double>> voltages;          // [channel][sample]
    std::vector<std::vector<double>> inductor_currents;  // [inductor][sample], optional

    std::size_t samples() const { return voltages.empty() ? 0 : voltages.front().size(); }
    /// Recorded waveform of a node; TopologyError if it was not recorded.
    const std::vector<double>& voltage(int node) const;
};

/// Integrates from rest (plus initial_voltages) to t_end with step dt.
/// A step whose Newton iteration fails is retried with dt halved, up to
/// max_dt_halvings times; NumericError after that.
TimeSeries transient_run(const CircuitNetwork& net, double t_end, double dt,
                         const TransientOptions& options = {});

/// Plain CSV: a header row "time,<node names>" then one row per sample.
void write_csv(const TimeSeries& ts, std::ostream& out);

}  // namespace ringwave
