#pragma once

#include <string>
#include <vector>

#include "traitlab/diagnostics.hpp"
#include "traitlab/integrator.hpp"
#include "traitlab/model.hpp"

namespace traitlab {

/// (H, L) grid of rectangle initial data over a fixed fitness/Allee pair.
struct SweepSpec {
    FitnessSpec fitness;
    AlleeSpec allee;
    std::vector<double> h_values;  // strictly increasing heights
    std::vector<double> l_values;  // strictly increasing support lengths
    SimConfig sim;
    int workers = 1;

    void validate() const;  // throws ValidationError
};

struct CellResult {
    Outcome outcome;
    double u_center = 0.0;  // u(T, 0)
    bool ok = false;
    std::string error;
};

struct PhaseDiagram {
    std::vector<double> h_values;
    std::vector<double> l_values;
    std::vector<CellResult> cells;  // row-major: cell(i,j) = cells[i*|L|+j]
    std::vector<Scenario> row_scenarios;
    double eps_eff = 0.0;

    const CellResult& cell(int hi, int lj) const;
};

/// Runs every cell independently (static partition over `workers` threads);
/// integration failures are recorded in-cell and the sweep continues.
PhaseDiagram run_sweep(const SweepSpec& spec);

/// Refines the location of a classification change between L_lo and L_hi
/// by bisection down to `tol`; endpoint classifications must differ and be
/// decided. Undetermined midpoints shrink the bracket toward the
/// Persistent end.
double threshold_bisect(const FitnessSpec& fitness, const AlleeSpec& allee, double H,
                        double L_lo, double L_hi, double tol, const SimConfig& sim);

}  // namespace traitlab
