#include "traitlab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace traitlab {

namespace {

void require_increasing_positive(const std::vector<double>& v, const char* what) {
    if (v.empty()) throw ValidationError(std::string("sweep: empty ") + what + " axis");
    for (size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) throw ValidationError(std::string("sweep: ") + what + " values must be positive");
        if (i > 0 && !(v[i] > v[i - 1]))
            throw ValidationError(std::string("sweep: ") + what + " values must be strictly increasing");
    }
}

CellResult run_cell(const FitnessSpec& fitness, const AlleeSpec& allee, double H, double L,
                    const SimConfig& sim, double eps_eff) {
    CellResult cell;
    try {
        ModelSpec model{fitness, allee, InitialDataSpec::rectangle(H, L)};
        Trajectory traj = simulate(model, sim);
        cell.outcome = classify(traj.final_field(), eps_eff);
        cell.u_center = cell.outcome.center;
        cell.ok = true;
    } catch (const std::exception& err) {
        cell.ok = false;
        cell.error = err.what();
    }
    return cell;
}

}  // namespace

void SweepSpec::validate() const {
    require_increasing_positive(h_values, "H");
    require_increasing_positive(l_values, "L");
    sim.validate();
    if (!(l_values.back() / 2.0 + 5.0 < sim.grid.theta_max()))
        throw ValidationError("sweep: grid too narrow, need max L/2 + 5 < theta_max");
    if (workers < 1) throw ValidationError("sweep: worker count must be at least 1");
    if (allee.is_none()) throw ValidationError("sweep: classification needs an Allee threshold");
}

const CellResult& PhaseDiagram::cell(int hi, int lj) const {
    return cells[static_cast<size_t>(hi) * l_values.size() + static_cast<size_t>(lj)];
}

PhaseDiagram run_sweep(const SweepSpec& spec) {
    spec.validate();
    PhaseDiagram diagram;
    diagram.h_values = spec.h_values;
    diagram.l_values = spec.l_values;
    diagram.eps_eff = allee_threshold(
        {spec.fitness, spec.allee, InitialDataSpec::rectangle(1.0, 1.0)});

    const size_t n_cells = spec.h_values.size() * spec.l_values.size();
    diagram.cells.resize(n_cells);

    const int workers = std::min<int>(spec.workers, static_cast<int>(n_cells));
    auto work = [&](int worker_id) {
        for (size_t k = worker_id; k < n_cells; k += workers) {
            size_t hi = k / spec.l_values.size();
            size_t lj = k % spec.l_values.size();
            diagram.cells[k] = run_cell(spec.fitness, spec.allee, spec.h_values[hi],
                                        spec.l_values[lj], spec.sim, diagram.eps_eff);
        }
    };

    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }

    diagram.row_scenarios.reserve(spec.h_values.size());
    for (size_t hi = 0; hi < spec.h_values.size(); ++hi) {
        std::vector<Outcome> row;
        row.reserve(spec.l_values.size());
        bool usable = true;
        for (size_t lj = 0; lj < spec.l_values.size(); ++lj) {
            const CellResult& cell = diagram.cells[hi * spec.l_values.size() + lj];
            if (!cell.ok) usable = false;
            row.push_back(cell.outcome);
        }
        if (!usable) {
            diagram.row_scenarios.push_back(Scenario::Irregular);
            continue;
        }
        try {
            diagram.row_scenarios.push_back(detect_scenario(row));
        } catch (const ValidationError&) {
            diagram.row_scenarios.push_back(Scenario::Irregular);
        }
    }
    return diagram;
}

double threshold_bisect(const FitnessSpec& fitness, const AlleeSpec& allee, double H,
                        double L_lo, double L_hi, double tol, const SimConfig& sim) {
    if (!(L_lo > 0.0 && L_hi > L_lo)) throw ValidationError("threshold_bisect: need 0 < L_lo < L_hi");
    if (!(tol > 0.0)) throw ValidationError("threshold_bisect: tol must be positive");
    double eps_eff = allee_threshold({fitness, allee, InitialDataSpec::rectangle(1.0, 1.0)});

    auto label_at = [&](double L) {
        CellResult cell = run_cell(fitness, allee, H, L, sim, eps_eff);
        if (!cell.ok) throw ValidationError("threshold_bisect: cell failed: " + cell.error);
        return cell.outcome.label;
    };

    Label lo = label_at(L_lo);
    Label hi = label_at(L_hi);
    if (lo == Label::Undetermined || hi == Label::Undetermined)
        throw ValidationError("threshold_bisect: endpoint classification undetermined");
    if (lo == hi) throw ValidationError("threshold_bisect: endpoint classifications agree, no bracket");

    while (L_hi - L_lo > tol) {
        double mid = 0.5 * (L_lo + L_hi);
        Label m = label_at(mid);
        if (m == Label::Undetermined) {
            // conservative: shrink toward the persistent end
            if (hi == Label::Persistent) L_lo = mid;
            else L_hi = mid;
        } else if (m == lo) {
            L_lo = mid;
            lo = m;
        } else {
            L_hi = mid;
            hi = m;
        }
    }
    return 0.5 * (L_lo + L_hi);
}

}  // namespace traitlab
