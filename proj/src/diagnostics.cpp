#include "traitlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "traitlab/oracles.hpp"

namespace traitlab {

namespace {
constexpr double kSlack = 1e-2;          // multiplicative slack on a-priori bounds
constexpr double kResidualFloor = 1e-8;  // normalization floor for flat traces

int center_index(const Grid& grid) {
    int best = 0;
    for (int i = 1; i < grid.n(); ++i)
        if (std::abs(grid.node(i)) < std::abs(grid.node(best))) best = i;
    return best;
}

bool radially_nonincreasing(const std::vector<double>& values, const Grid& grid, double tol) {
    if (!grid.symmetric()) return false;
    int mid = (grid.n() - 1) / 2;
    for (int i = mid; i + 1 < grid.n(); ++i)
        if (values[i + 1] > values[i] + tol) return false;
    for (int i = 0; i < mid; ++i)
        if (values[i] > values[i + 1] + tol) return false;
    return true;
}
}  // namespace

std::string to_string(Label label) {
    switch (label) {
        case Label::Extinct: return "extinct";
        case Label::Persistent: return "persistent";
        case Label::Undetermined: return "undetermined";
    }
    return "?";
}

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::AllExtinct: return "(E)";
        case Scenario::ThresholdOnly: return "(E*)";
        case Scenario::PersistenceWindow: return "(EPE)";
        case Scenario::PersistenceAbove: return "(EP)";
        case Scenario::Irregular: return "irregular";
    }
    return "?";
}

Outcome classify(const Field& final_field, double eps) {
    if (!(eps > 0.0)) throw ValidationError("classify: eps must be positive");
    Outcome out;
    out.peak = final_field.max_value();
    out.center = final_field.values[center_index(final_field.grid)];
    out.mass_final = total_mass(final_field);
    if (out.peak < eps)
        out.label = Label::Extinct;
    else if (out.peak > 2.0 * eps)
        out.label = Label::Persistent;
    else
        out.label = Label::Undetermined;
    return out;
}

MassBalanceReport mass_balance_residual(const Trajectory& traj, const ModelSpec& model) {
    if (traj.samples.size() < 3)
        throw ValidationError("mass_balance_residual: need at least 3 samples");

    const size_t n = traj.samples.size();
    std::vector<double> defect(n, 0.0), deriv(n, 0.0);
    for (size_t k = 1; k + 1 < n; ++k) {
        double h2 = traj.mass_trace[k].t - traj.mass_trace[k - 1].t;
        double h1 = traj.mass_trace[k + 1].t - traj.mass_trace[k].t;
        double rp = (h2 * h2 * traj.mass_trace[k + 1].rho +
                     (h1 * h1 - h2 * h2) * traj.mass_trace[k].rho -
                     h1 * h1 * traj.mass_trace[k - 1].rho) /
                    (h1 * h2 * (h1 + h2));

        const Field& u = traj.samples[k];
        Field ru = sample_field(u.grid, u.t, [](double) { return 0.0; });
        Field fu = ru;
        for (int i = 0; i < u.grid.n(); ++i) {
            double v = std::max(u.values[i], 0.0);
            ru.values[i] = model.fitness.eval(u.grid.node(i)) * u.values[i];
            fu.values[i] = model.allee.eval(v);
        }
        double rho = traj.mass_trace[k].rho;
        double rhs = total_mass(ru) - rho * rho - total_mass(fu);
        defect[k] = std::abs(rp - rhs);
        deriv[k] = std::abs(rp);
    }

    // One normalization constant per trace; the floor guards flat traces.
    double scale = kResidualFloor;
    for (size_t k = 1; k + 1 < n; ++k) scale = std::max(scale, deriv[k]);

    MassBalanceReport report;
    double sum = 0.0;
    int count = 0;
    for (size_t k = 1; k + 1 < n; ++k) {
        double rel = defect[k] / scale;
        sum += rel;
        ++count;
        if (rel > report.max_relative) {
            report.max_relative = rel;
            report.worst_sample = static_cast<int>(k);
        }
    }
    report.mean_relative = sum / std::max(count, 1);
    return report;
}

EnvelopeReport envelope_check(const Trajectory& traj, const ModelSpec& model) {
    EnvelopeReport report;
    const double r_max = model.fitness.r_max();
    const double rho0 = traj.mass_trace.front().rho;
    report.M = traj.samples.front().max_value();
    report.ubar_applicable = model.fitness.bounded_below();
    if (report.ubar_applicable) {
        double c_lip = model.allee.lipschitz_bound();
        report.K = c_lip - std::min(0.0, model.fitness.infimum());
    }

    for (size_t k = 0; k < traj.samples.size(); ++k) {
        double t = traj.mass_trace[k].t;
        double peak = traj.mass_trace[k].max_u;
        if (t > 0.0) {
            double hk = std::exp(r_max * t) / std::sqrt(4.0 * std::numbers::pi * t) * rho0;
            double margin = peak / hk - 1.0;
            report.heat_kernel_worst_margin = std::max(report.heat_kernel_worst_margin, margin);
            if (margin > kSlack && report.heat_kernel_ok) {
                report.heat_kernel_ok = false;
                report.heat_kernel_first_violation_t = t;
            }
        }
        if (report.ubar_applicable) {
            double ubar = oracles::envelope_ubar(report.M, r_max, report.K, rho0, t);
            double margin = peak / ubar - 1.0;
            report.ubar_worst_margin = std::max(report.ubar_worst_margin, margin);
            if (margin > kSlack && report.ubar_ok) {
                report.ubar_ok = false;
                report.ubar_first_violation_t = t;
            }
        }
    }
    return report;
}

double extinction_g(double x, double r_max, double K) {
    return std::pow(r_max / x, r_max / K) * std::pow((x + K) / (r_max + K), 1.0 + r_max / K);
}

bool extinction_sufficient(double u0_sup, double u0_mass, double r_max, double K, double eps) {
    if (!(u0_sup > 0.0 && u0_mass > 0.0 && r_max > 0.0 && K > 0.0 && eps > 0.0))
        throw ValidationError("extinction_sufficient: all inputs must be positive");
    if (u0_mass <= r_max) return false;
    return u0_sup < eps * extinction_g(u0_mass, r_max, K);
}

Scenario detect_scenario(const std::vector<Outcome>& outcomes) {
    if (outcomes.size() < 3) throw ValidationError("detect_scenario: need at least 3 outcomes");
    const int n = static_cast<int>(outcomes.size());

    int undecided = 0, persistent = 0;
    for (const auto& o : outcomes) {
        if (o.label == Label::Undetermined) ++undecided;
        if (o.label == Label::Persistent) ++persistent;
    }
    if (undecided == n) throw ValidationError("detect_scenario: no decidable outcomes");

    // Lone undetermined cell strictly between extinct neighbors: the
    // measure-zero threshold heuristic.
    if (undecided == 1 && persistent == 0) {
        for (int i = 1; i + 1 < n; ++i)
            if (outcomes[i].label == Label::Undetermined) return Scenario::ThresholdOnly;
    }

    // Collapse undetermined entries to the nearest decided neighbor;
    // equidistant conflicting neighbors stay excluded.
    std::vector<Label> collapsed;
    collapsed.reserve(outcomes.size());
    for (int i = 0; i < n; ++i) {
        Label label = outcomes[i].label;
        if (label == Label::Undetermined) {
            int left = -1, right = -1;
            for (int j = i - 1; j >= 0; --j)
                if (outcomes[j].label != Label::Undetermined) { left = j; break; }
            for (int j = i + 1; j < n; ++j)
                if (outcomes[j].label != Label::Undetermined) { right = j; break; }
            if (left < 0 && right < 0) continue;
            if (left < 0) label = outcomes[right].label;
            else if (right < 0) label = outcomes[left].label;
            else if (i - left < right - i) label = outcomes[left].label;
            else if (right - i < i - left) label = outcomes[right].label;
            else if (outcomes[left].label == outcomes[right].label) label = outcomes[left].label;
            else continue;  // tie between different labels: excluded
        }
        collapsed.push_back(label);
    }

    std::vector<Label> runs;
    for (Label l : collapsed)
        if (runs.empty() || runs.back() != l) runs.push_back(l);

    if (runs.size() == 1 && runs[0] == Label::Extinct) return Scenario::AllExtinct;
    if (runs.size() == 2 && runs[0] == Label::Extinct && runs[1] == Label::Persistent)
        return Scenario::PersistenceAbove;
    if (runs.size() == 3 && runs[0] == Label::Extinct && runs[1] == Label::Persistent &&
        runs[2] == Label::Extinct)
        return Scenario::PersistenceWindow;
    return Scenario::Irregular;
}

bool InvariantReport::all_ok() const {
    return nonneg_ok && mass_bound_ok && smoothing_ok &&
           (!radial_applicable || (radial_monotone_ok && radial_bound_ok));
}

InvariantReport check_invariants(const Trajectory& traj, const ModelSpec& model, double atol) {
    InvariantReport report;
    const Grid& grid = traj.samples.front().grid;
    const double r_max = model.fitness.r_max();
    const double rho0 = traj.mass_trace.front().rho;
    const double mass_bound = std::max(rho0, r_max) * (1.0 + kSlack);
    const double neg_tol = 10.0 * atol;

    std::vector<double> r_nodes(grid.n());
    for (int i = 0; i < grid.n(); ++i) r_nodes[i] = model.fitness.eval(grid.node(i));
    report.radial_applicable =
        grid.symmetric() && radially_nonincreasing(r_nodes, grid, 0.0) &&
        radially_nonincreasing(traj.samples.front().values, grid, 0.0);

    for (size_t k = 0; k < traj.samples.size(); ++k) {
        const Field& u = traj.samples[k];
        report.worst_min = std::min(report.worst_min, u.min_value());
        if (u.min_value() < -neg_tol) report.nonneg_ok = false;

        double excess = traj.mass_trace[k].rho - mass_bound;
        report.worst_mass_excess = std::max(report.worst_mass_excess, excess);
        if (excess > 0.0) report.mass_bound_ok = false;

        if (report.radial_applicable) {
            if (!radially_nonincreasing(u.values, grid, neg_tol)) report.radial_monotone_ok = false;
            double rho = traj.mass_trace[k].rho;
            for (int i = 0; i < grid.n(); ++i) {
                double theta = grid.node(i);
                if (theta == 0.0) continue;
                if (u.values[i] > rho / (2.0 * std::abs(theta)) * (1.0 + kSlack))
                    report.radial_bound_ok = false;
            }
        }
    }

    // u(t+1) against the one-step heat-kernel smoothing bound.
    const double smooth_c = std::exp(r_max) / std::sqrt(4.0 * std::numbers::pi);
    for (size_t k = 0; k < traj.samples.size(); ++k) {
        double target = traj.mass_trace[k].t + 1.0;
        for (size_t m = k + 1; m < traj.samples.size(); ++m) {
            if (std::abs(traj.mass_trace[m].t - target) < 1e-9) {
                double bound = smooth_c * traj.mass_trace[k].rho;
                double margin = traj.mass_trace[m].max_u / bound - 1.0;
                report.smoothing_worst_margin = std::max(report.smoothing_worst_margin, margin);
                if (margin > kSlack) report.smoothing_ok = false;
                break;
            }
        }
    }
    return report;
}

}  // namespace traitlab
