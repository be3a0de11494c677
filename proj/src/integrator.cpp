#include "traitlab/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace traitlab {

void SimConfig::validate() const {
    if (!(rtol > 0.0 && rtol <= 1e-2)) throw ValidationError("sim: rtol must lie in (0, 1e-2]");
    if (!(atol > 0.0)) throw ValidationError("sim: atol must be positive");
    if (!(t_end > 0.0)) throw ValidationError("sim: t_end must be positive");
    if (!(dt_init > 0.0 && dt_init <= dt_max && dt_max <= t_end))
        throw ValidationError("sim: need 0 < dt_init <= dt_max <= t_end");
    if (!(sample_every > 0.0)) throw ValidationError("sim: sample_every must be positive");
}

namespace {

/// Reusable kernel for one model on one grid: cached nodal fitness plus
/// scratch buffers for the tridiagonal diffusion solve.
class Stepper {
  public:
    Stepper(const ModelSpec& model, const Grid& grid) : model_(model), grid_(grid) {
        r_nodes_.resize(grid.n());
        for (int i = 0; i < grid.n(); ++i) r_nodes_[i] = model.fitness.eval(grid.node(i));
        scratch_c_.resize(grid.n());
        half_.resize(grid.n());
    }

    // Strang-style split: explicit reaction half-step, implicit diffusion,
    // explicit reaction half-step with refreshed mass.
    void step(const std::vector<double>& in, std::vector<double>& out, double dt, double t_out) {
        const int n = grid_.n();
        reaction_half(in, half_, 0.5 * dt);
        solve_diffusion(half_, out, dt);
        reaction_half(out, out, 0.5 * dt);
        for (int i = 0; i < n; ++i) {
            if (!std::isfinite(out[i]))
                throw BlowupError("integrator: non-finite value at t=" + std::to_string(t_out) +
                                      ", node " + std::to_string(i),
                                  t_out, i);
        }
    }

  private:
    double mass(const std::vector<double>& u) const {
        double acc = 0.5 * (u.front() + u.back());
        for (size_t i = 1; i + 1 < u.size(); ++i) acc += u[i];
        return acc * grid_.h();
    }

    void reaction_half(const std::vector<double>& in, std::vector<double>& out, double hdt) {
        const double rho = mass(in);
        const int n = grid_.n();
        out.resize(n);
        for (int i = 0; i < n; ++i) {
            double u = in[i];
            double fu = u > 0.0 ? model_.allee.eval(u) : 0.0;
            out[i] = u + hdt * ((r_nodes_[i] - rho) * u - fu);
        }
    }

    // (I - dt·Δ_h) x = b with Dirichlet ghosts: constant tridiagonal, Thomas.
    void solve_diffusion(const std::vector<double>& b, std::vector<double>& x, double dt) {
        const int n = grid_.n();
        const double mu = dt / (grid_.h() * grid_.h());
        const double diag = 1.0 + 2.0 * mu;
        const double off = -mu;
        auto& c = scratch_c_;
        x.resize(n);
        c[0] = off / diag;
        x[0] = b[0] / diag;
        for (int i = 1; i < n; ++i) {
            double denom = diag - off * c[i - 1];
            c[i] = off / denom;
            x[i] = (b[i] - off * x[i - 1]) / denom;
        }
        for (int i = n - 2; i >= 0; --i) x[i] -= c[i] * x[i + 1];
    }

    const ModelSpec& model_;
    const Grid& grid_;
    std::vector<double> r_nodes_;
    std::vector<double> scratch_c_;
    std::vector<double> half_;
};

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

Field step_semi_implicit(const Field& field, const ModelSpec& model, double dt) {
    if (!(dt > 0.0)) throw ValidationError("step: dt must be positive");
    Stepper stepper(model, field.grid);
    Field out(field.grid, field.t + dt);
    stepper.step(field.values, out.values, dt, field.t + dt);
    return out;
}

Trajectory advance(const Field& initial, const ModelSpec& model, const SimConfig& cfg) {
    cfg.validate();
    if (!(initial.grid == cfg.grid)) throw ValidationError("advance: field grid differs from config grid");
    if (initial.t != 0.0) throw ValidationError("advance: initial field must carry t = 0");
    if (!initial.finite()) throw ValidationError("advance: initial field has non-finite values");

    constexpr double kDtFloor = 1e-12;
    const double hard_floor = -std::sqrt(cfg.atol);
    const double clamp_band = -10.0 * cfg.atol;

    Stepper stepper(model, cfg.grid);
    Trajectory traj;
    traj.stats.min_dt = cfg.dt_init;

    std::vector<double> u = initial.values;
    double t = 0.0;

    auto record = [&](double time) {
        Field snap(cfg.grid, time, u);
        double rho = total_mass(snap);
        traj.mass_trace.push_back({time, rho, snap.max_value()});
        traj.samples.push_back(std::move(snap));
    };
    record(0.0);

    auto hit_early_stop = [&]() {
        if (!cfg.early_stop) return false;
        double peak = *std::max_element(u.begin(), u.end());
        if (cfg.early_stop->extinct_below > 0.0 && peak < cfg.early_stop->extinct_below) return true;
        if (cfg.early_stop->persist_above > 0.0 && peak > cfg.early_stop->persist_above) return true;
        return false;
    };

    std::vector<double> big(u.size()), half(u.size()), work(u.size());
    double dt_ctrl = cfg.dt_init;
    int sample_index = 1;
    double next_sample = std::min(cfg.sample_every, cfg.t_end);

    while (t < cfg.t_end) {
        double gap = next_sample - t;
        if (gap <= kDtFloor) {  // landed on the sample within fp noise
            t = next_sample;
            record(t);
            sample_index++;
            next_sample = std::min(sample_index * cfg.sample_every, cfg.t_end);
            continue;
        }
        bool clipped = gap <= dt_ctrl;
        double dt = clipped ? gap : dt_ctrl;
        if (dt_ctrl < kDtFloor)
            throw StiffnessError("advance: step size underflow at t=" + std::to_string(t), t);

        stepper.step(u, big, dt, t + dt);
        stepper.step(u, work, 0.5 * dt, t + 0.5 * dt);
        stepper.step(work, half, 0.5 * dt, t + dt);

        double err = 0.0;
        for (size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(big[i] - half[i]));
        double tol = cfg.rtol * max_abs(u) + cfg.atol;
        double factor = err > 0.0 ? std::clamp(0.9 * std::sqrt(tol / err), 0.2, 5.0) : 5.0;

        if (err <= tol) {
            u.swap(half);
            t = clipped ? next_sample : t + dt;  // keep samples on the exact lattice
            traj.stats.accepted++;
            traj.stats.min_dt = std::min(traj.stats.min_dt, dt);
            for (double& v : u) {
                if (v < 0.0) {
                    if (v < hard_floor)
                        throw BlowupError("advance: negative undershoot " + std::to_string(v) +
                                              " at t=" + std::to_string(t),
                                          t, -1);
                    if (v > clamp_band) v = 0.0;
                }
            }
            if (clipped) {
                record(t);
                sample_index++;
                next_sample = std::min(sample_index * cfg.sample_every, cfg.t_end);
                // A sample-aligned step is shorter than the controller asked
                // for; only shrink requests carry over.
                if (factor < 1.0) dt_ctrl = dt * factor;
            } else {
                dt_ctrl = std::min(dt * factor, cfg.dt_max);
            }
            if (hit_early_stop()) {
                if (traj.samples.back().t != t) record(t);
                traj.stopped_early = true;
                break;
            }
        } else {
            traj.stats.rejected++;
            dt_ctrl = dt * factor;  // underflow below the floor errors out next round
        }
    }
    return traj;
}

Trajectory simulate(const ModelSpec& model, const SimConfig& cfg) {
    return advance(sample_initial(model.initial, cfg.grid), model, cfg);
}

}  // namespace traitlab
