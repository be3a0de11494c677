#include "traitlab/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace traitlab {

namespace {

constexpr double kQuadTol = 1e-10;   // relative quadrature target
constexpr double kBisectTol = 1e-10; // λ bracket width
constexpr int kScanPoints = 10000;

double simpson_rule(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson_rule(a, m, fa, flm, fm);
    double right = simpson_rule(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = simpson_rule(a, b, fa, fm, fb);
    tol = std::max(tol, 1e-15 * std::abs(whole));
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 30);
}

// Assumption-style admissibility scan: bump shape, vanishing beyond 2ε,
// dominating r·s below ε.
void check_bump_admissible(double r, const AlleeSpec& allee) {
    if (allee.is_none())
        throw ValidationError("stationary: the energy construction needs a bump-shaped Allee term");
    double eps = allee.eps();
    double scale = std::max(1.0, allee.deriv_at_zero());
    for (int k = 1; k <= kScanPoints; ++k) {
        double x = static_cast<double>(k) / kScanPoints;
        double s_up = eps * x;
        if (allee.eval_deriv(s_up) < -1e-12 * scale)
            throw ValidationError("stationary: f' changes sign on (0, eps); bump shape required");
        if (r * s_up - allee.eval(s_up) >= 0.0)
            throw ValidationError("stationary: r*s - f(s) must stay negative on (0, eps)");
        double s_down = eps * (1.0 + x);
        if (allee.eval_deriv(s_down) > 1e-12 * scale)
            throw ValidationError("stationary: f' must be nonpositive on (eps, 2 eps)");
        double s_out = 2.0 * eps * (1.0 + x);
        if (allee.eval(s_out) != 0.0)
            throw ValidationError("stationary: f must vanish identically beyond 2 eps");
    }
}

}  // namespace

EnergyModel::EnergyModel(double r, const AlleeSpec& allee, double lambda)
    : r_(r), allee_(allee), lambda_(lambda) {
    if (!(r > 0.0)) throw ValidationError("stationary: constant fitness r must be positive");
    check_bump_admissible(r, allee);
    double upper = 2.0 * allee.eps();
    double rough = allee.integral(upper);
    int_f_ = adaptive_simpson([&](double s) { return allee_.eval(s); }, 0.0, upper,
                              kQuadTol * std::max(rough, 1e-30));
}

EnergyModel EnergyModel::with_lambda(double lambda) const {
    EnergyModel copy = *this;
    copy.lambda_ = lambda;
    return copy;
}

double EnergyModel::g(double s) const { return (lambda_ - r_) * s + allee_.eval(s); }

double EnergyModel::G(double v) const {
    return 0.5 * (lambda_ - r_) * v * v + allee_.integral(v);
}

double alpha_lambda(const EnergyModel& em) {
    if (!(em.lambda() >= 0.0 && em.lambda() < em.r()))
        throw ValidationError("alpha_lambda: lambda must lie in [0, r)");
    return std::sqrt(2.0 * em.int_f() / (em.r() - em.lambda()));
}

double theta0(const EnergyModel& em, double alpha) {
    double eps2 = 2.0 * em.eps();
    if (!(alpha > eps2)) throw ValidationError("theta0: degenerate profile, alpha must exceed 2 eps");
    return std::acos(eps2 / alpha) / std::sqrt(em.r() - em.lambda());
}

double cosine_segment(const EnergyModel& em, double theta) {
    return alpha_lambda(em) * std::cos(theta * std::sqrt(em.r() - em.lambda()));
}

double profile_mass(const EnergyModel& em) {
    if (!(em.lambda() > 0.0 && em.lambda() < em.r()))
        throw ValidationError("profile_mass: lambda must lie in (0, r)");
    const double alpha = alpha_lambda(em);
    const double curvature0 = em.lambda() + em.allee().deriv_at_zero() - em.r();  // 2G(v)/v² → curvature0 as v→0
    const double g_alpha = em.g(alpha);  // < 0 at the turning point
    if (!(g_alpha < 0.0)) throw BracketError("profile_mass: g(alpha) must be negative");

    auto safe_sqrt_2G = [&](double v) {
        double val = 2.0 * em.G(v);
        if (val <= 0.0)
            throw BracketError("profile_mass: G_lambda nonpositive inside (0, alpha); "
                               "the bump assumption fails for this model");
        return std::sqrt(val);
    };

    const double v_split = 0.95 * alpha;
    auto body = [&](double v) {
        if (v == 0.0) return 1.0 / std::sqrt(curvature0);
        return v / safe_sqrt_2G(v);
    };
    double scale_guess = alpha / std::sqrt(std::max(curvature0, 1e-12));
    double i_body = adaptive_simpson(body, 0.0, v_split, kQuadTol * scale_guess);

    // v = alpha - w² absorbs the 1/√(alpha - v) endpoint singularity.
    const double w_max = std::sqrt(alpha - v_split);
    auto tip = [&](double w) {
        if (w == 0.0) return 2.0 * alpha / std::sqrt(2.0 * (-g_alpha));  // limit value
        double v = alpha - w * w;
        double val2 = 2.0 * em.G(v);
        double series = 2.0 * (-g_alpha) * w * w;    // leading order at the turning point
        if (!(val2 > 0.25 * series)) val2 = series;  // cancellation guard near w = 0
        return 2.0 * w * v / std::sqrt(val2);
    };
    double i_tip = adaptive_simpson(tip, 0.0, w_max, kQuadTol * scale_guess);

    return 2.0 * (i_body + i_tip);
}

double j_value(const EnergyModel& em) { return profile_mass(em) - em.lambda(); }

StationaryPair find_stationary_pair(double r, const AlleeSpec& allee) {
    EnergyModel em(r, allee);
    const double eps = allee.eps();
    const double ratio = em.int_f() / r;
    const double left_bound = 2.0 * eps * eps;
    const double right_bound =
        2.0 * eps * eps + r * r * r / 128.0 - std::sqrt(2.0) * eps / 8.0 * std::pow(r, 1.5);
    if (ratio < left_bound * (1.0 - 1e-9))
        throw ValidationError("find_stationary_pair: integral condition (1/r)∫f >= 2 eps² fails");
    if (!(ratio < right_bound))
        throw BracketError(
            "find_stationary_pair: sufficient condition (1/r)∫f < 2 eps² + r³/128 - √2 eps r^{3/2}/8 "
            "fails; no bracket at r/2");

    auto j_at = [&](double lambda) { return j_value(em.with_lambda(lambda)); };

    const double mid = 0.5 * r;
    double j_mid = j_at(mid);
    if (j_mid >= 0.0)
        throw BracketError("find_stationary_pair: j(r/2) >= 0, cannot bracket the pair");

    auto bisect = [&](double lo, double hi, double j_lo) {
        // keeps the sign change inside [lo, hi]
        while (hi - lo > kBisectTol) {
            double m = 0.5 * (lo + hi);
            double jm = j_at(m);
            if ((jm > 0.0) == (j_lo > 0.0)) {
                lo = m;
                j_lo = jm;
            } else {
                hi = m;
            }
        }
        return 0.5 * (lo + hi);
    };

    // j > 0 near both endpoints, negative dip around r/2: walk log-spaced
    // λ towards each endpoint until the sign flips back to positive.
    const int kProbes = 64;
    const double decade_span = std::log(1e7);

    double lambda1 = -1.0;
    {
        double prev = mid;
        for (int k = 1; k <= kProbes; ++k) {
            double lam = mid * std::exp(-decade_span * k / kProbes);
            double jl = j_at(lam);
            if (jl > 0.0) {
                lambda1 = bisect(lam, prev, jl);
                break;
            }
            prev = lam;
        }
        if (lambda1 < 0.0)
            throw BracketError("find_stationary_pair: no sign change of j found on (0, r/2]");
    }

    double lambda2 = -1.0;
    {
        double prev = mid;
        for (int k = 1; k <= kProbes; ++k) {
            double lam = r - mid * std::exp(-decade_span * k / kProbes);
            double jl = j_at(lam);
            if (jl > 0.0) {
                lambda2 = bisect(prev, lam, j_at(prev));
                break;
            }
            prev = lam;
        }
        if (lambda2 < 0.0)
            throw BracketError("find_stationary_pair: no sign change of j found on [r/2, r)");
    }

    return {lambda1, lambda2, j_mid, em.int_f()};
}

StationaryProfile build_profile(double lambda, const EnergyModel& base) {
    if (!(lambda > 0.0 && lambda < base.r()))
        throw ValidationError("build_profile: lambda must lie in (0, r)");
    EnergyModel em = base.with_lambda(lambda);

    StationaryProfile profile;
    profile.lambda_ = lambda;
    profile.alpha_ = alpha_lambda(em);
    profile.theta0_ = theta0(em, profile.alpha_);
    profile.sqrt_rml_ = std::sqrt(em.r() - lambda);
    profile.r_ = em.r();
    profile.allee_ = em.allee();
    profile.mass_ = profile_mass(em);

    // Tabulate θ(p) = θ0 + ∫_p^{2ε} dv/√(2G) on a log-spaced p-grid.
    const int kTab = 2048;
    const double p_top = 2.0 * em.eps();
    const double p_floor = 1e-14;
    const double shrink = std::pow(p_floor / p_top, 1.0 / (kTab - 1));
    auto integrand = [&](double v) { return 1.0 / std::sqrt(2.0 * em.G(v)); };

    profile.p_tab_.resize(kTab);
    profile.theta_tab_.resize(kTab);
    profile.log_slope_tab_.resize(kTab);
    profile.p_tab_[0] = p_top;
    profile.theta_tab_[0] = profile.theta0_;
    for (int k = 1; k < kTab; ++k) {
        double p_hi = profile.p_tab_[k - 1];
        double p_lo = p_hi * shrink;
        double rough = (p_hi - p_lo) * integrand(0.5 * (p_lo + p_hi));
        double seg = adaptive_simpson(integrand, p_lo, p_hi, kQuadTol * std::abs(rough));
        profile.p_tab_[k] = p_lo;
        profile.theta_tab_[k] = profile.theta_tab_[k - 1] + seg;
    }
    for (int k = 0; k < kTab; ++k) {
        double p = profile.p_tab_[k];
        profile.log_slope_tab_[k] = -std::sqrt(2.0 * em.G(p)) / p;
    }
    return profile;
}

double StationaryProfile::eval(double theta) const {
    double a = std::abs(theta);
    if (a <= theta0_) return alpha_ * std::cos(a * sqrt_rml_);
    if (a >= theta_tab_.back()) {
        // exponential majorant anchored at the end of the tabulation
        double tail = p_tab_.back() * std::exp(-std::sqrt(lambda_) * (a - theta_tab_.back()));
        return tail >= 1e-14 ? tail : 0.0;
    }
    auto it = std::upper_bound(theta_tab_.begin(), theta_tab_.end(), a);
    size_t k = static_cast<size_t>(it - theta_tab_.begin());
    double t0 = theta_tab_[k - 1], t1 = theta_tab_[k];
    double dt = t1 - t0;
    double x = (a - t0) / dt;

    // Hermite seed in ln p with the exact energy slopes, then Newton on the
    // exact θ(p) relation so the sampled profile carries no interpolation
    // error into second-difference stencils.
    double y0 = std::log(p_tab_[k - 1]), y1 = std::log(p_tab_[k]);
    double s0 = log_slope_tab_[k - 1] * dt, s1 = log_slope_tab_[k] * dt;
    double h00 = (1.0 + 2.0 * x) * (1.0 - x) * (1.0 - x);
    double h10 = x * (1.0 - x) * (1.0 - x);
    double h01 = x * x * (3.0 - 2.0 * x);
    double h11 = x * x * (x - 1.0);
    double p = std::exp(h00 * y0 + h10 * s0 + h01 * y1 + h11 * s1);

    auto G = [&](double v) { return 0.5 * (lambda_ - r_) * v * v + allee_.integral(v); };
    auto dtheta = [&](double v) { return 1.0 / std::sqrt(2.0 * G(v)); };
    const double anchor_theta = theta_tab_[k - 1];
    const double anchor_p = p_tab_[k - 1];
    for (int iter = 0; iter < 3; ++iter) {
        // θ(p) = θ(anchor) + ∫_p^{anchor} dv/√(2G), short smooth interval
        double lo = std::min(p, anchor_p), hi = std::max(p, anchor_p);
        double m = 0.5 * (lo + hi);
        double coarse = (hi - lo) / 6.0 * (dtheta(lo) + 4.0 * dtheta(m) + dtheta(hi));
        double lm = 0.5 * (lo + m), rm = 0.5 * (m + hi);
        double fine = (m - lo) / 6.0 * (dtheta(lo) + 4.0 * dtheta(lm) + dtheta(m)) +
                      (hi - m) / 6.0 * (dtheta(m) + 4.0 * dtheta(rm) + dtheta(hi));
        double seg = fine + (fine - coarse) / 15.0;
        double theta_here = anchor_theta + (p < anchor_p ? seg : -seg);
        p -= (theta_here - a) * (-std::sqrt(2.0 * G(p)));  // dp/dθ = -√(2G)
        if (p <= 0.0) p = 0.5 * std::min(anchor_p, p_tab_[k]);
    }
    return p;
}

Field StationaryProfile::sample(const Grid& grid) const {
    return sample_field(grid, 0.0, [&](double theta) { return eval(theta); });
}

PdeResidual residual_pde(const StationaryProfile& profile, const Grid& grid, double r,
                         const AlleeSpec& allee) {
    Field p = profile.sample(grid);
    Field lap = laplacian(p);
    PdeResidual res;
    res.profile_sup = p.max_value();
    res.mass_gap = std::abs(profile.mass() - profile.lambda());
    for (int i = 1; i + 1 < grid.n(); ++i) {
        double v = p.values[i];
        double pde = lap.values[i] + r * v - profile.mass() * v - allee.eval(v);
        res.max_interior = std::max(res.max_interior, std::abs(pde));
    }
    return res;
}

}  // namespace traitlab
