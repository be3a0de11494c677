#include "traitlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "traitlab/grid.hpp"

namespace traitlab {

namespace {
constexpr int kScanPoints = 10000;

void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}
}  // namespace

// ---------------------------------------------------------------------------
// FitnessSpec

FitnessSpec FitnessSpec::constant(double r_max) {
    require(r_max > 0.0, "fitness: r_max must be positive");
    FitnessSpec s;
    s.kind_ = Kind::Constant;
    s.r_max_ = r_max;
    return s;
}

FitnessSpec FitnessSpec::quadratic(double r_max, double alpha) {
    require(r_max > 0.0, "fitness: r_max must be positive");
    require(alpha > 0.0, "fitness: quadratic selection strength must be positive");
    FitnessSpec s;
    s.kind_ = Kind::Quadratic;
    s.r_max_ = r_max;
    s.alpha_ = alpha;
    return s;
}

FitnessSpec FitnessSpec::gaussian_dip(double a, double b, double c) {
    require(a > 0.0 && c > 0.0, "fitness: gaussian dip needs a > 0 and c > 0");
    require(b > 1.0, "fitness: gaussian dip needs b > 1 so that sup r > 0");
    FitnessSpec s;
    s.kind_ = Kind::BoundedGaussianDip;
    s.a_ = a;
    s.b_ = b;
    s.c_ = c;
    s.r_max_ = a * (b - 1.0);
    return s;
}

FitnessSpec FitnessSpec::tabulated(std::vector<double> thetas, std::vector<double> values) {
    require(thetas.size() >= 2 && thetas.size() == values.size(),
            "fitness: tabulated data needs matching arrays of length >= 2");
    for (size_t i = 0; i + 1 < thetas.size(); ++i)
        require(thetas[i] < thetas[i + 1], "fitness: tabulated thetas must be strictly increasing");
    for (double v : values) require(std::isfinite(v), "fitness: tabulated values must be finite");
    FitnessSpec s;
    s.kind_ = Kind::Tabulated;
    s.r_max_ = *std::max_element(values.begin(), values.end());
    require(s.r_max_ > 0.0, "fitness: sup r must be positive");
    s.tab_theta_ = std::move(thetas);
    s.tab_value_ = std::move(values);
    return s;
}

double FitnessSpec::eval(double theta) const {
    switch (kind_) {
        case Kind::Constant:
            return r_max_;
        case Kind::Quadratic:
            return r_max_ - alpha_ * alpha_ * theta * theta;
        case Kind::BoundedGaussianDip:
            return a_ * (b_ * std::exp(-c_ * theta * theta) - 1.0);
        case Kind::Tabulated: {
            if (theta <= tab_theta_.front()) return tab_value_.front();
            if (theta >= tab_theta_.back()) return tab_value_.back();
            auto it = std::upper_bound(tab_theta_.begin(), tab_theta_.end(), theta);
            size_t k = static_cast<size_t>(it - tab_theta_.begin());
            double w = (theta - tab_theta_[k - 1]) / (tab_theta_[k] - tab_theta_[k - 1]);
            return tab_value_[k - 1] + w * (tab_value_[k] - tab_value_[k - 1]);
        }
    }
    return 0.0;
}

double FitnessSpec::infimum() const {
    switch (kind_) {
        case Kind::Constant:
            return r_max_;
        case Kind::Quadratic:
            return -std::numeric_limits<double>::infinity();
        case Kind::BoundedGaussianDip:
            return -a_;
        case Kind::Tabulated:
            return *std::min_element(tab_value_.begin(), tab_value_.end());
    }
    return 0.0;
}

bool FitnessSpec::bounded_below() const { return std::isfinite(infimum()); }

// ---------------------------------------------------------------------------
// AlleeSpec

AlleeSpec AlleeSpec::none() { return AlleeSpec{}; }

AlleeSpec AlleeSpec::polynomial_bump(double amplitude, double eps) {
    require(amplitude > 0.0 && eps > 0.0, "allee: bump needs positive amplitude and eps");
    AlleeSpec s;
    s.kind_ = Kind::PolynomialBump;
    s.amplitude_ = amplitude;
    s.eps_ = eps;
    return s;
}

AlleeSpec AlleeSpec::smoothed_triangle(double rate, double eps, double delta) {
    require(rate > 0.0 && eps > 0.0, "allee: triangle needs positive rate and eps");
    require(delta > 0.0 && 3.0 * delta < eps, "allee: triangle cap half-width must obey 0 < delta < eps/3");
    AlleeSpec s;
    s.kind_ = Kind::SmoothedTriangle;
    s.amplitude_ = rate;
    s.eps_ = eps;
    s.delta_ = delta;
    // The two caps shave 2·(2·rate·δ²/3) off the exact triangle integral
    // 2·rate·ε²; scale so the smoothed integral matches it exactly.
    s.norm_ = 1.0 / (1.0 - (2.0 / 3.0) * (delta / eps) * (delta / eps));
    return s;
}

AlleeSpec AlleeSpec::smoothed_triangle(double rate, double eps) {
    return smoothed_triangle(rate, eps, eps / 10.0);
}

AlleeSpec AlleeSpec::exp_form(double r_max) {
    require(r_max > 0.0, "allee: exp form needs positive r_max");
    AlleeSpec s;
    s.kind_ = Kind::ExpForm;
    s.amplitude_ = r_max;
    s.eps_ = 0.5;  // where r_max·s - f(s) changes sign
    return s;
}

double AlleeSpec::eval(double s) const {
    if (s < 0.0) throw std::domain_error("allee: f is defined for s >= 0");
    switch (kind_) {
        case Kind::None:
            return 0.0;
        case Kind::PolynomialBump: {
            double e2 = 2.0 * eps_;
            if (s >= e2) return 0.0;
            double w = 1.0 - s / e2;
            return amplitude_ * s * w * w;
        }
        case Kind::SmoothedTriangle: {
            double r = amplitude_, e = eps_, d = delta_;
            if (s >= 2.0 * e) return 0.0;
            double v;
            if (s <= e - d) {
                v = 2.0 * r * s;
            } else if (s <= e + d) {
                v = 2.0 * r * (e - 0.5 * d) - r * (s - e) * (s - e) / d;
            } else if (s <= 2.0 * e - 2.0 * d) {
                v = 2.0 * r * (2.0 * e - s);
            } else {
                double x = (s - (2.0 * e - 2.0 * d)) / (2.0 * d);
                v = 4.0 * r * d * (1.0 - x) * (1.0 - x) * (1.0 + x);
            }
            return norm_ * v;
        }
        case Kind::ExpForm:
            return amplitude_ * s * std::exp(0.5 - s);
    }
    return 0.0;
}

double AlleeSpec::eval_deriv(double s) const {
    if (s < 0.0) throw std::domain_error("allee: f' is defined for s >= 0");
    switch (kind_) {
        case Kind::None:
            return 0.0;
        case Kind::PolynomialBump: {
            double e2 = 2.0 * eps_;
            if (s >= e2) return 0.0;
            return amplitude_ * (1.0 - s / e2) * (1.0 - 3.0 * s / e2);
        }
        case Kind::SmoothedTriangle: {
            double r = amplitude_, e = eps_, d = delta_;
            if (s >= 2.0 * e) return 0.0;
            double v;
            if (s <= e - d) {
                v = 2.0 * r;
            } else if (s <= e + d) {
                v = -2.0 * r * (s - e) / d;
            } else if (s <= 2.0 * e - 2.0 * d) {
                v = -2.0 * r;
            } else {
                double x = (s - (2.0 * e - 2.0 * d)) / (2.0 * d);
                v = 2.0 * r * (x - 1.0) * (3.0 * x + 1.0);
            }
            return norm_ * v;
        }
        case Kind::ExpForm:
            return amplitude_ * std::exp(0.5 - s) * (1.0 - s);
    }
    return 0.0;
}

double AlleeSpec::integral(double s) const {
    if (s < 0.0) throw std::domain_error("allee: integral is defined for s >= 0");
    switch (kind_) {
        case Kind::None:
            return 0.0;
        case Kind::PolynomialBump: {
            double e2 = 2.0 * eps_;
            double v = std::min(s, e2);
            return amplitude_ * (v * v / 2.0 - v * v * v / (1.5 * e2) + v * v * v * v / (4.0 * e2 * e2));
        }
        case Kind::SmoothedTriangle: {
            double r = amplitude_, e = eps_, d = delta_;
            double a1 = e - d, a2 = e + d, a3 = 2.0 * e - 2.0 * d;
            double v = std::min(s, 2.0 * e);
            double acc = 0.0;
            double lo = std::min(v, a1);
            acc += r * lo * lo;
            if (v > a1) {
                double hi = std::min(v, a2);
                double t0 = a1 - e, t1 = hi - e;  // offsets from the peak
                acc += 2.0 * r * (e - 0.5 * d) * (hi - a1) - r / (3.0 * d) * (t1 * t1 * t1 - t0 * t0 * t0);
            }
            if (v > a2) {
                double hi = std::min(v, a3);
                acc += 2.0 * r * (2.0 * e * (hi - a2) - 0.5 * (hi * hi - a2 * a2));
            }
            if (v > a3) {
                double x = (v - a3) / (2.0 * d);
                acc += 8.0 * r * d * d * (x - x * x / 2.0 - x * x * x / 3.0 + x * x * x * x / 4.0);
            }
            return norm_ * acc;
        }
        case Kind::ExpForm:
            return amplitude_ * std::exp(0.5) * (1.0 - (1.0 + s) * std::exp(-s));
    }
    return 0.0;
}

double AlleeSpec::deriv_at_zero() const {
    switch (kind_) {
        case Kind::None:
            return 0.0;
        case Kind::PolynomialBump:
            return amplitude_;
        case Kind::SmoothedTriangle:
            return norm_ * 2.0 * amplitude_;
        case Kind::ExpForm:
            return amplitude_ * std::exp(0.5);
    }
    return 0.0;
}

double AlleeSpec::scan_upper() const {
    switch (kind_) {
        case Kind::None:
            return 1.0;
        case Kind::PolynomialBump:
        case Kind::SmoothedTriangle:
            return 2.0 * eps_;
        case Kind::ExpForm:
            return 2.0 * eps_;  // = 1; covers the sign change at 1/2
    }
    return 1.0;
}

double AlleeSpec::lipschitz_bound() const {
    if (kind_ == Kind::None) return 0.0;
    double upper = scan_upper();
    double worst = 0.0;
    for (int k = 1; k <= kScanPoints; ++k) {
        double s = upper * static_cast<double>(k) / kScanPoints;
        worst = std::max(worst, std::abs(eval_deriv(s)));
    }
    return std::max(worst, std::abs(deriv_at_zero()));
}

// ---------------------------------------------------------------------------
// InitialDataSpec

InitialDataSpec InitialDataSpec::rectangle(double height, double length) {
    require(height > 0.0 && length > 0.0, "initial: rectangle needs positive H and L");
    InitialDataSpec s;
    s.kind_ = Kind::Rectangle;
    s.height_ = height;
    s.length_ = length;
    return s;
}

InitialDataSpec InitialDataSpec::scaled_plateau(double amplitude, double sigma) {
    require(amplitude > 0.0 && sigma > 0.0, "initial: plateau needs positive amplitude and sigma");
    InitialDataSpec s;
    s.kind_ = Kind::ScaledPlateau;
    s.amplitude_ = amplitude;
    s.sigma_ = sigma;
    return s;
}

InitialDataSpec InitialDataSpec::tabulated(std::vector<double> thetas, std::vector<double> values) {
    require(thetas.size() >= 2 && thetas.size() == values.size(),
            "initial: tabulated data needs matching arrays of length >= 2");
    for (size_t i = 0; i + 1 < thetas.size(); ++i)
        require(thetas[i] < thetas[i + 1], "initial: tabulated thetas must be strictly increasing");
    for (double v : values) require(std::isfinite(v), "initial: tabulated values must be finite");
    InitialDataSpec s;
    s.kind_ = Kind::Tabulated;
    s.tab_theta_ = std::move(thetas);
    s.tab_value_ = std::move(values);
    return s;
}

double plateau_phi(double x) {
    double a = std::abs(x);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    double s = a - 1.0;
    return 1.0 - s * s * (3.0 - 2.0 * s);
}

double InitialDataSpec::eval(double theta) const {
    switch (kind_) {
        case Kind::Rectangle: {
            double a = std::abs(theta), half = 0.5 * length_;
            if (a < half) return height_;
            if (a == half) return 0.5 * height_;  // trapezoid-exact jump value
            return 0.0;
        }
        case Kind::ScaledPlateau:
            return amplitude_ * plateau_phi(theta / sigma_);
        case Kind::Tabulated: {
            if (theta < tab_theta_.front() || theta > tab_theta_.back()) return 0.0;
            auto it = std::upper_bound(tab_theta_.begin(), tab_theta_.end(), theta);
            if (it == tab_theta_.end()) return tab_value_.back();
            size_t k = static_cast<size_t>(it - tab_theta_.begin());
            if (k == 0) return tab_value_.front();
            double w = (theta - tab_theta_[k - 1]) / (tab_theta_[k] - tab_theta_[k - 1]);
            return tab_value_[k - 1] + w * (tab_value_[k] - tab_value_[k - 1]);
        }
    }
    return 0.0;
}

double InitialDataSpec::sup() const {
    switch (kind_) {
        case Kind::Rectangle:
            return height_;
        case Kind::ScaledPlateau:
            return amplitude_;
        case Kind::Tabulated:
            return *std::max_element(tab_value_.begin(), tab_value_.end());
    }
    return 0.0;
}

double InitialDataSpec::support_radius() const {
    switch (kind_) {
        case Kind::Rectangle:
            return 0.5 * length_;
        case Kind::ScaledPlateau:
            return 2.0 * sigma_;
        case Kind::Tabulated:
            return std::max(std::abs(tab_theta_.front()), std::abs(tab_theta_.back()));
    }
    return 0.0;
}

bool InitialDataSpec::nonnegative() const {
    if (kind_ == Kind::Tabulated)
        return *std::min_element(tab_value_.begin(), tab_value_.end()) >= 0.0;
    return true;  // enforced at construction for the closed forms
}

// ---------------------------------------------------------------------------
// Operations

double eval_fitness(const FitnessSpec& spec, double theta) { return spec.eval(theta); }
double eval_allee(const AlleeSpec& spec, double s) { return spec.eval(s); }
double eval_allee_deriv(const AlleeSpec& spec, double s) { return spec.eval_deriv(s); }
double eval_initial(const InitialDataSpec& spec, double theta) { return spec.eval(theta); }

double allee_threshold(const ModelSpec& model) {
    if (model.allee.is_none())
        throw ValidationError("allee_threshold: model has no Allee term");
    double r_max = model.fitness.r_max();
    double upper = model.allee.scan_upper();
    for (int k = 1; k <= kScanPoints; ++k) {
        double s = upper * static_cast<double>(k) / kScanPoints;
        if (r_max * s - model.allee.eval(s) >= 0.0) {
            if (k == 1)
                throw ValidationError(
                    "allee_threshold: r_max*s - f(s) is not negative near 0 (f'(0) <= r_max?)");
            return upper * static_cast<double>(k - 1) / kScanPoints;
        }
    }
    return upper;
}

bool ValidationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.pass; });
}

std::string ValidationReport::summary() const {
    std::ostringstream out;
    for (const auto& c : checks)
        out << (c.pass ? "[pass] " : "[FAIL] ") << c.name << (c.detail.empty() ? "" : ": " + c.detail)
            << "\n";
    return out.str();
}

ValidationReport validate_model(const ModelSpec& model, const Grid* grid,
                                bool check_large_selection) {
    ValidationReport report;
    auto add = [&](std::string name, bool pass, std::string detail = "") {
        report.checks.push_back({std::move(name), pass, std::move(detail)});
    };

    double r_max = model.fitness.r_max();
    add("fitness r_max > 0", r_max > 0.0, "r_max = " + std::to_string(r_max));

    if (!model.allee.is_none()) {
        add("allee f(0) = 0", model.allee.eval(0.0) == 0.0);
        double fp0 = model.allee.deriv_at_zero();
        add("allee f'(0) > r_max", fp0 > r_max,
            "f'(0) = " + std::to_string(fp0) + ", r_max = " + std::to_string(r_max));

        bool bounded = true, nonneg = true;
        double upper = model.allee.scan_upper();
        for (int k = 0; k <= kScanPoints; ++k) {
            double s = upper * static_cast<double>(k) / kScanPoints;
            double f = model.allee.eval(s), fp = model.allee.eval_deriv(s);
            if (!std::isfinite(f) || !std::isfinite(fp)) bounded = false;
            if (f < 0.0) nonneg = false;
        }
        add("allee f, f' bounded on scan", bounded);
        add("allee f >= 0 on scan", nonneg);

        try {
            double eps_eff = allee_threshold(model);
            add("allee threshold exists", eps_eff > 0.0, "eps_eff = " + std::to_string(eps_eff));
        } catch (const ValidationError& err) {
            add("allee threshold exists", false, err.what());
        }
    }

    add("initial data nonnegative", model.initial.nonnegative());
    if (grid != nullptr) {
        double radius = model.initial.support_radius();
        bool inside = -radius > grid->theta_min() && radius < grid->theta_max();
        add("initial data supported inside grid", inside,
            "support radius = " + std::to_string(radius));
    }

    if (check_large_selection) {
        bool quad = model.fitness.kind() == FitnessSpec::Kind::Quadratic;
        add("large-selection: fitness quadratic", quad);
        if (quad) {
            double a2 = model.fitness.alpha() * model.fitness.alpha();
            bool chain = 1.0 <= r_max && r_max <= a2 && a2 <= 2.0 * r_max;
            add("large-selection: 1 <= r_max <= alpha^2 <= 2 r_max", chain,
                "alpha^2 = " + std::to_string(a2));
        }
    }
    return report;
}

}  // namespace traitlab
