#include <doctest.h>

#include <cmath>
#include <vector>

#include "traitlab/grid.hpp"
#include "traitlab/model.hpp"

using namespace traitlab;

TEST_CASE("fitness evaluation") {
    // quadratic landscape with alpha^2 = 0.2 peaks at 2
    auto strong = FitnessSpec::quadratic(2.0, std::sqrt(0.2));
    CHECK(strong.eval(0.0) == doctest::Approx(2.0).epsilon(1e-12));

    auto flat = FitnessSpec::constant(2.0);
    CHECK(flat.eval(17.3) == 2.0);

    auto weak = FitnessSpec::quadratic(2.0, std::sqrt(0.01));
    CHECK(weak.eval(10.0) == doctest::Approx(1.0).epsilon(1e-12));

    auto dip = FitnessSpec::gaussian_dip(2.0, 2.0, 0.08);
    CHECK(dip.r_max() == doctest::Approx(2.0));
    CHECK(dip.eval(0.0) == doctest::Approx(2.0));
    CHECK(dip.infimum() == doctest::Approx(-2.0));
    CHECK(dip.eval(100.0) == doctest::Approx(-2.0).epsilon(1e-9));

    auto tab = FitnessSpec::tabulated({-1.0, 0.0, 1.0}, {0.5, 2.0, 0.5});
    CHECK(tab.eval(0.5) == doctest::Approx(1.25));
    CHECK(tab.eval(5.0) == 0.5);    // constant extrapolation
    CHECK(tab.eval(-5.0) == 0.5);
    CHECK(tab.r_max() == 2.0);

    CHECK_THROWS_AS(FitnessSpec::constant(-1.0), ValidationError);
    CHECK_THROWS_AS(FitnessSpec::gaussian_dip(2.0, 0.5, 0.08), ValidationError);
    CHECK_THROWS_AS(FitnessSpec::tabulated({0.0, 0.0}, {1.0, 1.0}), ValidationError);
}

TEST_CASE("allee bump evaluation") {
    auto bump = AlleeSpec::polynomial_bump(15.0, 0.1);
    CHECK(bump.eval(0.0) == 0.0);
    CHECK(bump.eval(0.25) == 0.0);  // above 2*eps the bump vanishes
    // 15*0.1*(1-0.5)^2
    CHECK(bump.eval(0.1) == doctest::Approx(0.375).epsilon(1e-12));
    CHECK_THROWS_AS(bump.eval(-0.1), std::domain_error);
    CHECK_THROWS_AS(bump.eval_deriv(-0.1), std::domain_error);

    // C1 junction at 2*eps, exact
    CHECK(bump.eval(0.2) == 0.0);
    CHECK(bump.eval_deriv(0.2) == 0.0);
    CHECK(bump.deriv_at_zero() == 15.0);

    auto expf = AlleeSpec::exp_form(2.0);
    CHECK(expf.eval(0.0) == 0.0);
    CHECK(expf.eval(0.5) == doctest::Approx(2.0 * 0.5).epsilon(1e-12));  // e^{1/2-s}=1 at s=1/2
    CHECK(expf.deriv_at_zero() == doctest::Approx(2.0 * std::exp(0.5)));
}

TEST_CASE("smoothed triangle shape and integral") {
    const double r = 2.0, eps = 0.1;
    auto tri = AlleeSpec::smoothed_triangle(r, eps);

    CHECK(tri.eval(0.0) == 0.0);
    CHECK(tri.eval(2.0 * eps) == 0.0);
    CHECK(tri.eval_deriv(2.0 * eps) == 0.0);
    CHECK(tri.eval(0.3) == 0.0);

    // C1 across the piece joints
    for (double s : {eps - eps / 10.0, eps + eps / 10.0, 2.0 * eps - 2.0 * eps / 10.0}) {
        double below = tri.eval_deriv(s - 1e-9), above = tri.eval_deriv(s + 1e-9);
        CHECK(below == doctest::Approx(above).epsilon(1e-5));
        double vb = tri.eval(s - 1e-9), va = tri.eval(s + 1e-9);
        CHECK(vb == doctest::Approx(va).epsilon(1e-6));
    }

    // independent fine-grid Simpson oracle for the bump integral
    const int n = 200000;
    double acc = 0.0, h = 2.0 * eps / n;
    for (int i = 0; i < n; ++i) {
        double a = i * h, b = a + h;
        acc += h / 6.0 * (tri.eval(a) + 4.0 * tri.eval(0.5 * (a + b)) + tri.eval(b));
    }
    double exact_triangle = 2.0 * r * eps * eps;
    CHECK(acc == doctest::Approx(exact_triangle).epsilon(1e-8));   // matches unsmoothed value
    CHECK(std::abs(acc - exact_triangle) / exact_triangle < 0.01);  // and well within 1%
    CHECK(tri.integral(2.0 * eps) == doctest::Approx(exact_triangle).epsilon(1e-12));
    CHECK(tri.integral(1.0) == doctest::Approx(exact_triangle).epsilon(1e-12));

    // antiderivative consistency with the pointwise values
    for (double s : {0.03, 0.095, 0.11, 0.17, 0.185, 0.199}) {
        double fd = (tri.integral(s + 1e-7) - tri.integral(s - 1e-7)) / 2e-7;
        CHECK(fd == doctest::Approx(tri.eval(s)).epsilon(1e-5));
    }

    CHECK_THROWS_AS(AlleeSpec::smoothed_triangle(2.0, 0.1, 0.05), ValidationError);
}

TEST_CASE("allee lipschitz property on scan grid") {
    std::vector<AlleeSpec> specs = {AlleeSpec::polynomial_bump(15.0, 0.1),
                                    AlleeSpec::smoothed_triangle(2.0, 0.1),
                                    AlleeSpec::exp_form(2.0)};
    for (const auto& spec : specs) {
        double c_lip = spec.lipschitz_bound();
        double upper = spec.scan_upper();
        const int n = 10000;
        double prev_s = upper / n, prev_f = spec.eval(prev_s);
        for (int k = 2; k <= n; ++k) {
            double s = upper * k / n, f = spec.eval(s);
            CHECK(f >= 0.0);
            CHECK(std::abs(f - prev_f) <= c_lip * (s - prev_s) * (1.0 + 1e-9) + 1e-15);
            prev_s = s;
            prev_f = f;
        }
    }
    // analytic sups for cross-checking the scan
    CHECK(AlleeSpec::polynomial_bump(15.0, 0.1).lipschitz_bound() == doctest::Approx(15.0));
    CHECK(AlleeSpec::exp_form(2.0).lipschitz_bound() ==
          doctest::Approx(2.0 * std::exp(0.5)).epsilon(1e-3));
}

TEST_CASE("allee threshold") {
    ModelSpec bump{FitnessSpec::constant(2.0), AlleeSpec::polynomial_bump(15.0, 0.1),
                    InitialDataSpec::rectangle(1.0, 4.0)};
    // analytic root: 2 = 15 (1 - 5 s)^2  =>  s = (1 - sqrt(2/15))/5
    double analytic = (1.0 - std::sqrt(2.0 / 15.0)) / 5.0;
    double eps_eff = allee_threshold(bump);
    CHECK(eps_eff == doctest::Approx(analytic).epsilon(3e-4));
    CHECK(eps_eff == doctest::Approx(0.127).epsilon(1e-2));
    CHECK(eps_eff <= analytic);  // scan reports the last point strictly inside

    ModelSpec expm{FitnessSpec::constant(2.0), AlleeSpec::exp_form(2.0),
                   InitialDataSpec::rectangle(1.0, 4.0)};
    double exp_eff = allee_threshold(expm);
    CHECK(exp_eff == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(exp_eff < 0.5);

    ModelSpec none{FitnessSpec::constant(2.0), AlleeSpec::none(),
                   InitialDataSpec::rectangle(1.0, 4.0)};
    CHECK_THROWS_AS(allee_threshold(none), ValidationError);

    // f'(0) = 1 < r_max: no threshold exists
    ModelSpec weak{FitnessSpec::constant(2.0), AlleeSpec::polynomial_bump(1.0, 0.1),
                   InitialDataSpec::rectangle(1.0, 4.0)};
    CHECK_THROWS_AS(allee_threshold(weak), ValidationError);
}

TEST_CASE("initial data evaluation") {
    auto rect = InitialDataSpec::rectangle(1.0, 4.0);
    CHECK(rect.eval(0.0) == 1.0);
    CHECK(rect.eval(3.0) == 0.0);
    CHECK(rect.eval(2.0) == 0.5);   // jump midpoint keeps trapezoid mass exact
    CHECK(rect.eval(-2.0) == 0.5);
    CHECK(rect.sup() == 1.0);
    CHECK(rect.support_radius() == 2.0);

    auto plateau = InitialDataSpec::scaled_plateau(3.0, 2.0);
    CHECK(plateau.eval(1.0) == 3.0);
    CHECK(plateau.eval(-1.5) == 3.0);
    CHECK(plateau.eval(4.0) == 0.0);
    CHECK(plateau.eval(3.0) == doctest::Approx(1.5));  // midpoint of the cubic ramp
    CHECK(plateau.support_radius() == 4.0);

    // plateau phi is C1 at the joins
    CHECK(plateau_phi(1.0) == 1.0);
    CHECK(plateau_phi(2.0) == 0.0);
    double d_in = (plateau_phi(1.0 + 1e-7) - plateau_phi(1.0)) / 1e-7;
    double d_out = (plateau_phi(2.0) - plateau_phi(2.0 - 1e-7)) / 1e-7;
    CHECK(std::abs(d_in) < 1e-5);
    CHECK(std::abs(d_out) < 1e-5);
}

TEST_CASE("rectangle trapezoid mass is exact when L/2 is on-node") {
    // h = 0.25 keeps all nodes and the jump locations binary-exact
    Grid grid(-40.0, 40.0, 321);
    auto rect = InitialDataSpec::rectangle(1.0, 4.0);
    Field u0 = sample_initial(rect, grid);
    CHECK(total_mass(u0) == 4.0);

    Grid fine(-40.0, 40.0, 641);  // h = 0.125
    CHECK(total_mass(sample_initial(rect, fine)) == 4.0);

    auto tall = InitialDataSpec::rectangle(0.75, 8.0);
    CHECK(total_mass(sample_initial(tall, grid)) == 6.0);
}

TEST_CASE("validate_model") {
    Grid grid(-40.0, 40.0, 801);

    ModelSpec bump{FitnessSpec::constant(2.0), AlleeSpec::polynomial_bump(15.0, 0.1),
                    InitialDataSpec::rectangle(1.0, 4.0)};
    CHECK(validate_model(bump, &grid).all_pass());

    ModelSpec weak{FitnessSpec::constant(2.0), AlleeSpec::polynomial_bump(1.0, 0.1),
                   InitialDataSpec::rectangle(1.0, 4.0)};
    auto report = validate_model(weak, &grid);
    CHECK_FALSE(report.all_pass());
    bool pairing_failed = false;
    for (const auto& c : report.checks)
        if (c.name == "allee f'(0) > r_max" && !c.pass) pairing_failed = true;
    CHECK(pairing_failed);

    // support sticking outside the grid
    ModelSpec wide{FitnessSpec::constant(2.0), AlleeSpec::polynomial_bump(15.0, 0.1),
                   InitialDataSpec::rectangle(1.0, 90.0)};
    CHECK_FALSE(validate_model(wide, &grid).all_pass());

    // large-selection chain: alpha^2 = 4 = 2 r_max sits on the boundary and passes
    ModelSpec boundary{FitnessSpec::quadratic(2.0, 2.0), AlleeSpec::exp_form(2.0),
                       InitialDataSpec::scaled_plateau(3.0, 2.0)};
    CHECK(validate_model(boundary, &grid, true).all_pass());

    ModelSpec outside{FitnessSpec::quadratic(2.0, std::sqrt(4.1)), AlleeSpec::exp_form(2.0),
                      InitialDataSpec::scaled_plateau(3.0, 2.0)};
    CHECK_FALSE(validate_model(outside, &grid, true).all_pass());
}
