#include <catch2/catch_amalgamated.hpp>

#include "axired/catalog.hpp"
#include "axired/energetics.hpp"
#include "axired/reduction.hpp"

using namespace axired;

namespace {

bool same_expr(const ExprPtr& a, const ExprPtr& b) {
    return is_zero_literal(simplify(make_sub(a, b)));
}

MetricSpec reduced_conformal(const MetricSpec& m4) {
    return conformal_reduce(split_killing(m4)).g3;
}

ExprPtr log_rsin() { return log_(sym("r") * sin_(sym("theta"))); }

} // namespace

TEST_CASE("quadrature basics") {
    CHECK(integrate_1d([](double x) { return std::sin(x); }, 0, M_PI) ==
          Catch::Approx(2.0).epsilon(1e-10));
    CHECK(integrate_2d([](double x, double y) { return x * y; }, 0, 1, 0, 2) ==
          Catch::Approx(1.0).epsilon(1e-9));
    SECTION("composite Simpson converges at order >= 2") {
        auto f = [](double x) { return std::exp(x) * std::cos(3 * x); };
        double exact = integrate_1d(f, 0, 2, 1e-12);
        double e8 = std::abs(simpson_fixed(f, 0, 2, 8) - exact);
        double e16 = std::abs(simpson_fixed(f, 0, 2, 16) - exact);
        double e32 = std::abs(simpson_fixed(f, 0, 2, 32) - exact);
        CHECK(e8 / e16 > 4.0);   // order p gives ratio 2^p; p >= 2 means >= 4
        CHECK(e16 / e32 > 4.0);
    }
    SECTION("errors") {
        CHECK_THROWS_AS(simpson_fixed([](double) { return 0.0; }, 0, 1, 3), QuadratureError);
    }
}

TEST_CASE("stress-energy of the reduced Minkowski wave map") {
    MetricSpec g = reduced_conformal(minkowski().metric);
    TensorField t = stress_energy(g, std::vector<ScalarField>{{log_rsin(), one_expr()}});
    SECTION("T_tt matches the closed form 1/(2 r^2 sin^2 theta)") {
        CHECK(same_expr(t.at({0, 0}), parse("1/(2*r^2*sin(theta)^2)")));
    }
    SECTION("gradient square matches 1/(r^4 sin^4 theta)") {
        TensorField gi = inverse_metric(g);
        std::vector<ExprPtr> du(3), terms;
        for (size_t a = 0; a < 3; ++a) du[a] = differentiate(log_rsin(), g.coord(a));
        for (size_t a = 0; a < 3; ++a)
            for (size_t b = 0; b < 3; ++b) terms.push_back(gi.at({a, b}) * du[a] * du[b]);
        ExprPtr norm = simplify(make_sum(std::move(terms)));
        ExprPtr ref = parse("1/(r^4*sin(theta)^4)");
        for (const auto& bnd : g.chart().sample(20))
            CHECK(evaluate(norm, bnd) == Catch::Approx(evaluate(ref, bnd)).epsilon(1e-10));
    }
    SECTION("constant map gives T = 0") {
        TensorField t0 = stress_energy(g, std::vector<ScalarField>{{num(3), one_expr()}});
        for (const auto& c : t0.components()) CHECK(is_zero_literal(c));
    }
    SECTION("gradient overload agrees with the scalar overload") {
        TensorField grad("_a", 3, g.chart());
        for (size_t a = 0; a < 3; ++a) grad.set({a}, differentiate(log_rsin(), g.coord(a)));
        TensorField t2 = stress_energy(g, std::vector<GradientField>{{grad, one_expr()}});
        for (size_t i = 0; i < t.components().size(); ++i)
            CHECK(same_expr(t.components()[i], t2.components()[i]));
    }
}

TEST_CASE("T(N,N)") {
    SECTION("reduced Minkowski gives 1/(2 r^4 sin^4 theta)") {
        MetricSpec g = reduced_conformal(minkowski().metric);
        TensorField t = stress_energy(g, std::vector<ScalarField>{{log_rsin(), one_expr()}});
        ExprPtr tnn = t_nn(g, t, static_lapse(g));
        CHECK(same_expr(tnn, parse("1/(2*r^4*sin(theta)^4)")));
    }
    SECTION("reduced Schwarzschild matches (csc^2 theta - 2m/r)/(2 r^4 sin^2 theta)") {
        MetricSpec g = reduced_conformal(schwarzschild(1.0).metric);
        TensorField t = stress_energy(g, std::vector<ScalarField>{{log_rsin(), one_expr()}});
        ExprPtr tnn = t_nn(g, t, static_lapse(g));
        ExprPtr ref = parse("(1/(2*r^4*sin(theta)^2))*(1/sin(theta)^2 - 2*m/r)");
        for (const auto& b : g.chart().sample(20))
            CHECK(evaluate(tnn, b) == Catch::Approx(evaluate(ref, b)).epsilon(1e-10));
    }
    SECTION("zero stress tensor gives zero") {
        MetricSpec g = reduced_conformal(minkowski().metric);
        TensorField z("_ab", 3, g.chart());
        CHECK(is_zero_literal(t_nn(g, z, static_lapse(g))));
    }
}

TEST_CASE("cutoff energy for reduced Minkowski matches cot(eps) ln(R/r0)") {
    MetricSpec g = reduced_conformal(minkowski().metric);
    TensorField t = stress_energy(g, std::vector<ScalarField>{{log_rsin(), one_expr()}});
    SECTION("unit value at r0=1, R=e, eps=pi/4") {
        CHECK(energy_cutoff(g, t, 1.0, std::exp(1.0), M_PI / 4) ==
              Catch::Approx(1.0).epsilon(1e-6));
    }
    SECTION("closed form across eps and R/r0") {
        for (double eps : {M_PI / 6, M_PI / 4, M_PI / 3})
            for (double ratio : {10.0, 100.0}) {
                double e = energy_cutoff(g, t, 2.0, 2.0 * ratio, eps);
                double ref = std::cos(eps) / std::sin(eps) * std::log(ratio);
                CHECK(e == Catch::Approx(ref).epsilon(1e-6));
            }
    }
    SECTION("doubling R adds cot(eps) ln 2") {
        double eps = M_PI / 4;
        double e1 = energy_cutoff(g, t, 1.0, 50.0, eps);
        double e2 = energy_cutoff(g, t, 1.0, 100.0, eps);
        CHECK(e2 - e1 == Catch::Approx(std::cos(eps) / std::sin(eps) * std::log(2.0))
                             .epsilon(1e-6));
    }
    SECTION("zero field integrates to zero") {
        TensorField z("_ab", 3, g.chart());
        CHECK(energy_cutoff(g, z, 1.0, 10.0, M_PI / 4) == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("precondition violations") {
        CHECK_THROWS_AS(energy_cutoff(g, t, -1.0, 10.0, M_PI / 4), QuadratureError);
        CHECK_THROWS_AS(energy_cutoff(g, t, 1.0, 0.5, M_PI / 4), QuadratureError);
        CHECK_THROWS_AS(energy_cutoff(g, t, 1.0, 10.0, 2.0), QuadratureError);
    }
}

TEST_CASE("divergence fit") {
    SECTION("reduced Minkowski is log-divergent with unit slope at eps=pi/4") {
        std::vector<std::pair<double, double>> samples;
        for (double R : {10.0, 30.0, 100.0, 300.0, 1000.0})
            samples.emplace_back(R, std::log(R));  // closed form, cot(pi/4) = 1
        EnergyReport rep = divergence_fit(samples);
        CHECK(rep.verdict == EnergyVerdict::LogDivergent);
        CHECK(rep.c1 == Catch::Approx(1.0).margin(1e-3));
    }
    SECTION("reduced Schwarzschild cutoff energies are log-divergent") {
        MetricSpec g = reduced_conformal(schwarzschild(1.0).metric);
        TensorField t = stress_energy(g, std::vector<ScalarField>{{log_rsin(), one_expr()}});
        std::vector<std::pair<double, double>> samples;
        for (double R : {30.0, 100.0, 300.0, 1000.0, 3000.0})
            samples.emplace_back(R, energy_cutoff(g, t, 3.0, R, M_PI / 4, 1e-9));
        EnergyReport rep = divergence_fit(samples);
        CHECK(rep.verdict == EnergyVerdict::LogDivergent);
        CHECK(rep.c1 == Catch::Approx(1.0).margin(2e-2));  // -> cot(pi/4) as R grows
    }
    SECTION("Cauchy samples are convergent") {
        std::vector<std::pair<double, double>> samples;
        for (double R : {10.0, 100.0, 1000.0, 3000.0, 10000.0})
            samples.emplace_back(R, 1.0 - 1e-9 * R / 10000.0);
        CHECK(divergence_fit(samples).verdict == EnergyVerdict::Convergent);
    }
    SECTION("power growth is not misclassified as log") {
        std::vector<std::pair<double, double>> samples;
        for (double R : {10.0, 30.0, 100.0, 300.0, 1000.0}) samples.emplace_back(R, 0.01 * R);
        CHECK(divergence_fit(samples).verdict == EnergyVerdict::PowerDivergent);
    }
    SECTION("insufficient samples") {
        std::vector<std::pair<double, double>> four{{10, 1}, {100, 2}, {1000, 3}, {10000, 4}};
        CHECK_THROWS_AS(divergence_fit(four), InsufficientSamplesError);
        std::vector<std::pair<double, double>> narrow{
            {10, 1}, {20, 2}, {30, 3}, {40, 4}, {50, 5}};
        CHECK_THROWS_AS(divergence_fit(narrow), InsufficientSamplesError);
    }
}

TEST_CASE("ADM mass") {
    SECTION("flat metric gives zero") {
        CHECK(adm_mass(schwarzschild_spatial_cartesian(0.0)) == Catch::Approx(0.0).margin(1e-10));
    }
    SECTION("Schwarzschild slice recovers the parameter") {
        for (double m : {0.5, 1.0, 2.0})
            CHECK(adm_mass(schwarzschild_spatial_cartesian(m)) ==
                  Catch::Approx(m).epsilon(1e-3));
    }
    SECTION("non-decaying metric is rejected") {
        Chart c;
        c.coords = {"x", "y", "z"};
        c.box.assign(3, {1.0, 2.0, 0.0});
        MetricSpec q(c, Signature::Riemannian);
        q.set(0, 0, num(1) + parse("(x^2+y^2+z^2)^(1/2)") / num(1000));
        q.set(1, 1, num(1));
        q.set(2, 2, num(1));
        CHECK_THROWS_AS(adm_mass(q), NonDecayingMetricError);
    }
}

TEST_CASE("Hamiltonian constraint ODE") {
    SECTION("zero data") {
        EquivariantData d = equivariant_profile(ProfileKind::GaussianBump, 0.0, 1.0,
                                                TargetKind::Sphere);
        ConstraintSolution sol = solve_constraint(d);
        CHECK(sol.status == ConstraintStatus::Subcritical);
        CHECK(sol.chi_inf == 1.0);
        CHECK(sol.m_av == 0.0);
        CHECK(sol.angle_deficit == 0.0);
        CHECK(sol.energy == 0.0);
        MassReport rep = mass_identities(sol, d);
        CHECK(rep.energy_quadrature == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("a = 0.1 gaussian bump: energy identity and monotonicity") {
        EquivariantData d = equivariant_profile(ProfileKind::GaussianBump, 0.1, 1.0,
                                                TargetKind::Sphere);
        ConstraintSolution sol = solve_constraint(d);
        REQUIRE(sol.status == ConstraintStatus::Subcritical);
        for (size_t i = 1; i < sol.chi.size(); ++i) CHECK(sol.chi[i] <= sol.chi[i - 1]);
        MassReport rep = mass_identities(sol, d);
        CHECK(rep.energy_ode > 0);
        CHECK(rep.energy_rel_err < 1e-6);
        CHECK(rep.deficit_identity_exact);
        CHECK(rep.mass_in_range);
    }
    SECTION("compact bump with hyperbolic target") {
        EquivariantData d = equivariant_profile(ProfileKind::CompactBump, 0.2, 2.0,
                                                TargetKind::Hyperbolic);
        ConstraintSolution sol = solve_constraint(d);
        REQUIRE(sol.status == ConstraintStatus::Subcritical);
        MassReport rep = mass_identities(sol, d);
        CHECK(rep.energy_rel_err < 1e-6);
        CHECK(rep.deficit_identity_exact);
        CHECK(rep.mass_in_range);
    }
    SECTION("amplitude sweep reaches a supercritical profile with finite r*") {
        double amp = 0.5;
        bool found = false;
        double prev_mav = 0;
        for (int i = 0; i < 16 && !found; ++i, amp *= 2) {
            EquivariantData d = equivariant_profile(ProfileKind::GaussianBump, amp, 1.0,
                                                    TargetKind::Sphere);
            ConstraintSolution sol = solve_constraint(d);
            if (sol.status == ConstraintStatus::Supercritical) {
                found = true;
                CHECK(sol.r_star > 0);
                CHECK(sol.r_star <= d.r_max);
            } else {
                CHECK(sol.m_av >= prev_mav);  // mass grows monotonically with amplitude
                CHECK(sol.m_av < 2.0);
                prev_mav = sol.m_av;
            }
        }
        CHECK(found);
    }
    SECTION("supercritical rejected by mass_identities") {
        EquivariantData d = equivariant_profile(ProfileKind::GaussianBump, 100.0, 1.0,
                                                TargetKind::Sphere);
        ConstraintSolution sol = solve_constraint(d);
        REQUIRE(sol.status == ConstraintStatus::Supercritical);
        CHECK_THROWS_AS(mass_identities(sol, d), std::invalid_argument);
    }
}
