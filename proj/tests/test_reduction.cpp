#include <catch2/catch_amalgamated.hpp>

#include "axired/catalog.hpp"
#include "axired/print.hpp"
#include "axired/reduction.hpp"

using namespace axired;

namespace {

bool same_expr(const ExprPtr& a, const ExprPtr& b) {
    return is_zero_literal(simplify(make_sub(a, b)));
}

double fd_partial(const ExprPtr& e, const Binding& at, const std::string& v, double h = 1e-5) {
    Binding lo = at, hi = at;
    lo[v] -= h;
    hi[v] += h;
    return (evaluate(e, hi) - evaluate(e, lo)) / (2 * h);
}

} // namespace

TEST_CASE("split_killing on Minkowski polar") {
    ReducedData rd = split_killing(minkowski().metric);
    auto r = sym("r"), th = sym("theta");
    CHECK(same_expr(rd.u, log_(r * sin_(th))));
    for (size_t a = 0; a < 3; ++a) CHECK(is_zero_literal(rd.A.at({a})));
    CHECK(same_expr(rd.g3.at(0, 0), num(-1)));
    CHECK(same_expr(rd.g3.at(1, 1), num(1)));
    CHECK(same_expr(rd.g3.at(2, 2), pow(r, 2)));
    CHECK(same_expr(rd.g3.at(0, 1), zero_expr()));
    CHECK_FALSE(rd.conformal);
    CHECK(rd.g3.chart().coords == std::vector<std::string>{"t", "r", "theta"});
    for (const auto& b : rd.g3.chart().sample(20))
        CHECK(evaluate(rd.e2u, b) > 0);
}

TEST_CASE("split_killing on Schwarzschild") {
    ReducedData rd = split_killing(schwarzschild(1.0).metric);
    auto r = sym("r"), th = sym("theta");
    ExprPtr f = parse("1 - 2*m/r");
    CHECK(same_expr(rd.u, log_(r * sin_(th))));
    CHECK(same_expr(rd.g3.at(0, 0), make_neg(f)));
    CHECK(same_expr(rd.g3.at(1, 1), pow(f, -1)));
    CHECK(same_expr(rd.g3.at(2, 2), pow(r, 2)));
    for (size_t a = 0; a < 3; ++a) CHECK(is_zero_literal(rd.A.at({a})));
}

TEST_CASE("split_killing on Kerr: components and reconstruction") {
    MetricSpec m4 = kerr(1.0, 0.5).metric;
    ReducedData rd = split_killing(m4);
    ExprPtr e2u_ref = parse(
        "((r^2+a^2)^2 - (r^2 - 2*M*r + a^2)*a^2*sin(theta)^2)*sin(theta)^2"
        "/(r^2 + a^2*cos(theta)^2)");
    ExprPtr at_ref = parse(
        "-2*M*r*a/((r^2+a^2)^2 - (r^2 - 2*M*r + a^2)*a^2*sin(theta)^2)");
    for (const auto& b : rd.g3.chart().sample(20)) {
        CHECK(evaluate(rd.e2u, b) == Catch::Approx(evaluate(e2u_ref, b)).epsilon(1e-12));
        CHECK(evaluate(rd.A.at({0}), b) == Catch::Approx(evaluate(at_ref, b)).epsilon(1e-12));
        CHECK(evaluate(rd.A.at({1}), b) == Catch::Approx(0).margin(1e-15));
        CHECK(evaluate(rd.A.at({2}), b) == Catch::Approx(0).margin(1e-15));
    }
    CHECK(reconstruction_residual(m4, rd, 20) < 1e-9);
}

TEST_CASE("split_killing errors") {
    SECTION("no phi coordinate") {
        Chart c;
        c.coords = {"t", "x", "y", "z"};
        c.box.assign(4, {0.1, 1.0, 0.0});
        MetricSpec g(c, Signature::Lorentzian, 0);
        CHECK_THROWS_AS(split_killing(g), NotAxisymmetricError);
    }
    SECTION("phi-dependent component") {
        MetricSpec m4 = minkowski().metric;
        m4.set(1, 1, num(1) + pow(sin_(sym("phi")), 2));
        CHECK_THROWS_AS(split_killing(m4), NotAxisymmetricError);
    }
    SECTION("degenerate Killing norm") {
        Chart c = minkowski().metric.chart();
        MetricSpec g(c, Signature::Lorentzian, 0);
        g.set(0, 0, num(-1));
        g.set(1, 1, num(1));
        g.set(2, 2, num(1));
        // g_{phi phi} left identically zero
        CHECK_THROWS_AS(split_killing(g), DegenerateKillingError);
    }
}

TEST_CASE("conformal_reduce") {
    SECTION("Minkowski") {
        ReducedData rc = conformal_reduce(split_killing(minkowski().metric));
        auto r = sym("r"), th = sym("theta");
        ExprPtr w = pow(r, 2) * pow(sin_(th), 2);
        CHECK(same_expr(rc.g3.at(0, 0), make_neg(w)));
        CHECK(same_expr(rc.g3.at(1, 1), w));
        CHECK(same_expr(rc.g3.at(2, 2), w * pow(r, 2)));
        CHECK(rc.conformal);
    }
    SECTION("u = 0 leaves the metric unchanged") {
        Chart c = minkowski().metric.chart();
        MetricSpec g(c, Signature::Lorentzian, 0);
        g.set(0, 0, num(-1));
        g.set(1, 1, num(1));
        g.set(2, 2, num(1));
        g.set(3, 3, num(1));  // e^{2u} = 1
        ReducedData rd = split_killing(g);
        CHECK(is_zero_literal(simplify(rd.u)));
        ReducedData rc = conformal_reduce(rd);
        for (size_t i = 0; i < 3; ++i)
            for (size_t j = 0; j < 3; ++j) CHECK(same_expr(rc.g3.at(i, j), rd.g3.at(i, j)));
    }
    SECTION("Schwarzschild") {
        ReducedData rc = conformal_reduce(split_killing(schwarzschild(2.0).metric));
        ExprPtr w = parse("r^2*sin(theta)^2");
        CHECK(same_expr(rc.g3.at(0, 0), simplify(make_neg(w * parse("1 - 2*m/r")))));
        CHECK(same_expr(rc.g3.at(1, 1), simplify(w * pow(parse("1 - 2*m/r"), -1))));
        CHECK(same_expr(rc.g3.at(2, 2), simplify(w * parse("r^2"))));
    }
    SECTION("double application throws") {
        ReducedData rc = conformal_reduce(split_killing(minkowski().metric));
        CHECK_THROWS_AS(conformal_reduce(rc), DoubleConformalError);
    }
}

TEST_CASE("faraday") {
    SECTION("A = 0 gives F = 0") {
        ReducedData rd = split_killing(schwarzschild(1.0).metric);
        TensorField f = faraday(rd);
        for (const auto& c : f.components()) CHECK(is_zero_literal(c));
    }
    SECTION("Kerr F vs finite-difference oracle") {
        ReducedData rd = split_killing(kerr(1.0, 0.5).metric);
        TensorField f = faraday(rd);
        // F_{rt} = d_r A_t, F_{theta t} = d_theta A_t (A_r = A_theta = 0)
        for (const auto& b : rd.g3.chart().sample(10)) {
            CHECK(evaluate(f.at({1, 0}), b) ==
                  Catch::Approx(fd_partial(rd.A.at({0}), b, "r")).epsilon(1e-6));
            CHECK(evaluate(f.at({2, 0}), b) ==
                  Catch::Approx(fd_partial(rd.A.at({0}), b, "theta")).epsilon(1e-6));
            // antisymmetry at sample points
            for (size_t i = 0; i < 3; ++i)
                for (size_t j = 0; j < 3; ++j)
                    CHECK(evaluate(f.at({i, j}), b) ==
                          Catch::Approx(-evaluate(f.at({j, i}), b)).margin(1e-14));
        }
    }
    SECTION("exact A = d chi gives F = 0") {
        ReducedData rd = split_killing(kerr(1.0, 0.5).metric);
        ExprPtr chi = parse("r^2*sin(theta) + exp(-r)*cos(theta)");
        const auto& c = rd.g3.chart();
        for (size_t a = 0; a < 3; ++a) rd.A.set({a}, differentiate(chi, c.coords[a]));
        TensorField f = faraday(rd);
        for (const auto& comp : f.components()) CHECK(is_zero_literal(comp));
    }
}

TEST_CASE("twist one-form closure") {
    ReducedData rd = split_killing(kerr(1.0, 0.5).metric);
    TensorField f = faraday(rd);
    SECTION("F = 0 gives G = 0") {
        ReducedData rs = split_killing(schwarzschild(1.0).metric);
        TensorField g0 = twist_one_form(rs, faraday(rs));
        for (const auto& c : g0.components()) CHECK(is_zero_literal(c));
    }
    SECTION("Kerr closes with the e^{3u} weight") {
        CHECK(closure_residual(twist_one_form(rd, f), 20) < 1e-7);
    }
    SECTION("negative control: unit weight fails by orders of magnitude") {
        double good = closure_residual(twist_one_form(rd, f, 3), 20);
        double bad = closure_residual(twist_one_form(rd, f, 0), 20);
        CHECK(bad > 1e3 * std::max(good, 1e-12));
    }
}

TEST_CASE("twist potential line integral") {
    ReducedData rd = split_killing(kerr(1.0, 0.5).metric);
    TensorField g1 = twist_one_form(rd, faraday(rd));
    const Chart& c = rd.g3.chart();
    Binding base = c.params, target = c.params, corner1 = c.params, mid = c.params;
    base["t"] = 0.5; base["r"] = 3.5; base["theta"] = 0.8;
    target["t"] = 0.5; target["r"] = 8.0; target["theta"] = 2.2;
    corner1["t"] = 0.5; corner1["r"] = 8.0; corner1["theta"] = 0.8;
    mid["t"] = 0.5; mid["r"] = 5.0; mid["theta"] = 1.9;
    SECTION("path independence") {
        double v1 = twist_potential(g1, base, target, {corner1});
        double v2 = twist_potential(g1, base, target, {mid});
        double v3 = twist_potential(g1, base, target);
        CHECK(std::abs(v1 - v2) < 1e-6 * std::max(1.0, std::abs(v1)));
        CHECK(std::abs(v1 - v3) < 1e-6 * std::max(1.0, std::abs(v1)));
    }
    SECTION("reversal negates") {
        double fwd = twist_potential(g1, base, target);
        double bwd = twist_potential(g1, target, base);
        CHECK(fwd == Catch::Approx(-bwd).epsilon(1e-12));
    }
    SECTION("gradient consistency with G") {
        double h = 1e-5;
        Binding tp = target, tm = target;
        tp["r"] += h;
        tm["r"] -= h;
        double fd = (twist_potential(g1, base, tp) - twist_potential(g1, base, tm)) / (2 * h);
        CHECK(fd == Catch::Approx(evaluate(g1.at({1}), target)).epsilon(1e-6));
    }
    SECTION("zero form integrates to zero") {
        TensorField z("_a", 3, c);
        CHECK(twist_potential(z, base, target) == 0.0);
    }
    SECTION("path outside the chart throws") {
        Binding out = target;
        out["r"] = 100.0;
        CHECK_THROWS_AS(twist_potential(g1, base, out), PathError);
    }
}

TEST_CASE("reduced vacuum residuals vanish for the catalog") {
    SECTION("Minkowski") {
        ReducedResiduals rr = reduced_vacuum_residuals(minkowski().metric);
        CHECK(rr.max_munu < 1e-12);
        CHECK(rr.max_mu3 < 1e-12);
        CHECK(rr.max_33 < 1e-12);
    }
    SECTION("Schwarzschild") {
        ReducedResiduals rr = reduced_vacuum_residuals(schwarzschild(1.0).metric);
        CHECK(rr.max_munu < 1e-7);
        CHECK(rr.max_mu3 < 1e-7);
        CHECK(rr.max_33 < 1e-7);
    }
    SECTION("Kerr") {
        ReducedResiduals rr = reduced_vacuum_residuals(kerr(1.0, 0.5).metric);
        CHECK(rr.max_munu < 1e-7);
        CHECK(rr.max_mu3 < 1e-7);
        CHECK(rr.max_33 < 1e-7);
    }
}

TEST_CASE("Einstein-wave-map residuals") {
    SECTION("Minkowski, v = 0") {
        ReducedData rc = conformal_reduce(split_killing(minkowski().metric));
        TensorField z("_a", 3, rc.g3.chart());
        EwmResiduals ew = ewm_residuals(rc, z);
        CHECK(ew.max_u < 1e-12);
        CHECK(ew.max_v < 1e-12);
    }
    SECTION("Schwarzschild, v = 0") {
        ReducedData rc = conformal_reduce(split_killing(schwarzschild(1.0).metric));
        TensorField z("_a", 3, rc.g3.chart());
        EwmResiduals ew = ewm_residuals(rc, z);
        CHECK(ew.max_u < 1e-7);
        CHECK(ew.max_v < 1e-7);
    }
    SECTION("Kerr with dv := G") {
        ReducedData rd = split_killing(kerr(1.0, 0.5).metric);
        TensorField g1 = twist_one_form(rd, faraday(rd));
        EwmResiduals ew = ewm_residuals(conformal_reduce(rd), g1);
        CHECK(ew.max_u < 1e-6);
        CHECK(ew.max_v < 1e-6);
    }
    SECTION("requires the conformal metric") {
        ReducedData rd = split_killing(minkowski().metric);
        TensorField z("_a", 3, rd.g3.chart());
        CHECK_THROWS_AS(ewm_residuals(rd, z), DoubleConformalError);
    }
}
