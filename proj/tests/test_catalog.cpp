#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "axired/catalog.hpp"

using namespace axired;

TEST_CASE("catalog entries validate on their sample boxes") {
    for (auto entry : {minkowski(), schwarzschild(1.0), kerr(1.0, 0.5)}) {
        CHECK_NOTHROW(entry.metric.validate());
        CHECK(entry.vacuum);
        CHECK(entry.killing_coords == std::vector<std::string>{"t", "phi"});
    }
    CHECK(minkowski().hypersurface_orthogonal);
    CHECK(schwarzschild(1.0).hypersurface_orthogonal);
    CHECK_FALSE(kerr(1.0, 0.5).hypersurface_orthogonal);
}

TEST_CASE("printed component values") {
    SECTION("schwarzschild g_tt at r=4") {
        Binding b{{"r", 4.0}, {"theta", 1.0}, {"m", 1.0}};
        CHECK(evaluate(schwarzschild(1.0).metric.at(0, 0), b) == Catch::Approx(-0.5));
    }
    SECTION("kerr g_tphi at r=4, theta=pi/2") {
        Binding b{{"r", 4.0}, {"theta", M_PI / 2}, {"M", 1.0}, {"a", 0.5}};
        CHECK(evaluate(kerr(1.0, 0.5).metric.at(0, 3), b) == Catch::Approx(-0.25).epsilon(1e-12));
    }
}

TEST_CASE("kerr(M, 0) equals schwarzschild(M) componentwise") {
    MetricSpec k = kerr(2.0, 0.0).metric;
    MetricSpec s = schwarzschild(2.0).metric;
    for (const auto& b : k.chart().sample(20)) {
        Binding bs = b;
        bs["m"] = 2.0;
        for (size_t i = 0; i < 4; ++i)
            for (size_t j = 0; j < 4; ++j)
                CHECK(evaluate(k.at(i, j), b) ==
                      Catch::Approx(evaluate(s.at(i, j), bs)).margin(1e-12));
    }
}

TEST_CASE("schwarzschild tends to minkowski as m -> 0") {
    MetricSpec s = schwarzschild(1.0).metric;
    MetricSpec flat = minkowski().metric;
    for (const auto& b0 : flat.chart().sample(10)) {
        Binding b = b0;
        b["m"] = 1e-12;
        for (size_t i = 0; i < 4; ++i)
            for (size_t j = 0; j < 4; ++j)
                CHECK(evaluate(s.at(i, j), b) ==
                      Catch::Approx(evaluate(flat.at(i, j), b0)).margin(1e-9));
    }
}

TEST_CASE("parameter range errors") {
    CHECK_THROWS_AS(schwarzschild(0.0), ParameterRangeError);
    CHECK_THROWS_AS(schwarzschild(-1.0), ParameterRangeError);
    CHECK_THROWS_AS(kerr(0.0, 0.0), ParameterRangeError);
    CHECK_THROWS_AS(kerr(1.0, 1.0), ParameterRangeError);     // extremal
    CHECK_THROWS_AS(kerr(1.0, 1.5), ParameterRangeError);     // superextremal
    CHECK_THROWS_AS(kerr(1.0, -0.1), ParameterRangeError);
    CHECK_THROWS_AS(schwarzschild_spatial_cartesian(-1.0), ParameterRangeError);
    CHECK_THROWS_AS(
        equivariant_profile(ProfileKind::GaussianBump, -0.1, 1.0, TargetKind::Sphere),
        ParameterRangeError);
    CHECK_THROWS_AS(
        equivariant_profile(ProfileKind::GaussianBump, 0.1, 0.0, TargetKind::Sphere),
        ParameterRangeError);
}

TEST_CASE("schwarzschild spatial slice in Cartesian components") {
    SECTION("m = 0 is the identity metric") {
        MetricSpec q = schwarzschild_spatial_cartesian(0.0);
        for (const auto& b : q.chart().sample(10))
            for (size_t i = 0; i < 3; ++i)
                for (size_t j = 0; j < 3; ++j)
                    CHECK(evaluate(q.at(i, j), b) ==
                          Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-14));
    }
    SECTION("trace at r=10, m=1 is 3.25") {
        MetricSpec q = schwarzschild_spatial_cartesian(1.0);
        Binding b{{"x", 6.0}, {"y", 0.0}, {"z", 8.0}, {"m", 1.0}};
        double tr = 0;
        for (size_t i = 0; i < 3; ++i) tr += evaluate(q.at(i, i), b);
        CHECK(tr == Catch::Approx(3.25).epsilon(1e-12));
    }
}

TEST_CASE("equivariant profiles") {
    SECTION("amplitude zero is the zero datum") {
        EquivariantData d =
            equivariant_profile(ProfileKind::GaussianBump, 0.0, 1.0, TargetKind::Sphere);
        CHECK(is_zero_literal(d.u_expr));
        CHECK(is_zero_literal(d.p_expr));
        CHECK(d.u(0.5) == 0.0);
    }
    SECTION("gaussian bump vanishes at the origin and decays") {
        EquivariantData d =
            equivariant_profile(ProfileKind::GaussianBump, 0.3, 2.0, TargetKind::Sphere);
        CHECK(d.u(0.0) == Catch::Approx(0.0).margin(1e-15));
        CHECK(std::abs(d.u(2.0)) > 0.05);
        CHECK(std::abs(d.u(d.r_max * 0.999)) < 1e-30);
        CHECK(d.u(d.r_max + 1) == 0.0);
        CHECK(d.f(0.3) == Catch::Approx(std::sin(0.3)).epsilon(1e-14));
    }
    SECTION("compact bump is supported in [0, width]") {
        EquivariantData d =
            equivariant_profile(ProfileKind::CompactBump, 0.5, 3.0, TargetKind::Hyperbolic);
        CHECK(d.r_max == 3.0);
        CHECK(d.u(3.0) == 0.0);
        CHECK(d.u(4.0) == 0.0);
        CHECK(std::abs(d.u(2.999)) < 1e-100);  // smooth vanishing at the edge
        CHECK(std::abs(d.u(1.5)) > 0.01);
        CHECK(d.f(0.4) == Catch::Approx(std::sinh(0.4)).epsilon(1e-14));
    }
    SECTION("axis-integrability of f(u)^2 / r^2") {
        EquivariantData d =
            equivariant_profile(ProfileKind::GaussianBump, 0.2, 1.0, TargetKind::Sphere);
        // density stays bounded toward the axis since u ~ r^2
        CHECK(std::abs(d.density(1e-4, 1.0)) < 1.0);
    }
}

TEST_CASE("metric file format round trip is byte-identical") {
    for (const MetricSpec& m :
         {minkowski().metric, schwarzschild(1.0).metric, kerr(1.0, 0.5).metric,
          schwarzschild_spatial_cartesian(1.0)}) {
        std::string first = save_metric(m);
        std::istringstream in(first);
        MetricSpec loaded = load_metric(in);
        CHECK(save_metric(loaded) == first);
        // and the loaded metric evaluates identically
        for (const auto& b : m.chart().sample(5))
            for (size_t i = 0; i < m.dim(); ++i)
                for (size_t j = 0; j < m.dim(); ++j)
                    CHECK(evaluate(loaded.at(i, j), b) ==
                          Catch::Approx(evaluate(m.at(i, j), b)).margin(1e-14));
    }
}

TEST_CASE("metric file format errors carry line numbers") {
    auto load_str = [](const std::string& s) {
        std::istringstream in(s);
        return load_metric(in);
    };
    SECTION("missing header") {
        CHECK_THROWS_AS(load_str("0 0 := 1\n"), MetricFormatError);
    }
    SECTION("bad component line") {
        CHECK_THROWS_WITH(
            load_str("dim 2 coords x y signature riemannian\n0 0 = 1\n"),
            Catch::Matchers::ContainsSubstring("line 2"));
    }
    SECTION("unknown box coordinate") {
        CHECK_THROWS_WITH(
            load_str("dim 2 coords x y signature riemannian\nbox z 0 1\n"),
            Catch::Matchers::ContainsSubstring("line 2"));
    }
    SECTION("lorentzian without time index") {
        CHECK_THROWS_AS(load_str("dim 2 coords t x signature lorentzian\n"), MetricFormatError);
    }
    SECTION("component index out of range") {
        CHECK_THROWS_AS(load_str("dim 2 coords x y signature riemannian\n0 5 := 1\n"),
                        MetricFormatError);
    }
    SECTION("bad expression propagates parse error") {
        CHECK_THROWS_AS(load_str("dim 2 coords x y signature riemannian\n0 0 := 1 +\n"),
                        ParseError);
    }
    SECTION("missing file") {
        CHECK_THROWS_AS(load_metric_file("/nonexistent/metric.txt"), MetricFormatError);
    }
    SECTION("comments and blank lines are ignored") {
        MetricSpec m = load_str(
            "# a comment\n\ndim 2 coords x y signature riemannian  # trailing\n"
            "box x 1 2\nbox y 1 2\n0 0 := x^2\n1 1 := 1\n");
        CHECK(m.dim() == 2);
        CHECK(evaluate(m.at(0, 0), {{"x", 3.0}, {"y", 1.0}}) == Catch::Approx(9.0));
    }
}
