// axired: axisymmetric dimensional-reduction toolkit, command-line front end.
//
// Exit codes: 0 all checks passed; 2 a check failed its tolerance;
// 3 input error; 4 numerical non-convergence.

#include <cstdlib>
#include <fstream>
#include <future>
#include <thread>

#include <CLI11.hpp>

#include "axired/acceptance.hpp"
#include "axired/print.hpp"
#include "axired/report.hpp"

using namespace axired;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0, kExitCheckFailed = 2, kExitInputError = 3, kExitNumerical = 4;

struct MetricArgs {
    std::string name;       // minkowski | schwarzschild | kerr | schwarzschild-spatial
    std::string file;       // --metric-file alternative
    double m = 1.0, M = 1.0, a = 0.5;
};

size_t thread_cap() {
    size_t n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("AXIRED_THREADS")) {
        long v = std::atol(env);
        if (v >= 1) n = std::min<size_t>(n, static_cast<size_t>(v));
    }
    return n;
}

/// Evaluate f(items[i]) with at most thread_cap() concurrent tasks.
template <typename T, typename F>
std::vector<double> parallel_map(const std::vector<T>& items, F f) {
    size_t cap = std::min(thread_cap(), items.size() ? items.size() : size_t(1));
    std::vector<double> out(items.size());
    if (cap <= 1) {
        for (size_t i = 0; i < items.size(); ++i) out[i] = f(items[i]);
        return out;
    }
    std::atomic<size_t> next{0};
    std::vector<std::future<void>> tasks;
    for (size_t t = 0; t < cap; ++t)
        tasks.push_back(std::async(std::launch::async, [&] {
            for (size_t i = next++; i < items.size(); i = next++) out[i] = f(items[i]);
        }));
    for (auto& t : tasks) t.get();
    return out;
}

MetricSpec resolve_metric(const MetricArgs& args, json& inputs) {
    if (!args.file.empty()) {
        inputs["metric_file"] = args.file;
        return load_metric_file(args.file);
    }
    inputs["metric"] = args.name;
    if (args.name == "minkowski") return minkowski().metric;
    if (args.name == "schwarzschild") {
        inputs["m"] = args.m;
        return schwarzschild(args.m).metric;
    }
    if (args.name == "kerr") {
        inputs["M"] = args.M;
        inputs["a"] = args.a;
        return kerr(args.M, args.a).metric;
    }
    if (args.name == "schwarzschild-spatial") {
        inputs["m"] = args.m;
        return schwarzschild_spatial_cartesian(args.m);
    }
    throw CLI::ValidationError("--metric", "unknown metric '" + args.name + "'");
}

json box_json(const Chart& c) {
    json out = json::array();
    for (size_t i = 0; i < c.coords.size(); ++i)
        out.push_back({{"coord", c.coords[i]},
                       {"lo", c.box[i].inner_lo()},
                       {"hi", c.box[i].inner_hi()}});
    return out;
}

int cmd_reduce(const MetricArgs& margs, bool conformal, unsigned seed, const std::string& out) {
    json inputs;
    MetricSpec m4 = resolve_metric(margs, inputs);
    inputs["conformal"] = conformal;
    inputs["box"] = box_json(m4.chart());
    ReducedData rd = split_killing(m4);
    double rec = reconstruction_residual(m4, rd, 20, seed);
    if (conformal) rd = conformal_reduce(rd);
    json results;
    results["u"] = to_string(simplify(rd.u));
    json a_form = json::array();
    for (size_t i = 0; i < 3; ++i) a_form.push_back(to_string(rd.A.at({i})));
    results["A"] = a_form;
    json g3 = json::array();
    for (size_t i = 0; i < 3; ++i) {
        json row = json::array();
        for (size_t j = 0; j < 3; ++j) row.push_back(to_string(rd.g3.at(i, j)));
        g3.push_back(row);
    }
    results["g3"] = g3;
    results["conformal"] = rd.conformal;
    results["reconstruction_residual"] = {{"value", rec}, {"tol", 1e-9}, {"pass", rec < 1e-9}};
    emit_report(make_report("reduce", inputs, results, seed), out);
    return rec < 1e-9 ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const MetricArgs& margs, const std::string& check, double tol, unsigned seed,
               const std::string& out) {
    json inputs;
    MetricSpec m4 = resolve_metric(margs, inputs);
    inputs["check"] = check;
    inputs["box"] = box_json(m4.chart());
    json results = json::array();
    bool pass = true;
    auto add = [&](const std::string& name, double value, double t) {
        bool ok = value < t;
        pass = pass && ok;
        results.push_back({{"name", name}, {"value", value}, {"tol", t}, {"pass", ok}});
    };
    if (check == "vacuum") {
        double t = tol > 0 ? tol : 1e-7;
        add("max |Ric|", ricci(m4).max_abs(20, seed), t);
    } else if (check == "reduced") {
        double t = tol > 0 ? tol : 1e-7;
        ReducedResiduals rr = reduced_vacuum_residuals(m4, 20, seed);
        add("max |R_munu residual|", rr.max_munu, t);
        add("max |R_mu3 residual|", rr.max_mu3, t);
        add("max |R_33 residual|", rr.max_33, t);
        add("reconstruction residual", reconstruction_residual(m4, split_killing(m4), 20, seed),
            1e-9);
    } else if (check == "ewm") {
        ReducedData rd = split_killing(m4);
        TensorField v_grad("_a", 3, rd.g3.chart());
        double t = tol > 0 ? tol : 1e-7;
        bool has_twist = false;
        for (size_t i = 0; i < 3; ++i)
            if (!is_zero_literal(rd.A.at({i}))) has_twist = true;
        if (has_twist) {
            v_grad = twist_one_form(rd, faraday(rd));
            t = tol > 0 ? tol : 1e-6;
        }
        EwmResiduals ew = ewm_residuals(conformal_reduce(rd), v_grad, 20, seed);
        add("wave-map u residual", ew.max_u, t);
        add("wave-map v residual", ew.max_v, t);
    } else if (check == "conformal") {
        double t = tol > 0 ? tol : 1e-8;
        ReducedData rd = split_killing(m4);
        MetricSpec scaled = scale_metric(rd.g3, rd.e2u);
        TensorField direct = ricci(scaled);
        TensorField formula = conformal_ricci(rd.g3, rd.u);
        double worst = 0;
        for (const auto& b : rd.g3.chart().sample(20, seed)) {
            Evaluator ev(b);
            for (size_t i = 0; i < 3; ++i)
                for (size_t j = 0; j < 3; ++j)
                    worst = std::max(worst,
                                     std::abs(ev(direct.at({i, j})) - ev(formula.at({i, j}))));
        }
        add("conformal Ricci formula vs direct", worst, t);
    } else {
        throw CLI::ValidationError("--check", "unknown check '" + check + "'");
    }
    emit_report(make_report("verify", inputs, results, seed), out);
    return pass ? kExitOk : kExitCheckFailed;
}

int cmd_energy(const MetricArgs& margs, double r0, std::vector<double> rmax_list, double eps,
               bool compact_field, unsigned seed, const std::string& out,
               const std::string& csv) {
    json inputs;
    MetricSpec m4 = resolve_metric(margs, inputs);
    ReducedData rd = split_killing(m4);
    ReducedData rc = conformal_reduce(rd);
    if (r0 <= 0) r0 = 1.0;
    if (rmax_list.empty()) rmax_list = {10, 30, 100, 1000, 10000};
    inputs["r0"] = r0;
    inputs["eps"] = eps;
    inputs["rmax_list"] = rmax_list;
    inputs["compact_test_field"] = compact_field;

    TensorField t("_ab", 3, rc.g3.chart());
    if (compact_field) {
        // rapidly decaying probe field instead of the reduction scalar
        ExprPtr uc = exp_(make_neg(pow(make_sub(sym("r"), num(6)), 2)));
        t = stress_energy(rc.g3, std::vector<ScalarField>{{uc, one_expr()}});
    } else {
        std::vector<GradientField> fields;
        TensorField du("_a", 3, rc.g3.chart());
        for (size_t i = 0; i < 3; ++i) du.set({i}, differentiate(rc.u, rc.g3.chart().coords[i]));
        fields.push_back({du, one_expr()});
        bool has_twist = false;
        for (size_t i = 0; i < 3; ++i)
            if (!is_zero_literal(rd.A.at({i}))) has_twist = true;
        if (has_twist)
            fields.push_back({twist_one_form(rd, faraday(rd)),
                              make_number(Rational(1, 4)) * make_power(rc.e2u, -2)});
        t = stress_energy(rc.g3, fields);
    }
    std::vector<double> energies = parallel_map(rmax_list, [&](double R) {
        return energy_cutoff(rc.g3, t, r0, R, eps, 1e-8);
    });
    std::vector<std::pair<double, double>> samples;
    for (size_t i = 0; i < rmax_list.size(); ++i) samples.emplace_back(rmax_list[i], energies[i]);
    EnergyReport rep = divergence_fit(samples);
    json results;
    results["samples"] = json::array();
    for (const auto& [R, E] : rep.samples) results["samples"].push_back({{"R", R}, {"E", E}});
    results["fit"] = {{"c1", rep.c1}, {"c0", rep.c0}, {"residual", rep.fit_residual}};
    results["verdict"] = rep.verdict == EnergyVerdict::Convergent      ? "convergent"
                         : rep.verdict == EnergyVerdict::LogDivergent ? "log-divergent"
                                                                      : "power-divergent";
    if (!csv.empty()) {
        std::ofstream cs(csv);
        cs << "R,E\n";
        for (const auto& [R, E] : rep.samples) cs << R << ',' << E << '\n';
    }
    emit_report(make_report("energy", inputs, results, seed), out);
    return kExitOk;
}

int cmd_constraint(const std::string& profile, double amp, double width,
                   const std::string& target, unsigned seed, const std::string& out,
                   const std::string& csv) {
    ProfileKind pk;
    if (profile == "gaussian_bump") pk = ProfileKind::GaussianBump;
    else if (profile == "compact_bump") pk = ProfileKind::CompactBump;
    else throw CLI::ValidationError("--profile", "unknown profile '" + profile + "'");
    TargetKind tk;
    if (target == "sphere") tk = TargetKind::Sphere;
    else if (target == "hyperbolic") tk = TargetKind::Hyperbolic;
    else throw CLI::ValidationError("--target", "unknown target '" + target + "'");
    EquivariantData d = equivariant_profile(pk, amp, width, tk);
    ConstraintSolution sol = solve_constraint(d);
    json inputs{{"profile", profile}, {"amp", amp}, {"width", width}, {"target", target}};
    json results;
    bool pass = true;
    if (sol.status == ConstraintStatus::Supercritical) {
        results["status"] = "supercritical";
        results["r_star"] = sol.r_star;
    } else {
        MassReport rep = mass_identities(sol, d);
        results["status"] = "subcritical";
        results["gamma_inf"] = sol.gamma_inf;
        results["m_av"] = rep.m_av;
        results["angle_deficit"] = rep.angle_deficit;
        results["energy_ode"] = rep.energy_ode;
        results["energy_quadrature"] = rep.energy_quadrature;
        results["identity"] = {{"value", rep.energy_rel_err},
                               {"tol", 1e-6},
                               {"pass", rep.energy_rel_err < 1e-6},
                               {"deficit_eq_pi_mav_exact", rep.deficit_identity_exact},
                               {"mass_in_range", rep.mass_in_range}};
        pass = rep.energy_rel_err < 1e-6 && rep.deficit_identity_exact && rep.mass_in_range;
    }
    if (!csv.empty()) {
        std::ofstream cs(csv);
        cs << "r,chi,gamma,energy_density\n";
        for (size_t i = 0; i < sol.r.size(); ++i)
            cs << sol.r[i] << ',' << sol.chi[i] << ',' << std::max(0.0, -std::log(sol.chi[i]))
               << ','
               << d.density(sol.r[i], sol.chi[i]) << '\n';
    }
    emit_report(make_report("constraint", inputs, results, seed), out);
    return pass ? kExitOk : kExitCheckFailed;
}

int cmd_adm(const MetricArgs& margs, unsigned seed, const std::string& out) {
    json inputs;
    MetricArgs args = margs;
    if (args.name.empty() && args.file.empty()) args.name = "schwarzschild-spatial";
    MetricSpec q3 = resolve_metric(args, inputs);
    double mass = adm_mass(q3);
    json results;
    results["adm_mass"] = mass;
    bool pass = true;
    if (args.file.empty() && args.name == "schwarzschild-spatial") {
        double rel = args.m > 0 ? std::abs(mass - args.m) / args.m : std::abs(mass);
        results["expected"] = args.m;
        results["relative_error"] = {{"value", rel}, {"tol", 1e-3}, {"pass", rel < 1e-3}};
        pass = rel < 1e-3;
    }
    emit_report(make_report("adm", inputs, results, seed), out);
    return pass ? kExitOk : kExitCheckFailed;
}

int cmd_paper_suite(unsigned seed, const std::string& out) {
    auto criteria = run_acceptance(seed);
    json results = json::array();
    bool all = true;
    for (const auto& c : criteria) {
        printf("[%s] %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
        fflush(stdout);
        results.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        all = all && c.pass;
    }
    printf("%s\n", all ? "paper-suite: all criteria passed" : "paper-suite: FAILURES present");
    if (!out.empty()) emit_report(make_report("paper-suite", json::object(), results, seed), out);
    return all ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"axisymmetric dimensional-reduction toolkit"};
    app.require_subcommand(1);

    MetricArgs margs;
    unsigned seed = 42;
    std::string out, csv, check = "vacuum";
    bool conformal = false, compact_field = false;
    double tol = -1, r0 = -1, eps = M_PI / 4, amp = 0.1, width = 1.0;
    std::vector<double> rmax_list;
    std::string profile = "gaussian_bump", target = "sphere";

    auto add_metric_flags = [&](CLI::App* c, const char* def) {
        margs.name = def;
        c->add_option("--metric", margs.name, "catalog metric name");
        c->add_option("--metric-file", margs.file, "metric text file");
        c->add_option("--m", margs.m, "Schwarzschild mass parameter");
        c->add_option("--M", margs.M, "Kerr mass parameter");
        c->add_option("--a", margs.a, "Kerr spin parameter");
        c->add_option("--seed", seed, "sample-point seed");
        c->add_option("--out", out, "write the JSON report here instead of stdout");
    };

    auto* reduce = app.add_subcommand("reduce", "split a 4-metric along the phi Killing vector");
    add_metric_flags(reduce, "minkowski");
    reduce->add_flag("--conformal", conformal, "also apply the e^{2u} conformal rescaling");

    auto* verify = app.add_subcommand("verify", "check field-equation residuals");
    add_metric_flags(verify, "minkowski");
    verify->add_option("--check", check, "vacuum | reduced | ewm | conformal");
    verify->add_option("--tol", tol, "override the default tolerance");

    auto* energy = app.add_subcommand("energy", "cutoff energies and divergence fit");
    add_metric_flags(energy, "minkowski");
    energy->add_option("--r0", r0, "inner radial cutoff");
    energy->add_option("--rmax-list", rmax_list, "outer cutoffs R")->delimiter(',');
    energy->add_option("--eps", eps, "polar-angle cutoff");
    energy->add_flag("--compact-test-field", compact_field,
                     "use a decaying probe field (convergent control)");
    energy->add_option("--csv", csv, "write R,E samples as CSV");

    auto* constraint = app.add_subcommand("constraint", "equivariant Hamiltonian constraint");
    constraint->add_option("--profile", profile, "gaussian_bump | compact_bump");
    constraint->add_option("--amp", amp, "profile amplitude");
    constraint->add_option("--width", width, "profile width");
    constraint->add_option("--target", target, "sphere | hyperbolic");
    constraint->add_option("--seed", seed, "sample-point seed");
    constraint->add_option("--out", out, "write the JSON report here instead of stdout");
    constraint->add_option("--csv", csv, "write r,chi,gamma,energy_density as CSV");

    auto* adm = app.add_subcommand("adm", "ADM mass of a spatial 3-metric");
    add_metric_flags(adm, "schwarzschild-spatial");

    auto* suite = app.add_subcommand("paper-suite", "run every acceptance criterion");
    suite->add_option("--seed", seed, "sample-point seed");
    suite->add_option("--out", out, "write the JSON report here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*reduce) return cmd_reduce(margs, conformal, seed, out);
        if (*verify) return cmd_verify(margs, check, tol, seed, out);
        if (*energy) return cmd_energy(margs, r0, rmax_list, eps, compact_field, seed, out, csv);
        if (*constraint) return cmd_constraint(profile, amp, width, target, seed, out, csv);
        if (*adm) return cmd_adm(margs, seed, out);
        if (*suite) return cmd_paper_suite(seed, out);
    } catch (const QuadratureError& e) {
        fprintf(stderr, "numerical error: %s\n", e.what());
        return kExitNumerical;
    } catch (const NonDecayingMetricError& e) {
        fprintf(stderr, "numerical error: %s\n", e.what());
        return kExitNumerical;
    } catch (const EvalError& e) {
        fprintf(stderr, "numerical error: %s\n", e.what());
        return kExitNumerical;
    } catch (const CLI::ValidationError& e) {
        fprintf(stderr, "input error: %s\n", e.what());
        return kExitInputError;
    } catch (const std::exception& e) {
        // parameter ranges, metric-format, parse, chart errors: bad input
        fprintf(stderr, "input error: %s\n", e.what());
        return kExitInputError;
    }
    return kExitInputError;
}
