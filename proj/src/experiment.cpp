#include "contactlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "contactlab/dynamics.hpp"
#include "contactlab/lifts.hpp"

namespace contactlab {

using nlohmann::json;

namespace {

[[noreturn]] void config_fail(const std::string& origin, const std::string& msg) {
    throw InputError(origin + ": " + msg);
}

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

void expect_keys(const json& obj, std::initializer_list<const char*> keys,
                 const std::string& origin, const std::string& where) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : keys)
            if (item.key() == k) known = true;
        if (!known)
            config_fail(origin, "unknown key '" + item.key() + "' in " + where);
    }
}

Polynomial poly_from_json(const json& j, const std::string& origin,
                          const std::string& where) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("terms"))
        config_fail(origin, where + " must be an object with 'dim' and 'terms'");
    expect_keys(j, {"dim", "terms"}, origin, where);
    Polynomial p;
    p.dim = j.at("dim").get<int>();
    if (p.dim < 1) config_fail(origin, where + ": dim must be >= 1");
    for (const auto& t : j.at("terms")) {
        expect_keys(t, {"exponents", "coeff"}, origin, where + " term");
        Polynomial::Term term;
        term.exponents = t.at("exponents").get<std::vector<int>>();
        term.coeff = t.at("coeff").get<double>();
        if (static_cast<int>(term.exponents.size()) != p.dim)
            config_fail(origin, where + ": term needs exactly dim exponents");
        for (int e : term.exponents)
            if (e < 0) config_fail(origin, where + ": exponents must be >= 0");
        p.terms.push_back(std::move(term));
    }
    return p;
}

json poly_to_json(const Polynomial& p) {
    json terms = json::array();
    for (const auto& t : p.terms)
        terms.push_back(json{{"exponents", t.exponents}, {"coeff", t.coeff}});
    return json{{"dim", p.dim}, {"terms", terms}};
}

Eigen::VectorXd vector_from_json(const json& j, int expected, const std::string& origin,
                                 const std::string& where) {
    const auto v = j.get<std::vector<double>>();
    if (static_cast<int>(v.size()) != expected)
        config_fail(origin, where + " needs exactly " + std::to_string(expected) +
                                " entries");
    return Eigen::Map<const Eigen::VectorXd>(v.data(), expected);
}

} // namespace

SubmanifoldPatch patch_from_table(const PatchTable& table) {
    if (table.param.empty()) throw InputError("custom patch needs parametrization polynomials");
    if (table.intrinsic_dim < 0) throw InputError("custom patch dimension must be >= 0");
    for (const auto& p : table.param)
        if (p.dim != table.intrinsic_dim)
            throw InputError("custom patch: every parametrization polynomial must take "
                             "intrinsic_dim variables");
    SubmanifoldPatch patch;
    patch.name = table.name;
    patch.ambient_dim = static_cast<int>(table.param.size());
    patch.intrinsic_dim = table.intrinsic_dim;
    patch.param = [polys = table.param](const Eigen::VectorXd& u) {
        Eigen::VectorXd x(polys.size());
        for (std::size_t i = 0; i < polys.size(); ++i) x[i] = polys[i].value(u);
        return Point(std::move(x));
    };
    patch.jacobian = [polys = table.param](const Eigen::VectorXd& u) {
        Eigen::MatrixXd j(polys.size(), u.size());
        for (std::size_t i = 0; i < polys.size(); ++i)
            j.row(i) = polys[i].gradient(u).transpose();
        return j;
    };
    // uniform parameter grid, axis 0 fastest
    if (table.intrinsic_dim == 0) {
        patch.sample_grid = {Eigen::VectorXd(0)};
    } else {
        if (table.grid_lo.size() != table.intrinsic_dim ||
            table.grid_hi.size() != table.intrinsic_dim)
            throw InputError("custom patch: grid bounds must match intrinsic_dim");
        if (table.grid_points < 1) throw InputError("custom patch: grid_points must be >= 1");
        std::size_t total = 1;
        for (int i = 0; i < table.intrinsic_dim; ++i)
            total *= static_cast<std::size_t>(table.grid_points);
        for (std::size_t flat = 0; flat < total; ++flat) {
            Eigen::VectorXd u(table.intrinsic_dim);
            std::size_t rest = flat;
            for (int i = 0; i < table.intrinsic_dim; ++i) {
                const auto idx = rest % static_cast<std::size_t>(table.grid_points);
                rest /= static_cast<std::size_t>(table.grid_points);
                u[i] = table.grid_points == 1
                           ? 0.5 * (table.grid_lo[i] + table.grid_hi[i])
                           : table.grid_lo[i] + (table.grid_hi[i] - table.grid_lo[i]) *
                                                    static_cast<double>(idx) /
                                                    (table.grid_points - 1);
            }
            patch.sample_grid.push_back(std::move(u));
        }
    }
    for (std::size_t i = 0; i < table.defining.size(); ++i)
        patch.defining_fields.push_back(
            fields::polynomial(table.defining[i], table.name + "-def" + std::to_string(i)));
    return patch;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str(), path);
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text,
                                                  const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        config_fail(origin, "line " + std::to_string(line) + ", column " +
                                std::to_string(col) + ": " + e.what());
    }
    if (!j.is_object()) config_fail(origin, "top level must be a JSON object");
    expect_keys(j,
                {"chart", "fixture", "hamiltonian", "seed", "tolerance", "out",
                 "integration", "grids", "k_list", "patch"},
                origin, "config");

    ExperimentConfig c;
    try {
        if (j.contains("chart")) c.chart_name = j.at("chart").get<std::string>();
        if (j.contains("fixture")) c.fixture = j.at("fixture").get<std::string>();
        if (j.contains("hamiltonian")) {
            const json& h = j.at("hamiltonian");
            if (h.is_string()) {
                c.hamiltonian = h.get<std::string>();
            } else if (h.is_object()) {
                expect_keys(h, {"polynomial"}, origin, "hamiltonian");
                c.hamiltonian_poly =
                    poly_from_json(h.at("polynomial"), origin, "hamiltonian.polynomial");
                c.hamiltonian = "polynomial";
            } else {
                config_fail(origin, "hamiltonian must be a builtin name or a "
                                    "polynomial table");
            }
        }
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("tolerance")) c.tol = j.at("tolerance").get<double>();
        if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
        if (j.contains("integration")) {
            const json& g = j.at("integration");
            expect_keys(g, {"step", "fd_step", "flow_step"}, origin, "integration");
            if (g.contains("step")) c.step = g.at("step").get<double>();
            if (g.contains("fd_step")) c.fd_step = g.at("fd_step").get<double>();
            if (g.contains("flow_step")) c.flow_step = g.at("flow_step").get<double>();
        }
        if (j.contains("grids")) {
            const json& g = j.at("grids");
            expect_keys(g, {"value_points", "flow_points", "time_steps"}, origin, "grids");
            if (g.contains("value_points"))
                c.value_points = g.at("value_points").get<int>();
            if (g.contains("flow_points")) c.flow_points = g.at("flow_points").get<int>();
            if (g.contains("time_steps")) c.time_steps = g.at("time_steps").get<int>();
        }
        if (j.contains("k_list")) {
            c.k_list = j.at("k_list").get<std::vector<int>>();
            if (c.k_list.empty()) config_fail(origin, "k_list must not be empty");
        }
        if (j.contains("patch")) {
            const json& p = j.at("patch");
            expect_keys(p,
                        {"name", "intrinsic_dim", "param", "grid_lo", "grid_hi",
                         "grid_points", "defining"},
                        origin, "patch");
            PatchTable t;
            if (p.contains("name")) t.name = p.at("name").get<std::string>();
            t.intrinsic_dim = p.at("intrinsic_dim").get<int>();
            for (const auto& poly : p.at("param"))
                t.param.push_back(poly_from_json(poly, origin, "patch.param entry"));
            if (t.intrinsic_dim > 0) {
                t.grid_lo = vector_from_json(p.at("grid_lo"), t.intrinsic_dim, origin,
                                             "patch.grid_lo");
                t.grid_hi = vector_from_json(p.at("grid_hi"), t.intrinsic_dim, origin,
                                             "patch.grid_hi");
            }
            if (p.contains("grid_points")) t.grid_points = p.at("grid_points").get<int>();
            if (p.contains("defining"))
                for (const auto& poly : p.at("defining"))
                    t.defining.push_back(
                        poly_from_json(poly, origin, "patch.defining entry"));
            c.patch_table = std::move(t);
        }
    } catch (const json::exception& e) {
        config_fail(origin, e.what());
    }

    if (!(c.tol > 0.0)) config_fail(origin, "tolerance must be positive");
    if (!(c.step > 0.0) || !(c.fd_step > 0.0) || !(c.flow_step > 0.0))
        config_fail(origin, "integration steps must be positive");
    if (c.value_points < 2 || c.flow_points < 2)
        config_fail(origin, "grids need at least 2 points per axis");
    if (c.time_steps < 1) config_fail(origin, "time_steps must be >= 1");
    for (int k : c.k_list)
        if (k < 1) config_fail(origin, "k_list entries must be positive");
    return c;
}

std::string ExperimentConfig::echo() const {
    json h;
    if (hamiltonian_poly)
        h = json{{"polynomial", poly_to_json(*hamiltonian_poly)}};
    else
        h = hamiltonian;
    json j{{"chart", chart_name},
           {"fixture", fixture},
           {"hamiltonian", h},
           {"seed", seed},
           {"tolerance", tol},
           {"out", out_dir},
           {"integration", {{"step", step}, {"fd_step", fd_step}, {"flow_step", flow_step}}},
           {"grids",
            {{"value_points", value_points},
             {"flow_points", flow_points},
             {"time_steps", time_steps}}},
           {"k_list", k_list}};
    if (patch_table) {
        json param = json::array();
        for (const auto& p : patch_table->param) param.push_back(poly_to_json(p));
        json defining = json::array();
        for (const auto& p : patch_table->defining) defining.push_back(poly_to_json(p));
        json patch{{"name", patch_table->name},
                   {"intrinsic_dim", patch_table->intrinsic_dim},
                   {"param", param},
                   {"grid_points", patch_table->grid_points},
                   {"defining", defining}};
        if (patch_table->intrinsic_dim > 0) {
            patch["grid_lo"] = std::vector<double>(
                patch_table->grid_lo.data(),
                patch_table->grid_lo.data() + patch_table->grid_lo.size());
            patch["grid_hi"] = std::vector<double>(
                patch_table->grid_hi.data(),
                patch_table->grid_hi.data() + patch_table->grid_hi.size());
        }
        j["patch"] = patch;
    }
    return j.dump(2);
}

ContactChart config_chart(const ExperimentConfig& config) {
    return ContactChart::parse(config.chart_name);
}

ScalarField make_builtin_field(const ContactChart& chart, const std::string& spec) {
    const int d = chart.dimension();
    if (spec == "reeb") return fields::constant(d, 1.0);
    if (spec.rfind("constant:", 0) == 0) {
        try {
            return fields::constant(d, std::stod(spec.substr(9)));
        } catch (const std::exception&) {
            throw InputError("bad constant in hamiltonian spec '" + spec + "'");
        }
    }
    if (spec.rfind("coordinate:", 0) == 0) {
        const std::string label = spec.substr(11);
        return fields::coordinate(d, chart.coord_index(label), label);
    }
    if (spec.rfind("hk:", 0) == 0) {
        int k = 0;
        try {
            k = std::stoi(spec.substr(3));
        } catch (const std::exception&) {
            throw InputError("bad k in hamiltonian spec '" + spec + "'");
        }
        if (chart.kind() != ChartKind::Darboux || chart.pairs() != 1)
            throw InputError("the oscillating family lives on darboux:1, not " +
                             chart.name());
        return fields::oscillating_bump(k);
    }
    if (spec == "bump") {
        if (chart.kind() == ChartKind::Prequantization)
            return prequant_pullback(fields::planar_bump());
        if (chart.kind() == ChartKind::Darboux) {
            const int n = chart.pairs();
            const ScalarField planar = fields::planar_bump();
            ScalarField f("bump", d,
                          [planar, n](double, const Point& p) {
                              return planar.value(0.0, Point{p[0], p[n]});
                          },
                          [planar, n, d](double, const Point& p) -> Eigen::VectorXd {
                              const Eigen::VectorXd g =
                                  planar.gradient(0.0, Point{p[0], p[n]});
                              Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
                              out[0] = g[0];
                              out[n] = g[1];
                              return out;
                          });
            f.set_extent(Box::cube(d, -1.0, 1.0), /*compact=*/false);
            return f;
        }
        throw InputError("the bump builtin needs a Darboux or bundle chart");
    }
    throw InputError("unknown hamiltonian builtin '" + spec +
                     "' (try reeb, coordinate:<label>, hk:<k>, bump, constant:<c>)");
}

ScalarField config_field(const ExperimentConfig& config, const ContactChart& chart) {
    if (config.hamiltonian_poly) {
        if (config.hamiltonian_poly->dim != chart.dimension())
            throw InputError("config polynomial dimension does not match chart " +
                             chart.name());
        return fields::polynomial(*config.hamiltonian_poly, "config-poly");
    }
    return make_builtin_field(chart, config.hamiltonian);
}

bool RunReport::pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

int RunReport::failed() const {
    int n = 0;
    for (const auto& c : checks)
        if (!c.pass) ++n;
    return n;
}

namespace {

using Clock = std::chrono::steady_clock;

void add_check(RunReport& report, std::string name, double measured, double bound,
               bool pass, std::string detail = "") {
    report.checks.push_back(
        {std::move(name), pass, measured, bound, std::move(detail)});
}

// deviation check: pass iff |measured| <= bound
void add_dev(RunReport& report, std::string name, double measured, double bound,
             std::string detail = "") {
    add_check(report, std::move(name), measured, bound, std::abs(measured) <= bound,
              std::move(detail));
}

RunReport start_report(const char* command, const ExperimentConfig& config) {
    RunReport report;
    report.command = command;
    report.seed = config.seed;
    report.config_echo = config.echo();
    return report;
}

void finish_report(RunReport& report, Clock::time_point t0) {
    report.wall_seconds =
        std::chrono::duration_cast<std::chrono::duration<double>>(Clock::now() - t0)
            .count();
}

Point random_point(Rng& rng, int d, double lo, double hi) {
    return Point(rng.vector(d, lo, hi));
}

double field_scale(const ScalarField& f, const Point& p) {
    return 1.0 + std::abs(f.value(0.0, p)) + f.gradient(0.0, p).norm();
}

// closed-form Darboux Hamiltonian field, used as the oracle the solver is
// held against
Eigen::VectorXd darboux_closed_form(const ContactChart& chart, const ScalarField& h,
                                    const Point& p) {
    const int n = chart.pairs();
    const double v = h.value(0.0, p);
    const Eigen::VectorXd g = h.gradient(0.0, p);
    Eigen::VectorXd x(chart.dimension());
    double c = v;
    for (int i = 0; i < n; ++i) {
        x[i] = -g[n + i];
        x[n + i] = g[i] + p[n + i] * g[2 * n];
        c -= p[n + i] * g[n + i];
    }
    x[2 * n] = c;
    return x;
}

} // namespace

RunReport cmd_coisotropy(const ExperimentConfig& config) {
    const auto t0 = Clock::now();
    RunReport report = start_report("coisotropy", config);

    const std::vector<std::string> names =
        config.fixture.empty() ? fixture_names() : std::vector<std::string>{config.fixture};
    for (const auto& name : names) {
        const Fixture fx = make_fixture(name);
        const CoisotropyVerdict cv = coisotropy_test(fx.chart, fx.patch, config.tol);
        double max_residual = 0.0;
        for (const auto& r : cv.records)
            max_residual = std::max(max_residual, r.inclusion_residual);
        add_check(report, "coisotropy/" + name, max_residual, config.tol,
                  cv.pass == fx.expect_coisotropic,
                  std::string("expected ") +
                      (fx.expect_coisotropic ? "coisotropic" : "non-coisotropic") +
                      ", classified " + (cv.pass ? "coisotropic" : "non-coisotropic"));
        const LegendrianVerdict lv = legendrian_test(fx.chart, fx.patch, config.tol);
        add_check(report, "legendrian/" + name, lv.max_alpha_residual, config.tol,
                  lv.pass == fx.expect_legendrian,
                  std::string("expected ") +
                      (fx.expect_legendrian ? "legendrian" : "non-legendrian") +
                      ", classified " + (lv.pass ? "legendrian" : "non-legendrian"));
    }

    if (config.fixture.empty()) {
        // verdicts are stable under contact flows
        for (const char* name : {"legendrian-axis", "plane-y0"}) {
            const Fixture fx = make_fixture(name);
            const ScalarField h = fields::oscillating_bump(2);
            const InvarianceReport inv = coisotropy_invariance_experiment(
                fx.chart, fx.patch, h, 0.5, config.tol, 1e-6, config.flow_step);
            add_check(report, std::string("invariance/") + name,
                      inv.agree ? 0.0 : 1.0, 0.0,
                      inv.agree && inv.before.pass == fx.expect_coisotropic,
                      "verdict before vs after the time-1/2 flow of hk:2");
        }

        // infinitesimal displaceability spot checks with known answers
        {
            const Fixture fx = make_fixture("z-axis");
            const ScalarField h = fields::coordinate(3, 0, "x1");
            const DisplaceabilityVerdict dv =
                displaceability_test(fx.chart, fx.patch, h, config.tol);
            add_check(report, "displaceability/z-axis-under-x1",
                      dv.min_relative_distance, config.tol, dv.displaces,
                      "coordinate field x1 should point out of the axis everywhere");
        }
        {
            const Fixture fx = make_fixture("legendrian-axis");
            const ScalarField h = fields::coordinate(3, 2, "z");
            const DisplaceabilityVerdict dv =
                displaceability_test(fx.chart, fx.patch, h, config.tol);
            add_check(report, "displaceability/legendrian-axis-under-z",
                      static_cast<double>(dv.failures.size()), 0.0, !dv.displaces,
                      "the z field vanishes on the axis, so it cannot displace it");
        }
    }

    if (config.patch_table) {
        const ContactChart chart = config_chart(config);
        const SubmanifoldPatch patch = patch_from_table(*config.patch_table);
        const CoisotropyVerdict cv = coisotropy_test(chart, patch, config.tol);
        double max_residual = 0.0;
        for (const auto& r : cv.records)
            max_residual = std::max(max_residual, r.inclusion_residual);
        add_check(report, "coisotropy/" + patch.name, max_residual, config.tol, true,
                  std::string("classified ") +
                      (cv.pass ? "coisotropic" : "non-coisotropic") +
                      " (no expectation configured)");
    }

    finish_report(report, t0);
    return report;
}

RunReport cmd_brackets(const ExperimentConfig& config) {
    const auto t0 = Clock::now();
    RunReport report = start_report("brackets", config);
    Rng rng(config.seed);

    // coordinate pair table: {x_i, y_j} = -delta_ij, {x_i, x_j} = {y_i, y_j} = 0
    {
        Rng r = rng.fork(1);
        double worst = 0.0;
        for (int n : {1, 2}) {
            const ContactChart chart = ContactChart::darboux(n);
            const int d = chart.dimension();
            for (int rep = 0; rep < 10; ++rep) {
                const Point p = random_point(r, d, -1.0, 1.0);
                for (int i = 0; i < n; ++i)
                    for (int jj = 0; jj < n; ++jj) {
                        const ScalarField xi = fields::coordinate(d, i, "x");
                        const ScalarField yj = fields::coordinate(d, n + jj, "y");
                        worst = std::max(worst, std::abs(contact_bracket_at(chart, xi, yj, p) +
                                                         (i == jj ? 1.0 : 0.0)));
                        worst = std::max(
                            worst, std::abs(contact_bracket_at(
                                       chart, xi, fields::coordinate(d, jj, "x"), p)));
                        worst = std::max(
                            worst,
                            std::abs(contact_bracket_at(
                                chart, yj, fields::coordinate(d, n + i, "y"), p)));
                    }
            }
        }
        add_dev(report, "brackets/coordinate-pairs", worst, 1e-12,
                "verbatim bracket of coordinate pairs against the constant table");
    }

    // symmetry defect identity and antisymmetry of the sign-flipped variant
    {
        Rng r = rng.fork(2);
        double worst_defect = 0.0, worst_antisym = 0.0;
        for (int n : {1, 2}) {
            const ContactChart chart = ContactChart::darboux(n);
            const int d = chart.dimension();
            for (int rep = 0; rep < 20; ++rep) {
                const ScalarField f = fields::polynomial(
                    fields::random_polynomial(r, d, 3, -2.0, 2.0), "F");
                const ScalarField g = fields::polynomial(
                    fields::random_polynomial(r, d, 3, -2.0, 2.0), "G");
                for (int s = 0; s < 3; ++s) {
                    const Point p = random_point(r, d, -1.0, 1.0);
                    const double scale = field_scale(f, p) * field_scale(g, p);
                    const TangentVector reeb = chart.reeb(p);
                    const double defect =
                        contact_bracket_at(chart, f, g, p) +
                        contact_bracket_at(chart, g, f, p) -
                        2.0 * (f.value(0.0, p) * g.directional(0.0, reeb) +
                               g.value(0.0, p) * f.directional(0.0, reeb));
                    worst_defect = std::max(worst_defect, std::abs(defect) / scale);
                    const double anti = contact_bracket_antisym_at(chart, f, g, p) +
                                        contact_bracket_antisym_at(chart, g, f, p);
                    worst_antisym = std::max(worst_antisym, std::abs(anti) / scale);
                }
            }
        }
        add_dev(report, "brackets/symmetry-defect", worst_defect, 1e-8,
                "{F,G}+{G,F} against 2(F dG(R) + G dF(R)), scale-normalized");
        add_dev(report, "brackets/antisym-variant", worst_antisym, 1e-8,
                "sign-flipped bracket pairs sum to zero");
    }

    // bundle-chart bracket of pullbacks vs the planar bracket
    {
        Rng r = rng.fork(3);
        const ContactChart preq = ContactChart::prequantization();
        double worst = 0.0;
        for (int rep = 0; rep < 15; ++rep) {
            const ScalarField f = fields::polynomial(
                fields::random_polynomial(r, 2, 3, -2.0, 2.0), "f");
            const ScalarField g = fields::polynomial(
                fields::random_polynomial(r, 2, 3, -2.0, 2.0), "g");
            std::vector<Point> samples;
            for (int s = 0; s < 4; ++s)
                samples.push_back(Point{r.uniform(-1.0, 1.0), r.uniform(-1.0, 1.0),
                                        r.uniform(0.0, 1.0)});
            const BracketCheck check = prequant_bracket_check(preq, f, g, samples, 1e-8);
            worst = std::max(worst, check.max_deviation);
        }
        add_dev(report, "brackets/bundle-pullback", worst, 1e-8,
                "contact bracket of pullbacks equals the planar bracket");
    }

    // cone lift identity, against the antisymmetric variant
    {
        Rng r = rng.fork(4);
        const ContactChart base = ContactChart::darboux(1);
        const ContactChart symp = ContactChart::symplectization(base);
        double worst = 0.0;
        for (int rep = 0; rep < 25; ++rep) {
            const ScalarField f = fields::polynomial(
                fields::random_polynomial(r, 3, 3, -2.0, 2.0), "F");
            const ScalarField g = fields::polynomial(
                fields::random_polynomial(r, 3, 3, -2.0, 2.0), "G");
            const ScalarField lf = lift_function(f);
            const ScalarField lg = lift_function(g);
            const Point p = random_point(r, 3, -1.0, 1.0);
            const double theta = r.uniform(-1.0, 1.0);
            Eigen::VectorXd hat(4);
            hat.head(3) = p.coords;
            hat[3] = theta;
            const double lhs = symp_bracket_at(symp, lf, lg, Point(hat));
            const double rhs =
                std::exp(theta) * contact_bracket_antisym_at(base, f, g, p);
            const double scale =
                std::exp(theta) * field_scale(f, p) * field_scale(g, p);
            worst = std::max(worst, std::abs(lhs - rhs) / scale);
        }
        add_dev(report, "brackets/cone-lift-identity", worst, 1e-6,
                "symplectic bracket of weighted lifts vs the weighted contact bracket");
    }

    // conformal naturality under one bump flow (the bracket conjugation rule)
    {
        Rng r = rng.fork(5);
        const ContactChart chart = ContactChart::darboux(1);
        const ScalarField f =
            fields::polynomial(fields::random_polynomial(r, 3, 2, -1.0, 1.0), "F");
        const ScalarField g =
            fields::polynomial(fields::random_polynomial(r, 3, 2, -1.0, 1.0), "G");
        std::vector<Point> samples;
        for (int s = 0; s < 2; ++s) samples.push_back(random_point(r, 3, -0.6, 0.6));
        const NaturalityReport nat = verify_conformal_naturality(
            chart, fields::oscillating_bump(1), f, g, samples, 1e-5, config.flow_step);
        add_dev(report, "brackets/conformal-naturality", nat.max_deviation, nat.tol,
                "transported brackets vs transported bracket values under the hk:1 flow");
    }

    // time-dependent inputs are rejected, not silently frozen
    {
        bool threw = false;
        try {
            const ContactChart chart = ContactChart::darboux(1);
            const ScalarField f = fields::time_ramp(fields::coordinate(3, 0, "x1"), 1.0, 1.0);
            contact_bracket_at(chart, f, f, Point{0.1, 0.2, 0.3});
        } catch (const InputError&) {
            threw = true;
        }
        add_check(report, "brackets/time-dependent-rejected", threw ? 0.0 : 1.0, 0.0,
                  threw, "bracket of a time-dependent field raises an input error");
    }

    // the same seed gives the same verdicts across replays
    {
        double max_gap = 0.0;
        for (std::uint64_t s = 0; s < 10; ++s) {
            auto run_once = [&](std::uint64_t seed) {
                Rng rr(seed);
                const ContactChart chart = ContactChart::darboux(1);
                double worst = 0.0;
                for (int rep = 0; rep < 5; ++rep) {
                    const ScalarField f = fields::polynomial(
                        fields::random_polynomial(rr, 3, 2, -1.0, 1.0), "F");
                    const ScalarField g = fields::polynomial(
                        fields::random_polynomial(rr, 3, 2, -1.0, 1.0), "G");
                    const Point p = random_point(rr, 3, -1.0, 1.0);
                    worst = std::max(worst,
                                     std::abs(contact_bracket_antisym_at(chart, f, g, p) +
                                              contact_bracket_antisym_at(chart, g, f, p)));
                }
                return worst;
            };
            const double a = run_once(config.seed + s);
            const double b = run_once(config.seed + s);
            max_gap = std::max(max_gap, std::abs(a - b));
        }
        add_dev(report, "brackets/seed-replay", max_gap, 0.0,
                "identical seeds reproduce identical measurements bit for bit");
    }

    finish_report(report, t0);
    return report;
}

RunReport cmd_flows(const ExperimentConfig& config) {
    const auto t0 = Clock::now();
    RunReport report = start_report("flows", config);
    Rng rng(config.seed);

    // solver vs the closed-form Darboux field
    {
        Rng r = rng.fork(1);
        double worst = 0.0;
        for (int n : {1, 2}) {
            const ContactChart chart = ContactChart::darboux(n);
            const int d = chart.dimension();
            for (int rep = 0; rep < 25; ++rep) {
                const ScalarField h = fields::polynomial(
                    fields::random_polynomial(r, d, 3, -2.0, 2.0), "H");
                for (int s = 0; s < 4; ++s) {
                    const Point p = random_point(r, d, -1.0, 1.0);
                    const Eigen::VectorXd solved =
                        contact_field_at(chart, h, 0.0, p).components;
                    const Eigen::VectorXd oracle = darboux_closed_form(chart, h, p);
                    worst = std::max(worst, (solved - oracle).cwiseAbs().maxCoeff() /
                                                field_scale(h, p));
                }
            }
        }
        add_dev(report, "flows/closed-form-field", worst, 1e-12,
                "stacked solve against the explicit Darboux formulas");
    }

    // constants generate multiples of the Reeb field
    {
        Rng r = rng.fork(2);
        double worst = 0.0;
        for (const ContactChart& chart :
             {ContactChart::darboux(1), ContactChart::darboux(2),
              ContactChart::prequantization(), ContactChart::circle()}) {
            const int d = chart.dimension();
            for (int rep = 0; rep < 5; ++rep) {
                const double c = r.uniform(-2.0, 2.0);
                const Point p = random_point(r, d, -1.0, 1.0);
                const Eigen::VectorXd solved =
                    contact_field_at(chart, fields::constant(d, c), 0.0, p).components;
                const Eigen::VectorXd expected = c * chart.reeb(p).components;
                worst = std::max(worst, (solved - expected).cwiseAbs().maxCoeff());
            }
        }
        add_dev(report, "flows/constant-is-reeb", worst, 1e-12,
                "the field of a constant is that multiple of the Reeb field");
    }

    // the z field vanishes at the origin, exactly
    {
        const ContactChart chart = ContactChart::darboux(1);
        const Eigen::VectorXd x =
            contact_field_at(chart, fields::coordinate(3, 2, "z"), 0.0,
                             Point{0.0, 0.0, 0.0})
                .components;
        add_dev(report, "flows/z-field-origin", x.cwiseAbs().maxCoeff(), 0.0,
                "the scaling field has an exact zero at the origin");
    }

    // flows pull the contact form back to a conformal multiple
    {
        double worst = 0.0;
        const ContactChart darboux = ContactChart::darboux(1);
        const struct {
            ContactChart chart;
            ScalarField h;
            double t;
        } cases[] = {
            {darboux, fields::oscillating_bump(2), 1.0},
            {darboux, fields::coordinate(3, 2, "z"), 0.7},
            {ContactChart::circle(), fields::circle_trig(0.3, {0.2}, {-0.1}), 1.0},
        };
        Rng r = rng.fork(3);
        for (const auto& c : cases) {
            for (int s = 0; s < 2; ++s) {
                const Point p = random_point(r, c.chart.dimension(), -0.5, 0.5);
                // fd truncation is O(step^2) and dominates the residual;
                // 2e-5 keeps it an order below the bound
                const PullbackReport pr = verify_contactomorphism(
                    c.chart, c.h, p, c.t, 2e-5, 1e-6, config.flow_step);
                worst = std::max(worst, pr.max_residual);
            }
        }
        add_dev(report, "flows/conformal-pullback", worst, 1e-6,
                "pullback of the contact form matches e^g alpha along three flows");
    }

    // conformal factor algebra: additivity along the flow and inverses
    {
        const ContactChart chart = ContactChart::darboux(1);
        const Flow flow(chart, fields::oscillating_bump(2), config.flow_step);
        const Point p{0.2, 0.1, -0.05};
        const FlowSample a = flow.at(0.3, p);
        const FlowSample ab = flow.at(0.7, p);
        const FlowSample b = flow.at(0.4, a.point);
        const double additivity =
            std::abs(ab.conformal - (a.conformal + b.conformal)) +
            chart.coord_distance(ab.point, b.point);
        add_dev(report, "flows/conformal-additivity", additivity, 1e-6,
                "g_{s+t}(p) = g_s(p) + g_t(flow_s p) and matching endpoints");

        const FlowSample fwd = flow.at(0.5, p);
        const FlowSample back = flow.at(-0.5, fwd.point);
        const double inverse = chart.coord_distance(back.point, p) +
                               std::abs(fwd.conformal + back.conformal);
        add_dev(report, "flows/inverse-cancellation", inverse, 1e-6,
                "flowing forward then backward returns the point and cancels g");
    }

    // the oscillating family's conformal factor at the origin
    {
        double worst = 0.0;
        for (int k : config.k_list) {
            const Trajectory traj =
                integrate_isotopy(ContactChart::darboux(1), fields::oscillating_bump(k),
                                  Point{0.0, 0.0, 0.0}, {0.0, 1.0}, config.flow_step);
            worst = std::max(worst, std::abs(traj.conformal_end() + k) / k);
        }
        add_dev(report, "flows/origin-conformal-factor", worst, 1e-6,
                "g at time 1 equals -k at the origin, relative error");
    }

    // fourth-order convergence against the exact scaling flow
    {
        const ContactChart chart = ContactChart::darboux(1);
        const ScalarField h = fields::coordinate(3, 2, "z");
        const Eigen::Vector3d start(0.3, 0.4, 0.5);
        auto error_at = [&](double step) {
            const EndState e = integrate_endpoint(chart, h, start, 0.0, 1.0, step);
            Eigen::Vector3d exact(start[0], start[1] * std::exp(1.0),
                                  start[2] * std::exp(1.0));
            return std::max((e.coords - exact).cwiseAbs().maxCoeff(),
                            std::abs(e.conformal - 1.0));
        };
        const double ratio = error_at(0.05) / error_at(0.025);
        add_check(report, "flows/order-four-convergence", ratio, 6.4, ratio >= 6.4,
                  "halving the step shrinks the error by ~2^4 on the scaling flow");
    }

    // finite-time escape is reported as a blow-up with its last valid time
    {
        Polynomial zsq;
        zsq.dim = 3;
        zsq.terms = {{{0, 0, 2}, 1.0}};
        bool ok = false;
        double last = 0.0;
        try {
            integrate_isotopy(ContactChart::darboux(1), fields::polynomial(zsq, "z^2"),
                              Point{0.0, 0.0, 2.0}, {0.0, 1.0}, 1e-3);
        } catch (const BlowUpError& e) {
            last = e.last_valid_time();
            ok = last > 0.3 && last <= 0.55;
        }
        add_check(report, "flows/blow-up-detection", last, 0.5, ok,
                  "dz/dt = z^2 from z=2 escapes near t=1/2 and is reported");
    }

    // smooth truncation: band structure, proximity, and slope consistency
    {
        Rng r = rng.fork(4);
        double worst_band = 0.0, worst_near = 0.0, worst_slope = 0.0;
        for (int n : {3, 10}) {
            for (int rep = 0; rep < 100; ++rep) {
                const double s = r.uniform(-2.0, 2.0);
                const double b = smooth_truncation(s, n);
                if (std::abs(s) >= 1.0 / n) worst_band = std::max(worst_band, std::abs(b - s));
                if (std::abs(s) <= 0.5 / n) worst_band = std::max(worst_band, std::abs(b));
                worst_near = std::max(worst_near, std::abs(b - s) - 1.0 / n);
                const double fd = (smooth_truncation(s + 1e-6, n) -
                                   smooth_truncation(s - 1e-6, n)) /
                                  2e-6;
                worst_slope =
                    std::max(worst_slope, std::abs(fd - smooth_truncation_slope(s, n)));
            }
        }
        add_dev(report, "flows/truncation-band", worst_band, 0.0,
                "identity outside 1/n, zero inside 1/(2n)");
        add_check(report, "flows/truncation-proximity", worst_near, 0.0,
                  worst_near <= 0.0, "|beta_n(s) - s| <= 1/n everywhere");
        add_dev(report, "flows/truncation-slope", worst_slope, 1e-6,
                "analytic slope against central differences");
    }

    // transition generator reproduces the relative flow
    {
        const ContactChart chart = ContactChart::darboux(1);
        const ScalarField g = fields::oscillating_bump(2);
        const ScalarField h = fields::scale(fields::oscillating_bump(2), 0.4);
        const ScalarField trans = transition_hamiltonian(chart, g, h, config.flow_step);
        const Point p{0.3, -0.2, 0.1};
        const EndState via_trans =
            integrate_endpoint(chart, trans, p.coords, 0.0, 1.0, 1e-2);
        const Flow fg(chart, g, config.flow_step);
        const Flow fh(chart, h, config.flow_step);
        const Eigen::VectorXd direct = fg.raw(-1.0, fh.raw(1.0, p.coords).coords).coords;
        add_dev(report, "flows/transition-generator",
                (via_trans.coords - direct).cwiseAbs().maxCoeff(), 1e-5,
                "flow of the transition field vs composing the two flows");
    }

    finish_report(report, t0);
    return report;
}

RunReport cmd_lifts(const ExperimentConfig& config) {
    const auto t0 = Clock::now();
    RunReport report = start_report("lifts", config);
    Rng rng(config.seed);

    // sign calibration of the cone bracket
    {
        const int s = symp_bracket_sign();
        add_check(report, "lifts/bracket-sign", static_cast<double>(s), 1.0,
                  s == 1 || s == -1,
                  s == 1 ? "convention omega(X_A, .) = -dA selected"
                         : "convention omega(X_A, .) = +dA selected");
    }

    // lifted field agrees with the cone-side Hamiltonian field of the lift
    {
        Rng r = rng.fork(1);
        const ContactChart base = ContactChart::darboux(1);
        const ContactChart symp = ContactChart::symplectization(base);
        double worst = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            const ScalarField f = fields::polynomial(
                fields::random_polynomial(r, 3, 3, -2.0, 2.0), "F");
            Eigen::VectorXd hat(4);
            hat.head(3) = r.vector(3, -1.0, 1.0);
            hat[3] = r.uniform(-1.0, 1.0);
            const Point hp(hat);
            const Eigen::VectorXd built = lifted_field_at(symp, f, hp).components;
            const Eigen::VectorXd solved =
                symp_field_at(symp, lift_function(f), hp).components;
            worst = std::max(worst, (built - solved).cwiseAbs().maxCoeff() /
                                        (1.0 + built.cwiseAbs().maxCoeff()));
        }
        add_dev(report, "lifts/lifted-field-consistency", worst, 1e-8,
                "direct lift vs solving for the weighted function's field");
    }

    // the lifted time-t map preserves the cone symplectic form
    {
        Rng r = rng.fork(2);
        const ContactChart symp =
            ContactChart::symplectization(ContactChart::darboux(1));
        const LiftedMap map(symp, fields::oscillating_bump(2), 0.5, config.flow_step);
        std::vector<Point> pts;
        for (int s = 0; s < 3; ++s) pts.push_back(random_point(r, 4, -0.5, 0.5));
        const SymplecticCheck check =
            verify_lift_map_symplectic(symp, map, pts, kDefaultPushforwardStep, 1e-6);
        add_dev(report, "lifts/lifted-map-symplectic", check.max_residual, check.tol,
                "finite-difference pullback of the cone form along the lifted flow");
    }

    // coisotropy correspondence between a patch and its cylinder in the cone
    for (const auto& name : fixture_names()) {
        const Fixture fx = make_fixture(name);
        const ContactChart symp = ContactChart::symplectization(fx.chart);
        const CorrespondenceReport corr = symp_coisotropy_correspondence_check(
            symp, fx.patch, {-0.4, 0.0, 0.8}, config.tol);
        double worst = 0.0;
        for (const auto& rec : corr.records)
            worst = std::max(worst,
                             std::max(rec.projected_vs_base, rec.base_vs_projected));
        add_check(report, "lifts/correspondence/" + name, worst, config.tol, corr.pass,
                  "orthogonal subspaces and verdicts agree across the cone");
    }

    // cost comparison inside a finite cone window, and the window alarm
    {
        const Fixture fx = make_fixture("legendrian-axis");
        const ContactChart symp = ContactChart::symplectization(fx.chart);
        const ScalarField h = fields::oscillating_bump(2);
        const CostBoundReport bound =
            lifted_cost_bound_check(symp, fx.patch, h, 3.0, 20, config.flow_step);
        const bool ok = bound.window_ok && bound.pointwise_ok &&
                        bound.lifted_integral <=
                            bound.window_factor * bound.base_integral + 1e-9;
        add_check(report, "lifts/cost-window-bound", bound.lifted_integral,
                  bound.window_factor * bound.base_integral, ok,
                  "lifted orbit cost stays under e^R times the base cost");

        bool threw = false;
        try {
            lifted_cost_bound_check(symp, fx.patch, h, 0.4, 20, config.flow_step);
        } catch (const WindowViolationError&) {
            threw = true;
        }
        add_check(report, "lifts/window-violation", threw ? 0.0 : 1.0, 0.0, threw,
                  "orbits leaving the theta window raise the window alarm");
    }

    // planar lifts on the bundle chart
    {
        Rng r = rng.fork(3);
        const ContactChart preq = ContactChart::prequantization();
        double worst = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            const ScalarField f = fields::polynomial(
                fields::random_polynomial(r, 2, 3, -2.0, 2.0), "f");
            const Point a{r.uniform(-1.0, 1.0), r.uniform(-1.0, 1.0),
                          r.uniform(0.0, 1.0)};
            const Eigen::VectorXd lift = prequant_lift_field(preq, f, a).components;
            const Point base{a[0], a[1]};
            const Eigen::VectorXd g = f.gradient(0.0, base);
            const double vertical = f.value(0.0, base) - a[0] * g[0];
            const double dev = std::max(
                {std::abs(lift[0] + g[1]), std::abs(lift[1] - g[0]),
                 std::abs(lift[2] - vertical)});
            worst = std::max(worst, dev / (1.0 + std::abs(f.value(0.0, base)) + g.norm()));
        }
        add_dev(report, "lifts/bundle-lift-field", worst, 1e-10,
                "horizontal-plus-vertical lift against the planar formulas");
    }

    // fiberwise coisotropy pairing for the planar fixtures
    for (const auto& name : planar_fixture_names()) {
        const SubmanifoldPatch patch = make_planar_fixture(name);
        const PairedVerdict pv =
            prequant_coisotropy_check(ContactChart::prequantization(), patch, config.tol);
        const bool expected = name != "point2d";
        add_check(report, "lifts/bundle-coisotropy/" + name,
                  pv.base.max_inclusion_residual, config.tol,
                  pv.agree && pv.base.pass == expected,
                  std::string("planar verdict ") +
                      (pv.base.pass ? "coisotropic" : "non-coisotropic") +
                      ", preimage verdict matches");
    }

    finish_report(report, t0);
    return report;
}

RunReport cmd_norms(const ExperimentConfig& config) {
    const auto t0 = Clock::now();
    RunReport report = start_report("norms", config);
    Rng rng(config.seed);
    const ContactChart circle = ContactChart::circle();
    const ContactChart darboux = ContactChart::darboux(1);

    // exact circle distances
    {
        const double d1 = circle_delta(Point{0.0}, Point{0.25}).value;
        const double d2 = circle_delta(Point{0.0}, Point{0.75}).value;
        const double d3 = circle_delta(Point{0.4}, Point{0.4}).value;
        add_dev(report, "norms/circle-delta", std::max({std::abs(d1 - 0.25),
                                                        std::abs(d2 - 0.25), d3}),
                0.0, "closed-form angular distances, including the wrap");
    }

    // the straight rotation saturates the lower bound
    {
        double worst = 0.0;
        for (double c : {0.25, -0.3}) {
            const CircleBoundReport r =
                circle_lower_bound_check(fields::constant(1, c), Point{0.1},
                                         config.time_steps, config.step);
            worst = std::max(worst, std::abs(r.path_integral - r.distance));
        }
        add_dev(report, "norms/rotation-equality", worst, 1e-9,
                "constant rotations meet the angular distance exactly");
    }

    // random paths never undercut the angular distance
    {
        Rng r = rng.fork(1);
        double min_margin = std::numeric_limits<double>::infinity();
        bool all_pass = true;
        // step chosen so the trapezoid error of |H| (kinked at sign changes)
        // stays well under the 1e-6 slack for this coefficient range
        const double step = 2e-4;
        for (int rep = 0; rep < 30; ++rep) {
            const double mean = r.uniform(-0.5, 0.5);
            const double a1 = r.uniform(-0.3, 0.3);
            const double b1 = r.uniform(-0.3, 0.3);
            const double start = r.uniform(0.0, 1.0);
            const ScalarField h = fields::circle_trig(mean, {a1}, {b1});
            const CircleBoundReport cb =
                circle_lower_bound_check(h, Point{start}, config.time_steps, step);
            min_margin = std::min(min_margin, cb.path_integral - cb.distance);
            all_pass = all_pass && cb.pass;
        }
        add_check(report, "norms/circle-lower-bound", min_margin, -1e-6, all_pass,
                  "30 seeded trigonometric paths dominate the endpoint distance");
    }

    // constants on the circle: path cost |c|, oscillation cost 0
    {
        const ScalarField c7 = fields::constant(1, 0.7);
        const GridSpec grid = default_grid(circle, c7, 101);
        const double she =
            shelukhin_cost(circle, c7, grid, config.time_steps).value;
        const double zero =
            shelukhin_cost(circle, fields::constant(1, 0.0), grid, config.time_steps)
                .value;
        const double rs = rs_cost(circle, c7, grid, config.time_steps, 11, 1e-2).value;
        const double mod =
            modified_cost(circle, c7, grid, config.time_steps, 11, 1e-2).value;
        const double worst = std::max({std::abs(she - 0.7), zero, rs,
                                       std::abs(mod - 0.7)});
        add_dev(report, "norms/circle-constants", worst, 1e-12,
                "path cost |c|, zero oscillation cost, strict path leaves the "
                "modified cost at |c|");
    }

    // sweeping an unbounded field without a support box is refused
    {
        bool threw = false;
        try {
            default_grid(darboux, fields::coordinate(3, 0, "x1"), 51);
        } catch (const InputError&) {
            threw = true;
        }
        add_check(report, "norms/unbounded-rejected", threw ? 0.0 : 1.0, 0.0, threw,
                  "grid sweeps require an extent box on non-compact charts");
    }

    // orbit costs with known answers
    {
        PatchTable origin_table;
        origin_table.name = "origin";
        origin_table.intrinsic_dim = 0;
        Polynomial zero3;
        zero3.dim = 0;
        for (int i = 0; i < 3; ++i) origin_table.param.push_back(zero3);
        const SubmanifoldPatch origin = patch_from_table(origin_table);
        const double fixed =
            orbit_cost(darboux, fields::oscillating_bump(2), origin,
                       config.time_steps, config.flow_step)
                .value;

        PatchTable far_table;
        far_table.name = "far-point";
        far_table.intrinsic_dim = 0;
        Polynomial c25;
        c25.dim = 0;
        c25.terms = {{{}, 2.5}};
        far_table.param = {c25, zero3, zero3};
        const SubmanifoldPatch far = patch_from_table(far_table);
        const double away =
            orbit_cost(darboux, fields::oscillating_bump(1), far, config.time_steps,
                       config.flow_step)
                .value;

        PatchTable cpt;
        cpt.name = "circle-pt";
        cpt.intrinsic_dim = 0;
        Polynomial c01;
        c01.dim = 0;
        c01.terms = {{{}, 0.1}};
        cpt.param = {c01};
        const SubmanifoldPatch cp = patch_from_table(cpt);
        const ScalarField rot = fields::constant(1, 0.25);
        const double rot_cost =
            orbit_cost(circle, rot, cp, config.time_steps, config.flow_step).value;
        const Point end =
            integrate_isotopy(circle, rot, Point{0.1}, {0.0, 1.0}, config.flow_step)
                .endpoint();
        const double worst =
            std::max({fixed, away, std::abs(rot_cost - 0.25),
                      circle_delta(end, Point{0.35}).value});
        add_dev(report, "norms/orbit-costs", worst, 1e-9,
                "fixed origin and off-support orbits cost zero; the rotation "
                "costs |c| and lands at p+c");
    }

    // the oscillating family: the table the two norms disagree on
    {
        const std::vector<NoncompRow> rows =
            noncomparability_table(config.k_list, config.norm_params());
        double worst_she = 0.0, worst_rs = 0.0, worst_ratio = 0.0, worst_mod = 0.0,
               worst_g = 0.0;
        bool monotone = true;
        double prev_ratio = 0.0;
        std::string log_note;
        for (const auto& row : rows) {
            const double k = row.k;
            worst_she = std::max(worst_she, std::abs(row.shelukhin * k - 1.0));
            worst_rs =
                std::max(worst_rs, 0.95 * 2.0 * std::exp(k) / k - row.rs); // <= 0 wanted
            const double ratio = row.rs / row.shelukhin;
            worst_ratio = std::max(worst_ratio, std::exp(k) - ratio); // <= 0 wanted
            worst_mod = std::max(worst_mod, std::abs(row.modified - (1.0 / k + k)) /
                                                (1.0 / k + k));
            worst_g = std::max(worst_g, std::abs(row.g1_at_origin + k) / k);
            if (ratio <= prev_ratio) monotone = false;
            prev_ratio = ratio;
            if (row.k > 8) {
                char buf[64];
                std::snprintf(buf, sizeof buf, " ln rs(k=%d)=%.6g", row.k, row.rs_log);
                log_note += buf;
            }
        }
        add_dev(report, "norms/family-shelukhin", worst_she, 0.02,
                "k * shelukhin within 2% of 1");
        add_check(report, "norms/family-rs", worst_rs, 0.0, worst_rs <= 0.0,
                  "rs clears 95% of 2e^k/k for every k" + log_note);
        add_check(report, "norms/family-ratio", worst_ratio, 0.0,
                  worst_ratio <= 0.0 && monotone,
                  "rs/shelukhin clears e^k and grows monotonically");
        add_dev(report, "norms/family-modified", worst_mod, 0.05,
                "modified cost within 5% of 1/k + k");
        add_dev(report, "norms/family-origin-factor", worst_g, 1e-6,
                "g at time 1 at the origin equals -k, relative");

        if (!config.out_dir.empty()) {
            std::filesystem::create_directories(config.out_dir);
            const std::string csv = noncomparability_csv(rows);
            std::ofstream out(std::filesystem::path(config.out_dir) /
                                  "noncomparability.csv",
                              std::ios::binary);
            out << csv;
            add_check(report, "norms/csv-written", static_cast<double>(rows.size()),
                      static_cast<double>(config.k_list.size()),
                      out.good() && rows.size() == config.k_list.size(),
                      "noncomparability.csv emitted");
        }
    }

    // certificate-level symmetry: the reversed path costs the same
    {
        const ScalarField h = fields::circle_trig(0.3, {0.25, -0.1}, {0.2});
        const GridSpec grid = default_grid(circle, h, 201);
        const double fwd = shelukhin_cost(circle, h, grid, 64).value;
        const double rev =
            shelukhin_cost(circle, fields::reversed_path(h, 1.0), grid, 64).value;
        add_dev(report, "norms/reversal-symmetry", fwd - rev, 1e-9,
                "time-reversed path has identical cost");
    }

    // certificate-level triangle inequality for concatenated paths
    {
        const ScalarField h1 = fields::circle_trig(0.3, {0.2}, {-0.15});
        const ScalarField h2 = fields::circle_trig(-0.2, {0.1}, {0.25});
        const GridSpec grid = default_grid(circle, h1, 201);
        const int steps = 64;
        const double c1 = shelukhin_cost(circle, h1, grid, steps).value;
        const double c2 = shelukhin_cost(circle, h2, grid, steps).value;
        const double cc =
            shelukhin_cost(circle, fields::concat_paths(h1, h2), grid, steps).value;
        // the time trapezoid can overshoot by the seam jump over 2*steps
        const double slack = (c1 + c2) / steps;
        add_check(report, "norms/concat-triangle", cc - (c1 + c2), slack,
                  cc <= c1 + c2 + slack,
                  "concatenated path cost within quadrature slack of the sum");
    }

    // conjugation: strict maps preserve the cost, scalings sandwich it
    {
        Box conj_box;
        conj_box.lo = Eigen::Vector3d(-1.25, -1.25, -2.5);
        conj_box.hi = Eigen::Vector3d(1.25, 1.25, 2.5);
        const GridSpec grid{conj_box, 11};
        const ScalarField h = fields::oscillating_bump(1);

        const ConjugationReport ident = conjugation_cost_check(
            darboux, h, fields::constant(3, 0.0), grid, config.time_steps, 1e-9, 2e-2);
        add_check(report, "norms/conjugation-identity", ident.identity_rel_dev, 1e-9,
                  ident.pass, "conjugating by the identity changes nothing");

        const ConjugationReport reeb = conjugation_cost_check(
            darboux, h, fields::constant(3, 0.5), grid, config.time_steps, 1e-9, 2e-2);
        add_check(report, "norms/conjugation-strict", reeb.identity_rel_dev, 1e-9,
                  reeb.pass,
                  "a Reeb translation is strict: equal costs, unit sandwich");

        Polynomial zpol;
        zpol.dim = 3;
        zpol.terms = {{{0, 0, 1}, 0.1}};
        const ConjugationReport scaling = conjugation_cost_check(
            darboux, h, fields::polynomial(zpol, "0.1z"), grid, config.time_steps,
            0.05, 2e-2);
        add_check(report, "norms/conjugation-scaling", scaling.identity_rel_dev,
                  scaling.rel_tol, scaling.pass,
                  "the scaling flow rescales costs inside the e^{+-f} sandwich");
    }

    finish_report(report, t0);
    return report;
}

RunReport cmd_all(const ExperimentConfig& config) {
    const auto t0 = Clock::now();
    RunReport report = start_report("all", config);
    for (RunReport part :
         {cmd_coisotropy(config), cmd_brackets(config), cmd_flows(config),
          cmd_lifts(config), cmd_norms(config)}) {
        for (auto& check : part.checks) report.checks.push_back(std::move(check));
    }
    finish_report(report, t0);
    return report;
}

void print_report(std::ostream& os, const RunReport& report) {
    os << "== contactlab " << report.command << " ==  (seed " << report.seed << ")\n";
    char buf[160];
    for (const auto& c : report.checks) {
        std::snprintf(buf, sizeof buf, "[%s] %-42s measured=%-13.6g bound=%-10.6g ",
                      c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured, c.bound);
        os << buf << c.detail << "\n";
    }
    std::snprintf(buf, sizeof buf, "%zu checks, %d failed, %.2f s", report.checks.size(),
                  report.failed(), report.wall_seconds);
    os << buf << "\n";
}

void write_run_files(const RunReport& report, const std::string& out_dir) {
    if (out_dir.empty()) return;
    std::filesystem::create_directories(out_dir);
    json checks = json::array();
    for (const auto& c : report.checks)
        checks.push_back(json{{"name", c.name},
                              {"pass", c.pass},
                              {"measured", c.measured},
                              {"bound", c.bound},
                              {"detail", c.detail}});
    const json j{{"command", report.command},
                 {"seed", report.seed},
                 {"pass", report.pass()},
                 {"wall_seconds", report.wall_seconds},
                 {"config", json::parse(report.config_echo)},
                 {"checks", checks}};
    std::ofstream out(std::filesystem::path(out_dir) / ("run-" + report.command + ".json"),
                      std::ios::binary);
    out << j.dump(2) << "\n";
}

} // namespace contactlab
