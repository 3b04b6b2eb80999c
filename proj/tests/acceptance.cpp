// End-to-end acceptance suite.  Each numbered block checks one headline
// claim of the library against closed forms or independently derived
// values, times itself against a wall-clock budget, and prints exactly one
// [PASS]/[FAIL] line.  The process exits nonzero if any block fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "contactlab/lifts.hpp"
#include "contactlab/norms.hpp"
#include "contactlab/rng.hpp"

using namespace contactlab;

namespace {

using Clock = std::chrono::steady_clock;

bool g_all_pass = true;

void run(int index, const std::string& name, double budget_seconds,
         const std::function<bool(std::string&)>& body) {
    const auto t0 = Clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
        ok = false;
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_budget = seconds <= budget_seconds;
    const bool pass = ok && in_budget;
    g_all_pass = g_all_pass && pass;
    std::printf("[%s] %d %-28s %s  (%.2f s, budget %.0f s%s)\n", pass ? "PASS" : "FAIL",
                index, name.c_str(), detail.c_str(), seconds, budget_seconds,
                in_budget ? "" : " EXCEEDED");
    std::fflush(stdout);
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// closed-form Darboux field:
//   dx_i = -H_{y_i},  dy_i = H_{x_i} + y_i H_z,  dz = H - sum y_i H_{y_i}
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

// orthonormal basis of ker alpha at p on a Darboux chart
Eigen::MatrixXd xi_basis(const ContactChart& chart, const Point& p) {
    const int n = chart.pairs();
    const int d = chart.dimension();
    Eigen::MatrixXd cols = Eigen::MatrixXd::Zero(d, 2 * n);
    for (int i = 0; i < n; ++i) {
        cols(i, i) = 1.0;
        cols(d - 1, i) = p[n + i];
        cols(n + i, n + i) = 1.0;
    }
    return orthonormal_columns(cols);
}

double field_scale(const ScalarField& f, const Point& p) {
    return 1.0 + std::abs(f.value(0.0, p)) + f.gradient(0.0, p).norm();
}

bool closed_form_fields(std::string& detail) {
    double worst = 0.0;
    for (int n : {1, 2}) {
        const ContactChart chart = ContactChart::darboux(n);
        const int d = chart.dimension();
        Rng rng(101 + n);
        for (int block = 0; block < 50; ++block) {
            const ScalarField h =
                fields::polynomial(fields::random_polynomial(rng, d, 3, -1.0, 1.0));
            for (int rep = 0; rep < 20; ++rep) {
                const Point p(rng.vector(d, -1.0, 1.0));
                const TangentVector solved = contact_field_at(chart, h, 0.0, p);
                const Eigen::VectorXd closed = darboux_closed_form(chart, h, p);
                worst = std::max(worst,
                                 (solved.components - closed).cwiseAbs().maxCoeff());
            }
        }
    }
    const ContactChart d1 = ContactChart::darboux(1);
    const TangentVector xz =
        contact_field_at(d1, fields::coordinate(3, 2, "z"), 0.0, Point{0.0, 0.0, 0.0});
    const double origin_dev = xz.components.cwiseAbs().maxCoeff();
    detail = "max field deviation " + num(worst) + " (tol 1e-12), |X_z(0)| = " +
             num(origin_dev);
    return worst <= 1e-12 && origin_dev == 0.0;
}

bool conformal_factor_at_origin(std::string& detail) {
    double worst = 0.0;
    const ContactChart chart = ContactChart::darboux(1);
    const Eigen::VectorXd origin = Eigen::VectorXd::Zero(3);
    for (int k : {1, 2, 4, 8}) {
        const ScalarField h = fields::oscillating_bump(k);
        for (double t : {0.25, 0.5, 1.0}) {
            const EndState end = integrate_endpoint(chart, h, origin, 0.0, t);
            worst = std::max(worst, std::abs(end.conformal + k * t) / (k * t));
        }
    }
    detail = "max relative deviation of g_t(0) from -kt: " + num(worst) + " (tol 1e-6)";
    return worst <= 1e-6;
}

bool family_cost_table(std::string& detail) {
    const std::vector<int> ks{1, 2, 3, 4, 5, 6, 7, 8};
    const std::vector<NoncompRow> rows =
        noncomparability_table(ks, NormParams{201, 11, 32, 5e-3});
    bool ok = rows.size() == ks.size();
    double worst_sh = 0.0, worst_ratio_margin = 1e300;
    for (const NoncompRow& row : rows) {
        const double k = row.k;
        const double shk = row.shelukhin * k;
        worst_sh = std::max(worst_sh, std::abs(shk - 1.0));
        ok = ok && shk >= 0.98 && shk <= 1.02;
        ok = ok && row.rs >= 0.95 * 2.0 * std::exp(k) / k;
        const double ratio = row.rs / row.shelukhin;
        worst_ratio_margin = std::min(worst_ratio_margin, ratio / std::exp(k));
        ok = ok && ratio >= std::exp(k);
    }
    detail = "k=1..8: |shelukhin*k - 1| <= " + num(worst_sh) +
             ", min (rs/shelukhin)/e^k = " + num(worst_ratio_margin);
    return ok;
}

bool circle_distance_chain(std::string& detail) {
    Rng rng(104);
    // the exact closed form, bit for bit
    for (int rep = 0; rep < 50; ++rep) {
        const double p = rng.uniform(0.0, 1.0);
        const double q = rng.uniform(0.0, 1.0);
        const double direct = std::abs(q - p);
        const double expected = std::min(direct, 1.0 - direct);
        if (circle_delta(Point{p}, Point{q}).value != expected) {
            detail = "closed-form mismatch at p=" + num(p) + " q=" + num(q);
            return false;
        }
    }
    // constant rotations achieve the distance
    double worst_eq = 0.0;
    for (double c : {0.35, -0.2, 0.1, 0.5}) {
        const CircleBoundReport r =
            circle_lower_bound_check(fields::constant(1, c), Point{0.2}, 32, 1e-3);
        worst_eq = std::max(worst_eq, std::abs(r.path_integral - r.distance));
        if (!r.pass || worst_eq > 1e-9) {
            detail = "rotation certificate missed equality by " + num(worst_eq);
            return false;
        }
    }
    // random paths dominate the endpoint distance; single-harmonic fields
    // with bounded coefficients keep the |H| quadrature error below the
    // slack at this step
    double worst_margin = 1e300;
    for (int rep = 0; rep < 100; ++rep) {
        const double mean = rng.uniform(-0.5, 0.5);
        const double a1 = rng.uniform(-0.3, 0.3);
        const double b1 = rng.uniform(-0.3, 0.3);
        const double start = rng.uniform(0.0, 1.0);
        const ScalarField h = fields::circle_trig(mean, {a1}, {b1});
        const CircleBoundReport r = circle_lower_bound_check(h, Point{start}, 32, 2e-4);
        worst_margin = std::min(worst_margin, r.path_integral - r.distance);
        if (!r.pass) {
            detail = "path integral fell " + num(r.distance - r.path_integral) +
                     " short of the distance";
            return false;
        }
    }
    detail = "closed form exact; rotation equality to " + num(worst_eq) +
             "; min path margin " + num(worst_margin);
    return true;
}

bool fixture_classification(std::string& detail) {
    int misclassified = 0;
    double worst_residual = 0.0;
    for (const std::string& name : fixture_names()) {
        const Fixture fx = make_fixture(name);
        const CoisotropyVerdict cv = coisotropy_test(fx.chart, fx.patch, 1e-8);
        const LegendrianVerdict lv = legendrian_test(fx.chart, fx.patch, 1e-8);
        if (cv.pass != fx.expect_coisotropic) ++misclassified;
        if (lv.pass != fx.expect_legendrian) ++misclassified;
        if (fx.expect_coisotropic)
            for (const CoisotropyRecord& r : cv.records)
                worst_residual = std::max(worst_residual, r.inclusion_residual);
    }
    detail = std::to_string(misclassified) + " misclassifications over " +
             std::to_string(fixture_names().size()) +
             " fixtures; max coisotropic residual " + num(worst_residual);
    return misclassified == 0;
}

bool vanishing_ideal_brackets(std::string& detail) {
    Rng rng(106);
    double worst_coiso = 0.0;    // should stay tiny
    double best_non = 1e300;     // should stay large
    for (const std::string& name : fixture_names()) {
        const Fixture fx = make_fixture(name);
        const std::vector<ScalarField>& defs = fx.patch.defining_fields;
        if (defs.empty()) continue;
        const int d = fx.patch.ambient_dim;
        auto combo = [&](Rng& r) {
            ScalarField acc = fields::constant(d, 0.0);
            for (const ScalarField& def : defs) {
                const ScalarField coeff =
                    fields::polynomial(fields::random_polynomial(r, d, 2, -1.0, 1.0));
                acc = fields::add(acc, fields::multiply(coeff, def));
            }
            return acc;
        };
        double fixture_max = 0.0;
        for (int pair = 0; pair < 100; ++pair) {
            const ScalarField f = combo(rng);
            const ScalarField g = combo(rng);
            for (const Eigen::VectorXd& u : fx.patch.sample_grid) {
                const Point p = fx.patch.at(u);
                const double scale = field_scale(f, p) * field_scale(g, p);
                const double b = contact_bracket_at(fx.chart, f, g, p);
                fixture_max = std::max(fixture_max, std::abs(b) / scale);
            }
        }
        const bool vanished = fixture_max <= 1e-6;
        if (vanished != fx.expect_coisotropic) {
            detail = "fixture " + name + ": bracket max " + num(fixture_max) +
                     " disagrees with the coisotropy verdict";
            return false;
        }
        if (fx.expect_coisotropic)
            worst_coiso = std::max(worst_coiso, fixture_max);
        else
            best_non = std::min(best_non, fixture_max);
    }
    detail = "coisotropic max " + num(worst_coiso) + " <= 1e-6 < non-coisotropic min " +
             num(best_non);
    return true;
}

bool lift_correspondences(std::string& detail) {
    const std::vector<double> thetas{-0.4, 0.0, 0.8};
    double worst_sine = 0.0;
    for (const std::string& name : fixture_names()) {
        const Fixture fx = make_fixture(name);
        const ContactChart symp = ContactChart::symplectization(fx.chart);
        const CorrespondenceReport rep =
            symp_coisotropy_correspondence_check(symp, fx.patch, thetas, 1e-8);
        for (const CorrespondenceRecord& r : rep.records) {
            worst_sine = std::max(worst_sine,
                                  std::max(r.projected_vs_base, r.base_vs_projected));
            if (r.base_coisotropic != fx.expect_coisotropic ||
                r.lifted_coisotropic != fx.expect_coisotropic) {
                detail = "verdict mismatch on " + name;
                return false;
            }
        }
        if (!rep.pass) {
            detail = "correspondence failed on " + name + " (max sine " +
                     num(worst_sine) + ")";
            return false;
        }
    }

    // bundle-side verdict agreement
    for (const std::string& name : planar_fixture_names()) {
        const PairedVerdict pv = prequant_coisotropy_check(
            ContactChart::prequantization(), make_planar_fixture(name), 1e-8);
        if (!pv.agree) {
            detail = "bundle verdicts disagree on " + name;
            return false;
        }
    }

    // weighted-lift bracket identity on the cone
    const ContactChart base = ContactChart::darboux(1);
    const ContactChart symp = ContactChart::symplectization(base);
    Rng rng(107);
    double worst_lift = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const ScalarField f =
            fields::polynomial(fields::random_polynomial(rng, 3, 2, -1.0, 1.0));
        const ScalarField g =
            fields::polynomial(fields::random_polynomial(rng, 3, 2, -1.0, 1.0));
        const Point p(rng.vector(3, -0.8, 0.8));
        const double theta = rng.uniform(-1.0, 1.0);
        Eigen::VectorXd hat(4);
        hat.head(3) = p.coords;
        hat[3] = theta;
        const double lifted = symp_bracket_at(symp, lift_function(f), lift_function(g),
                                              Point(hat));
        const double contact = contact_bracket_antisym_at(base, f, g, p);
        const double scale =
            std::exp(theta) * field_scale(f, p) * field_scale(g, p);
        worst_lift = std::max(worst_lift,
                              std::abs(lifted - std::exp(theta) * contact) / scale);
    }
    if (worst_lift > 1e-6) {
        detail = "lift bracket identity deviation " + num(worst_lift) + " > 1e-6";
        return false;
    }

    // pullback brackets on the bundle
    const ContactChart preq = ContactChart::prequantization();
    double worst_preq = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        const ScalarField f =
            fields::polynomial(fields::random_polynomial(rng, 2, 3, -1.0, 1.0));
        const ScalarField g =
            fields::polynomial(fields::random_polynomial(rng, 2, 3, -1.0, 1.0));
        std::vector<Point> samples;
        for (int i = 0; i < 10; ++i) samples.push_back(Point(rng.vector(3, -0.9, 0.9)));
        const BracketCheck check = prequant_bracket_check(preq, f, g, samples, 1e-8);
        worst_preq = std::max(worst_preq, check.max_deviation);
        if (!check.pass) {
            detail = "bundle bracket deviation " + num(check.max_deviation) + " > 1e-8";
            return false;
        }
    }
    detail = "sines <= " + num(worst_sine) + "; lift bracket dev " + num(worst_lift) +
             "; bundle dev " + num(worst_preq);
    return true;
}

bool naturality_and_factor_algebra(std::string& detail) {
    const ContactChart chart = ContactChart::darboux(1);
    const std::vector<ScalarField> generators{
        fields::oscillating_bump(1), fields::oscillating_bump(2),
        fields::coordinate(3, 2, "z"), fields::constant(3, 0.7)};
    Rng rng(108);

    // bracket naturality under fifty conjugating flows
    double worst_nat = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const ScalarField& h_psi = generators[rep % generators.size()];
        const ScalarField f =
            fields::polynomial(fields::random_polynomial(rng, 3, 2, -1.0, 1.0));
        const ScalarField g =
            fields::polynomial(fields::random_polynomial(rng, 3, 2, -1.0, 1.0));
        std::vector<Point> samples;
        for (int s = 0; s < 2; ++s) samples.push_back(Point(rng.vector(3, -0.6, 0.6)));
        const NaturalityReport rep_nat =
            verify_conformal_naturality(chart, h_psi, f, g, samples, 1e-5);
        worst_nat = std::max(worst_nat, rep_nat.max_deviation);
        if (!rep_nat.pass) {
            detail = "naturality deviation " + num(rep_nat.max_deviation) + " > 1e-5";
            return false;
        }
    }

    // conformal factors compose along the flow and cancel with the inverse
    double worst_alg = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const ScalarField& base = generators[rep % generators.size()];
        const ScalarField h = fields::scale(base, rng.uniform(0.5, 1.5));
        const Flow flow(chart, h);
        const Point x(rng.vector(3, -0.6, 0.6));
        const double s = rng.uniform(0.2, 0.5);
        const double t = rng.uniform(0.2, 0.5);
        const FlowSample mid = flow.at(s, x);
        const FlowSample tail = flow.at(t, mid.point);
        const FlowSample full = flow.at(s + t, x);
        const double additivity =
            std::abs(full.conformal - (mid.conformal + tail.conformal));
        const FlowSample back = flow.at(-s, mid.point);
        const double cancel = std::abs(mid.conformal + back.conformal) +
                              (back.point.coords - x.coords).cwiseAbs().maxCoeff();
        worst_alg = std::max(worst_alg, std::max(additivity, cancel));
    }
    if (worst_alg > 1e-5) {
        detail = "conformal factor algebra deviation " + num(worst_alg) + " > 1e-5";
        return false;
    }
    detail = "naturality dev " + num(worst_nat) + "; factor algebra dev " +
             num(worst_alg) + " (tol 1e-5)";
    return true;
}

bool subspace_and_integrator_properties(std::string& detail) {
    // dalpha-complements: dimension count and double complement
    Rng rng(109);
    for (int n : {1, 2}) {
        const ContactChart chart = ContactChart::darboux(n);
        const int d = chart.dimension();
        for (int rep = 0; rep < 15; ++rep) {
            const Point p(rng.vector(d, -1.5, 1.5));
            const Eigen::MatrixXd xi = xi_basis(chart, p);
            const int k = rng.uniform_int(1, 2 * n - 1);
            Eigen::MatrixXd raw(d, k);
            for (int j = 0; j < k; ++j) raw.col(j) = xi * rng.vector(2 * n, -1.0, 1.0);
            const Subspace v{p, orthonormal_columns(raw)};
            const Subspace w = dalpha_perp(chart, v);
            const Subspace ww = dalpha_perp(chart, w);
            if (w.dim() != 2 * n - v.dim() || ww.dim() != v.dim() ||
                !subspace_equal(ww.basis, v.basis, 1e-8)) {
                detail = "complement identity failed on darboux:" + std::to_string(n);
                return false;
            }
        }
    }

    // bracket symmetry defect {F,G} + {G,F} = 2(F dG(R) + G dF(R))
    double worst_defect = 0.0;
    for (int n : {1, 2}) {
        const ContactChart chart = ContactChart::darboux(n);
        const int d = chart.dimension();
        for (int rep = 0; rep < 50; ++rep) {
            const ScalarField f =
                fields::polynomial(fields::random_polynomial(rng, d, 2, -1.0, 1.0));
            const ScalarField g =
                fields::polynomial(fields::random_polynomial(rng, d, 2, -1.0, 1.0));
            const Point p(rng.vector(d, -1.0, 1.0));
            const double sum = contact_bracket_at(chart, f, g, p) +
                               contact_bracket_at(chart, g, f, p);
            const double fv = f.value(0.0, p);
            const double gv = g.value(0.0, p);
            const double fr = f.gradient(0.0, p)[d - 1]; // dF(R) on a Darboux chart
            const double gr = g.gradient(0.0, p)[d - 1];
            const double expected = 2.0 * (fv * gr + gv * fr);
            const double scale = field_scale(f, p) * field_scale(g, p);
            worst_defect = std::max(worst_defect, std::abs(sum - expected) / scale);
        }
    }
    if (worst_defect > 1e-8) {
        detail = "symmetry defect deviation " + num(worst_defect) + " > 1e-8";
        return false;
    }

    // fourth-order convergence of the integrator on the scaling flow
    const ContactChart d1 = ContactChart::darboux(1);
    const ScalarField hz = fields::coordinate(3, 2, "z");
    const Point x0{0.3, -0.2, 0.4};
    const double e = std::exp(1.0);
    const Eigen::Vector3d exact(0.3, -0.2 * e, 0.4 * e);
    auto err = [&](double step) {
        const EndState end = integrate_endpoint(d1, hz, x0.coords, 0.0, 1.0, step);
        return (end.coords - exact).cwiseAbs().maxCoeff();
    };
    const double ratio = err(0.05) / err(0.025);
    if (!(ratio >= 6.4)) {
        detail = "integrator convergence ratio " + num(ratio) + " < 6.4";
        return false;
    }
    detail = "complements ok; symmetry defect " + num(worst_defect) +
             "; step-halving error ratio " + num(ratio);
    return true;
}

} // namespace

int main() {
    std::printf("contactlab acceptance suite\n");
    run(1, "closed-form-fields", 1.0, closed_form_fields);
    run(2, "origin-conformal-factor", 10.0, conformal_factor_at_origin);
    run(3, "family-cost-table", 120.0, family_cost_table);
    run(4, "circle-distance-chain", 30.0, circle_distance_chain);
    run(5, "fixture-classification", 10.0, fixture_classification);
    run(6, "vanishing-ideal-brackets", 60.0, vanishing_ideal_brackets);
    run(7, "lift-correspondences", 60.0, lift_correspondences);
    run(8, "naturality-factor-algebra", 120.0, naturality_and_factor_algebra);
    run(9, "subspace-integrator-props", 30.0, subspace_and_integrator_properties);
    std::printf("%s\n", g_all_pass ? "acceptance: all criteria passed"
                                   : "acceptance: FAILURES above");
    return g_all_pass ? 0 : 1;
}
