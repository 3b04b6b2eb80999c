#include "contactlab/lifts.hpp"

#include <algorithm>
#include <cmath>

namespace contactlab {

namespace {

void require_symp(const ContactChart& chart, const char* where) {
    if (chart.kind() != ChartKind::Symplectization)
        throw UnsupportedFormError(std::string(where) + ": chart " + chart.name() +
                                   " is not a symplectization");
}

void require_preq(const ContactChart& chart, const char* where) {
    if (chart.kind() != ChartKind::Prequantization)
        throw UnsupportedFormError(std::string(where) + ": chart " + chart.name() +
                                   " is not the bundle chart");
}

void require_planar(const ScalarField& f, const char* where) {
    if (f.dimension() != 2)
        throw InputError(std::string(where) + ": field '" + f.label() +
                         "' is not a planar (2-coordinate) field");
    if (f.time_dependent())
        throw InputError(std::string(where) + ": field '" + f.label() +
                         "' must be time-independent");
}

} // namespace

ScalarField lift_function(const ScalarField& f) {
    if (f.time_dependent())
        throw InputError("lift_function: field '" + f.label() + "' must be time-independent");
    const int d = f.dimension();
    return ScalarField(
        "lift(" + f.label() + ")", d + 1,
        [f, d](double, const Point& p) {
            return std::exp(p[d]) * f.value(0.0, Point(p.coords.head(d)));
        },
        [f, d](double, const Point& p) -> Eigen::VectorXd {
            const Point base(p.coords.head(d));
            const double w = std::exp(p[d]);
            Eigen::VectorXd g(d + 1);
            g.head(d) = w * f.gradient(0.0, base);
            g[d] = w * f.value(0.0, base);
            return g;
        });
}

Eigen::MatrixXd omega_perp(const Eigen::MatrixXd& omega, const Eigen::MatrixXd& tbasis) {
    // rows of (omega * tbasis)^T are the linear constraints w |-> omega(w, v_k)
    Eigen::MatrixXd constraints = (omega * tbasis).transpose();
    const double cutoff = kRankRelTol * (1.0 + omega.norm());
    return null_space_scaled(constraints, cutoff);
}

namespace {

Eigen::VectorXd symp_field_solve(const ContactChart& symp, const ScalarField& a,
                                 const Point& p, int sign) {
    const int d = symp.dimension();
    if (a.dimension() != d)
        throw InputError("symp field: field '" + a.label() + "' has dimension " +
                         std::to_string(a.dimension()) + ", chart needs " + std::to_string(d));
    const Eigen::MatrixXd omega = symp.omega_matrix(p);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(omega, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv[sv.size() - 1] <= kRankRelTol * sv[0])
        throw DegenerateChartError("symp field: omega matrix is numerically singular on " +
                                   symp.name());
    const Eigen::VectorXd rhs = sign * a.gradient(0.0, p);
    const Eigen::VectorXd x = svd.solve(rhs);
    const double resid = (omega * x - rhs).cwiseAbs().maxCoeff();
    const double bound = kSolveResidualRelTol * (1.0 + rhs.norm()) * (1.0 + omega.norm());
    if (!(resid <= bound))
        throw InconsistentSystemError("symp field: solve residual " + std::to_string(resid) +
                                      " exceeds bound for field '" + a.label() + "'");
    return x;
}

int calibrate_symp_bracket_sign() {
    const ContactChart base = ContactChart::darboux(1);
    const ContactChart symp = ContactChart::symplectization(base);
    const ScalarField x1 = fields::coordinate(3, 0, "x1");
    const ScalarField y1 = fields::coordinate(3, 1, "y1");
    const ScalarField lx = lift_function(x1);
    const ScalarField ly = lift_function(y1);
    const Point origin_base{0.0, 0.0, 0.0};
    const Point origin_hat{0.0, 0.0, 0.0, 0.0};
    const double target = contact_bracket_antisym_at(base, x1, y1, origin_base); // -1

    int chosen = 0;
    for (int sign : {-1, +1}) {
        const Eigen::VectorXd xb = symp_field_solve(symp, ly, origin_hat, sign);
        const double value = lx.gradient(0.0, origin_hat).dot(xb);
        if (std::abs(value - target) <= 1e-8) {
            if (chosen != 0)
                throw Error("symp bracket calibration: both sign conventions match");
            chosen = sign;
        }
    }
    if (chosen == 0) throw Error("symp bracket calibration: no sign convention matches");
    return chosen;
}

} // namespace

int symp_bracket_sign() {
    static const int sign = calibrate_symp_bracket_sign();
    return sign;
}

TangentVector symp_field_at(const ContactChart& symp, const ScalarField& a, const Point& p) {
    require_symp(symp, "symp_field_at");
    return TangentVector(p, symp_field_solve(symp, a, p, symp_bracket_sign()));
}

double symp_bracket_at(const ContactChart& symp, const ScalarField& a, const ScalarField& b,
                       const Point& p) {
    require_symp(symp, "symp_bracket_at");
    const Eigen::VectorXd xb = symp_field_solve(symp, b, p, symp_bracket_sign());
    return a.gradient(0.0, p).dot(xb);
}

TangentVector lifted_field_at(const ContactChart& symp, const ScalarField& f_base,
                              const Point& hat_p) {
    require_symp(symp, "lifted_field_at");
    const ContactChart& base = symp.base();
    const int d = base.dimension();
    const Point p(hat_p.coords.head(d));
    const TangentVector xf = contact_field_at(base, f_base, 0.0, p);
    const double rate = conformal_rate_at(base, f_base, 0.0, p);

    Eigen::VectorXd hat(d + 1);
    hat.head(d) = xf.components;
    hat[d] = -rate;

    // cross-check against the defining equation of the lifted function's
    // Hamiltonian field on the cone
    const Eigen::MatrixXd omega = symp.omega_matrix(hat_p);
    const ScalarField lifted = lift_function(f_base);
    const Eigen::VectorXd rhs = symp_bracket_sign() * lifted.gradient(0.0, hat_p);
    const double resid = (omega * hat - rhs).cwiseAbs().maxCoeff();
    const double bound = kSolveResidualRelTol * (1.0 + rhs.norm()) * (1.0 + omega.norm());
    if (!(resid <= bound))
        throw InconsistentSystemError(
            "lifted_field_at: constructed lift violates the cone defining equation, residual " +
            std::to_string(resid));
    return TangentVector(hat_p, std::move(hat));
}

LiftedMap::LiftedMap(const ContactChart& symp, ScalarField h, double t, double step)
    : symp_(symp), base_flow_(symp.base(), std::move(h), step), t_(t) {
    require_symp(symp_, "LiftedMap");
}

Eigen::VectorXd LiftedMap::apply_raw(const Eigen::VectorXd& hat_p) const {
    const int d = symp_.base().dimension();
    if (static_cast<int>(hat_p.size()) != d + 1)
        throw InputError("LiftedMap: point has wrong dimension");
    const EndState e = base_flow_.raw(t_, hat_p.head(d));
    Eigen::VectorXd out(d + 1);
    out.head(d) = e.coords;
    out[d] = hat_p[d] - e.conformal;
    return out;
}

Point LiftedMap::apply(const Point& hat_p) const {
    return symp_.normalize(Point(apply_raw(hat_p.coords)));
}

SymplecticCheck verify_lift_map_symplectic(const ContactChart& symp, const LiftedMap& map,
                                           const std::vector<Point>& hat_points,
                                           double fd_step, double tol) {
    require_symp(symp, "verify_lift_map_symplectic");
    const int n = symp.dimension();
    SymplecticCheck check;
    check.tol = tol;
    for (const Point& p : hat_points) {
        Eigen::MatrixXd jac(n, n);
        Eigen::VectorXd probe = p.coords;
        for (int i = 0; i < n; ++i) {
            const double saved = probe[i];
            probe[i] = saved + fd_step;
            const Eigen::VectorXd hi = map.apply_raw(probe);
            probe[i] = saved - fd_step;
            const Eigen::VectorXd lo = map.apply_raw(probe);
            probe[i] = saved;
            jac.col(i) = (hi - lo) / (2.0 * fd_step);
        }
        const Eigen::MatrixXd pulled =
            jac.transpose() * symp.omega_matrix(Point(map.apply_raw(p.coords))) * jac;
        const double resid = (pulled - symp.omega_matrix(p)).cwiseAbs().maxCoeff();
        check.max_residual = std::max(check.max_residual, resid);
    }
    check.pass = check.max_residual <= tol;
    return check;
}

CorrespondenceReport symp_coisotropy_correspondence_check(const ContactChart& symp,
                                                          const SubmanifoldPatch& base_patch,
                                                          const std::vector<double>& thetas,
                                                          double tol) {
    require_symp(symp, "symp_coisotropy_correspondence_check");
    const ContactChart& base = symp.base();
    if (base_patch.ambient_dim != base.dimension())
        throw InputError("correspondence check: patch lives in dimension " +
                         std::to_string(base_patch.ambient_dim) + ", base chart needs " +
                         std::to_string(base.dimension()));
    if (thetas.empty()) throw InputError("correspondence check: no theta samples");

    const int d = base.dimension();
    CorrespondenceReport report;
    report.tol = tol;
    report.subspaces_agree = true;
    report.verdicts_agree = true;

    for (const auto& u : base_patch.sample_grid) {
        const Subspace cap = cap_xi(base, base_patch, u);
        const Subspace perp_base = dalpha_perp(base, cap);
        const bool base_coiso =
            max_principal_angle_sine(perp_base.basis, cap.basis) <= tol;
        const Subspace t_base = tangent_space(base_patch, u);

        for (double theta : thetas) {
            Eigen::VectorXd hat(d + 1);
            hat.head(d) = t_base.base.coords;
            hat[d] = theta;
            const Point hat_p(hat);

            // T_pY x R inside the cone
            Eigen::MatrixXd that = Eigen::MatrixXd::Zero(d + 1, t_base.dim() + 1);
            that.topLeftCorner(d, t_base.dim()) = t_base.basis;
            that(d, t_base.dim()) = 1.0;

            const Eigen::MatrixXd omega = symp.omega_matrix(hat_p);
            const Eigen::MatrixXd perp_hat = omega_perp(omega, that);
            const bool lifted_coiso = subspace_contained(perp_hat, that, tol);

            const Eigen::MatrixXd projected =
                orthonormal_columns(perp_hat.topRows(d));

            CorrespondenceRecord rec;
            rec.u = u;
            rec.theta = theta;
            rec.projected_vs_base = max_principal_angle_sine(projected, perp_base.basis);
            rec.base_vs_projected = max_principal_angle_sine(perp_base.basis, projected);
            rec.base_coisotropic = base_coiso;
            rec.lifted_coisotropic = lifted_coiso;

            report.subspaces_agree = report.subspaces_agree &&
                                     rec.projected_vs_base <= tol &&
                                     rec.base_vs_projected <= tol;
            report.verdicts_agree = report.verdicts_agree && (base_coiso == lifted_coiso);
            report.records.push_back(std::move(rec));
        }
    }
    report.pass = report.subspaces_agree && report.verdicts_agree;
    return report;
}

CostBoundReport lifted_cost_bound_check(const ContactChart& symp,
                                        const SubmanifoldPatch& base_patch,
                                        const ScalarField& h, double r_window,
                                        int time_samples, double step) {
    require_symp(symp, "lifted_cost_bound_check");
    if (time_samples < 1) throw InputError("lifted_cost_bound_check: need time_samples >= 1");
    if (!(r_window > 0.0)) throw InputError("lifted_cost_bound_check: window must be positive");
    const ContactChart& base = symp.base();

    // one trajectory per patch sample, then per-time maxima across samples
    std::vector<Trajectory> orbits;
    for (const auto& u : base_patch.sample_grid)
        orbits.push_back(integrate_isotopy(base, h, base_patch.at(u), {0.0, 1.0}, step));

    CostBoundReport report;
    report.window_ok = true;
    report.pointwise_ok = true;
    report.window_factor = std::exp(r_window);

    std::vector<double> lifted_max(time_samples + 1, 0.0), base_max(time_samples + 1, 0.0);
    for (int j = 0; j <= time_samples; ++j) {
        const double t = static_cast<double>(j) / time_samples;
        for (const auto& orbit : orbits) {
            const auto idx = static_cast<std::size_t>(std::lround(t / orbit.step));
            const Point& q = orbit.points[std::min(idx, orbit.size() - 1)];
            const double theta = -orbit.conformal[std::min(idx, orbit.size() - 1)];
            report.max_abs_theta = std::max(report.max_abs_theta, std::abs(theta));
            if (std::abs(theta) > r_window) {
                report.window_ok = false;
                throw WindowViolationError(
                    "lifted orbit reached theta = " + std::to_string(theta) +
                    " outside the window [-R, R] with R = " + std::to_string(r_window) +
                    "; enlarge the window");
            }
            const double hv = std::abs(h.value(t, q));
            base_max[j] = std::max(base_max[j], hv);
            lifted_max[j] = std::max(lifted_max[j], std::exp(theta) * hv);
        }
        if (lifted_max[j] > report.window_factor * base_max[j] + 1e-12)
            report.pointwise_ok = false;
    }

    for (int j = 0; j < time_samples; ++j) {
        report.lifted_integral += 0.5 * (lifted_max[j] + lifted_max[j + 1]) / time_samples;
        report.base_integral += 0.5 * (base_max[j] + base_max[j + 1]) / time_samples;
    }
    return report;
}

// ---------------------------------------------------------------------------
// prequantization side

Eigen::Vector2d planar_field(const ScalarField& f, const Point& p) {
    require_planar(f, "planar_field");
    const Eigen::VectorXd g = f.gradient(0.0, p);
    return Eigen::Vector2d(-g[1], g[0]);
}

double planar_bracket(const ScalarField& f, const ScalarField& g, const Point& p) {
    require_planar(f, "planar_bracket");
    require_planar(g, "planar_bracket");
    const Eigen::VectorXd df = f.gradient(0.0, p);
    const Eigen::Vector2d xg = planar_field(g, p);
    return df[0] * xg[0] + df[1] * xg[1];
}

ScalarField prequant_pullback(const ScalarField& f) {
    require_planar(f, "prequant_pullback");
    return ScalarField(
        "pullback(" + f.label() + ")", 3,
        [f](double, const Point& p) { return f.value(0.0, Point{p[0], p[1]}); },
        [f](double, const Point& p) -> Eigen::VectorXd {
            Eigen::VectorXd g = Eigen::VectorXd::Zero(3);
            g.head(2) = f.gradient(0.0, Point{p[0], p[1]});
            return g;
        });
}

TangentVector prequant_lift_field(const ContactChart& preq, const ScalarField& f,
                                  const Point& a) {
    require_preq(preq, "prequant_lift_field");
    require_planar(f, "prequant_lift_field");
    const Point base{a[0], a[1]};
    const Eigen::Vector2d xf = planar_field(f, base);
    // horizontal lift closes alpha = dt + x dy; vertical part carries alpha = F
    Eigen::VectorXd lift(3);
    lift[0] = xf[0];
    lift[1] = xf[1];
    lift[2] = -a[0] * xf[1] + f.value(0.0, base);

    const TangentVector solved = contact_field_at(preq, prequant_pullback(f), 0.0, a);
    const double resid = (solved.components - lift).cwiseAbs().maxCoeff();
    const double bound = kSolveResidualRelTol * (1.0 + lift.cwiseAbs().maxCoeff());
    if (!(resid <= bound))
        throw InconsistentSystemError(
            "prequant_lift_field: horizontal-plus-vertical lift deviates from the chart "
            "solve by " +
            std::to_string(resid));
    return TangentVector(a, std::move(lift));
}

BracketCheck prequant_bracket_check(const ContactChart& preq, const ScalarField& f,
                                    const ScalarField& g, const std::vector<Point>& samples,
                                    double tol) {
    require_preq(preq, "prequant_bracket_check");
    const ScalarField pf = prequant_pullback(f);
    const ScalarField pg = prequant_pullback(g);
    BracketCheck check;
    check.tol = tol;
    for (const Point& a : samples) {
        const double total = contact_bracket_at(preq, pf, pg, a);
        const double planar = planar_bracket(f, g, Point{a[0], a[1]});
        check.max_deviation = std::max(check.max_deviation, std::abs(total - planar));
    }
    check.pass = check.max_deviation <= tol;
    return check;
}

PlanarVerdict planar_coisotropy_test(const SubmanifoldPatch& patch, double tol) {
    if (patch.ambient_dim != 2)
        throw InputError("planar_coisotropy_test: patch '" + patch.name +
                         "' is not planar");
    if (patch.sample_grid.empty())
        throw InputError("planar_coisotropy_test: patch '" + patch.name +
                         "' has no sample grid");
    Eigen::MatrixXd omega(2, 2);
    omega << 0.0, 1.0, -1.0, 0.0;
    PlanarVerdict verdict;
    verdict.tol = tol;
    for (const auto& u : patch.sample_grid) {
        const Subspace t = tangent_space(patch, u);
        const Eigen::MatrixXd perp = omega_perp(omega, t.basis);
        verdict.max_inclusion_residual = std::max(
            verdict.max_inclusion_residual, max_principal_angle_sine(perp, t.basis));
    }
    verdict.pass = verdict.max_inclusion_residual <= tol;
    return verdict;
}

SubmanifoldPatch preimage_patch(const SubmanifoldPatch& planar_patch, int fiber_samples) {
    if (planar_patch.ambient_dim != 2)
        throw InputError("preimage_patch: patch '" + planar_patch.name + "' is not planar");
    if (fiber_samples < 1) throw InputError("preimage_patch: need fiber_samples >= 1");
    SubmanifoldPatch out;
    out.name = planar_patch.name + "xS1";
    out.ambient_dim = 3;
    out.intrinsic_dim = planar_patch.intrinsic_dim + 1;
    out.fd_step = planar_patch.fd_step;
    const int d = planar_patch.intrinsic_dim;
    out.param = [planar_patch, d](const Eigen::VectorXd& u) {
        const Point b = planar_patch.param(u.head(d));
        return Point{b[0], b[1], u[d]};
    };
    if (planar_patch.jacobian) {
        out.jacobian = [planar_patch, d](const Eigen::VectorXd& u) {
            Eigen::MatrixXd j = Eigen::MatrixXd::Zero(3, d + 1);
            j.topLeftCorner(2, d) = planar_patch.jacobian(u.head(d));
            j(2, d) = 1.0;
            return j;
        };
    }
    for (const auto& u : planar_patch.sample_grid)
        for (int s = 0; s < fiber_samples; ++s) {
            Eigen::VectorXd v(d + 1);
            v.head(d) = u;
            v[d] = static_cast<double>(s) / fiber_samples;
            out.sample_grid.push_back(v);
        }
    for (const auto& f : planar_patch.defining_fields)
        out.defining_fields.push_back(prequant_pullback(f));
    return out;
}

PairedVerdict prequant_coisotropy_check(const ContactChart& preq,
                                        const SubmanifoldPatch& planar_patch, double tol) {
    require_preq(preq, "prequant_coisotropy_check");
    PairedVerdict verdict;
    verdict.base = planar_coisotropy_test(planar_patch, tol);
    verdict.total = coisotropy_test(preq, preimage_patch(planar_patch), tol);
    verdict.agree = verdict.base.pass == verdict.total.pass;
    return verdict;
}

namespace {

std::vector<Eigen::VectorXd> line_grid(double lo, double hi, int n) {
    std::vector<Eigen::VectorXd> g;
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd u(1);
        u[0] = lo + (hi - lo) * i / (n - 1);
        g.push_back(u);
    }
    return g;
}

} // namespace

std::vector<std::string> planar_fixture_names() {
    return {"lagrangian-line", "point2d", "whole-plane"};
}

SubmanifoldPatch make_planar_fixture(const std::string& name) {
    SubmanifoldPatch p;
    p.ambient_dim = 2;
    if (name == "lagrangian-line") {
        p.name = name;
        p.intrinsic_dim = 1;
        p.param = [](const Eigen::VectorXd& u) { return Point{u[0], 0.0}; };
        p.jacobian = [](const Eigen::VectorXd&) {
            Eigen::MatrixXd j(2, 1);
            j << 1.0, 0.0;
            return j;
        };
        p.sample_grid = line_grid(-1.0, 1.0, 9);
        p.defining_fields = {fields::coordinate(2, 1, "y")};
        return p;
    }
    if (name == "point2d") {
        p.name = name;
        p.intrinsic_dim = 0;
        p.param = [](const Eigen::VectorXd&) { return Point{0.3, -0.2}; };
        p.sample_grid = {Eigen::VectorXd(0)};
        Polynomial px, py;
        px.dim = 2;
        px.terms = {{{1, 0}, 1.0}, {{0, 0}, -0.3}};
        py.dim = 2;
        py.terms = {{{0, 1}, 1.0}, {{0, 0}, 0.2}};
        p.defining_fields = {fields::polynomial(px, "x-0.3"), fields::polynomial(py, "y+0.2")};
        return p;
    }
    if (name == "whole-plane") {
        p.name = name;
        p.intrinsic_dim = 2;
        p.param = [](const Eigen::VectorXd& u) { return Point{u[0], u[1]}; };
        p.jacobian = [](const Eigen::VectorXd&) {
            return Eigen::MatrixXd(Eigen::Matrix2d::Identity());
        };
        for (double x : {-1.0, 0.0, 1.0})
            for (double y : {-1.0, 0.0, 1.0}) {
                Eigen::VectorXd u(2);
                u << x, y;
                p.sample_grid.push_back(u);
            }
        return p;
    }
    throw InputError("unknown planar fixture '" + name + "'");
}

} // namespace contactlab
