#include "contactlab/submanifold.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace contactlab {

Point SubmanifoldPatch::at(const Eigen::VectorXd& u) const {
    if (static_cast<int>(u.size()) != intrinsic_dim)
        throw InputError("patch '" + name + "': parameter has dimension " +
                         std::to_string(u.size()) + ", expected " +
                         std::to_string(intrinsic_dim));
    Point p = param(u);
    if (p.dim() != ambient_dim)
        throw InputError("patch '" + name + "': param returned wrong ambient dimension");
    return p;
}

Eigen::MatrixXd SubmanifoldPatch::jacobian_at(const Eigen::VectorXd& u) const {
    if (jacobian) return jacobian(u);
    Eigen::MatrixXd j(ambient_dim, intrinsic_dim);
    Eigen::VectorXd probe = u;
    for (int i = 0; i < intrinsic_dim; ++i) {
        const double saved = probe[i];
        probe[i] = saved + fd_step;
        const Eigen::VectorXd hi = at(probe).coords;
        probe[i] = saved - fd_step;
        const Eigen::VectorXd lo = at(probe).coords;
        probe[i] = saved;
        j.col(i) = (hi - lo) / (2.0 * fd_step);
    }
    return j;
}

Subspace tangent_space(const SubmanifoldPatch& patch, const Eigen::VectorXd& u) {
    const Point p = patch.at(u);
    const Eigen::MatrixXd j = patch.jacobian_at(u);
    const Eigen::MatrixXd basis = orthonormal_columns(j);
    if (basis.cols() < patch.intrinsic_dim)
        throw DegeneratePatchError("patch '" + patch.name + "': jacobian rank " +
                                   std::to_string(basis.cols()) + " below intrinsic dimension " +
                                   std::to_string(patch.intrinsic_dim));
    return Subspace{p, basis};
}

Subspace cap_xi(const ContactChart& chart, const SubmanifoldPatch& patch,
                const Eigen::VectorXd& u) {
    const Subspace t = tangent_space(patch, u);
    const Eigen::RowVectorXd a = chart.alpha_covector(t.base);
    // alpha restricted to the tangent basis; absolute cutoff at the scale of
    // alpha itself so an (exactly) Legendrian tangent space reads as kernel
    const Eigen::MatrixXd restricted = a * t.basis;
    const double cutoff = kRankRelTol * (1.0 + a.norm());
    const Eigen::MatrixXd coeffs = null_space_scaled(restricted, cutoff);
    return Subspace{t.base, t.basis * coeffs};
}

Subspace dalpha_perp(const ContactChart& chart, const Subspace& v, double alpha_tol) {
    const Point& p = v.base;
    const Eigen::RowVectorXd a = chart.alpha_covector(p);
    for (int j = 0; j < v.dim(); ++j) {
        const double on_basis = (a * v.basis.col(j)).value();
        if (std::abs(on_basis) > alpha_tol)
            throw PreconditionError("dalpha_perp: basis vector " + std::to_string(j) +
                                    " has alpha = " + std::to_string(on_basis) +
                                    ", not inside the contact hyperplane");
    }
    const double a_cutoff = kRankRelTol * (1.0 + a.norm());
    const Eigen::MatrixXd xi = null_space_scaled(a, a_cutoff);

    const Eigen::MatrixXd d = chart.dalpha_matrix(p);
    // constraints dalpha(w, v_k) = w^T D v_k = 0 for w = xi * c
    Eigen::MatrixXd constraints(v.dim(), xi.cols());
    for (int k = 0; k < v.dim(); ++k)
        constraints.row(k) = (xi.transpose() * (d * v.basis.col(k))).transpose();
    const double d_cutoff = kRankRelTol * (1.0 + d.norm());
    const Eigen::MatrixXd coeffs = null_space_scaled(constraints, d_cutoff);
    return Subspace{p, xi * coeffs};
}

CoisotropyVerdict coisotropy_test(const ContactChart& chart, const SubmanifoldPatch& patch,
                                  double tol) {
    if (patch.sample_grid.empty())
        throw InputError("coisotropy_test: patch '" + patch.name + "' has no sample grid");
    CoisotropyVerdict verdict;
    verdict.tol = tol;
    verdict.pass = true;
    for (const auto& u : patch.sample_grid) {
        const Subspace cap = cap_xi(chart, patch, u);
        const Subspace perp = dalpha_perp(chart, cap);
        CoisotropyRecord rec;
        rec.u = u;
        rec.dim_cap = cap.dim();
        rec.dim_perp = perp.dim();
        rec.inclusion_residual = max_principal_angle_sine(perp.basis, cap.basis);
        rec.pass = rec.inclusion_residual <= tol;
        verdict.pass = verdict.pass && rec.pass;
        verdict.records.push_back(std::move(rec));
    }
    return verdict;
}

LegendrianVerdict legendrian_test(const ContactChart& chart, const SubmanifoldPatch& patch,
                                  double tol) {
    if (patch.sample_grid.empty())
        throw InputError("legendrian_test: patch '" + patch.name + "' has no sample grid");
    LegendrianVerdict verdict;
    verdict.tol = tol;
    verdict.expected_dim = chart.pairs();
    verdict.dimension_ok = patch.intrinsic_dim == verdict.expected_dim;
    for (const auto& u : patch.sample_grid) {
        const Subspace t = tangent_space(patch, u);
        const Eigen::RowVectorXd a = chart.alpha_covector(t.base);
        for (int j = 0; j < t.dim(); ++j)
            verdict.max_alpha_residual =
                std::max(verdict.max_alpha_residual, std::abs((a * t.basis.col(j)).value()));
    }
    verdict.pass = verdict.dimension_ok && verdict.max_alpha_residual <= tol;
    return verdict;
}

DisplaceabilityVerdict displaceability_test(const ContactChart& chart,
                                            const SubmanifoldPatch& patch,
                                            const ScalarField& h, double tol) {
    if (patch.sample_grid.empty())
        throw InputError("displaceability_test: patch '" + patch.name + "' has no sample grid");
    if (h.time_dependent())
        throw InputError("displaceability_test: needs a time-independent field");
    DisplaceabilityVerdict verdict;
    verdict.displaces = true;
    verdict.min_relative_distance = std::numeric_limits<double>::infinity();
    for (const auto& u : patch.sample_grid) {
        const Subspace t = tangent_space(patch, u);
        const Eigen::VectorXd x = contact_field_at(chart, h, 0.0, t.base).components;
        const double norm = x.norm();
        if (norm == 0.0) {
            verdict.displaces = false;
            verdict.min_relative_distance = 0.0;
            verdict.failures.push_back(u);
            continue;
        }
        const Eigen::VectorXd resid = x - t.basis * (t.basis.transpose() * x);
        const double rel = resid.norm() / norm;
        verdict.min_relative_distance = std::min(verdict.min_relative_distance, rel);
        if (rel <= tol) {
            verdict.displaces = false;
            verdict.failures.push_back(u);
        }
    }
    return verdict;
}

FrameRankResult local_frame_rank(const ContactChart& chart, const Point& x,
                                 const std::vector<std::string>& coordinate_labels) {
    FrameRankResult result;
    Eigen::MatrixXd stack(chart.dimension(), static_cast<int>(coordinate_labels.size()));
    for (std::size_t i = 0; i < coordinate_labels.size(); ++i) {
        const int idx = chart.coord_index(coordinate_labels[i]);
        const ScalarField f =
            fields::coordinate(chart.dimension(), idx, "coordinate:" + coordinate_labels[i]);
        TangentVector v = contact_field_at(chart, f, 0.0, x);
        stack.col(static_cast<int>(i)) = v.components;
        result.vectors.push_back(std::move(v));
    }
    result.rank = numerical_rank(stack);
    return result;
}

SubmanifoldPatch flowed_patch(const ContactChart& chart, const SubmanifoldPatch& patch,
                              const ScalarField& h, double t, double step, double fd_step) {
    SubmanifoldPatch out;
    out.name = patch.name + "->flow(" + h.label() + ", t=" + std::to_string(t) + ")";
    out.ambient_dim = patch.ambient_dim;
    out.intrinsic_dim = patch.intrinsic_dim;
    out.sample_grid = patch.sample_grid;
    out.fd_step = fd_step;
    // raw endpoints (no periodic wrap) so the finite-difference jacobian of
    // the composite parameter map stays meaningful
    out.param = [chart, patch, h, t, step](const Eigen::VectorXd& u) {
        const Point p = patch.param(u);
        if (t == 0.0) return p;
        return Point(integrate_endpoint(chart, h, p.coords, 0.0, t, step).coords);
    };
    return out;
}

InvarianceReport coisotropy_invariance_experiment(const ContactChart& chart,
                                                  const SubmanifoldPatch& patch,
                                                  const ScalarField& h, double t, double tol,
                                                  double flowed_tol, double step) {
    InvarianceReport report;
    report.before = coisotropy_test(chart, patch, tol);
    const SubmanifoldPatch pushed = flowed_patch(chart, patch, h, t, step);
    report.after = coisotropy_test(chart, pushed, flowed_tol);
    report.agree = report.before.pass == report.after.pass;
    return report;
}

// ---------------------------------------------------------------------------
// fixture catalog

namespace {

std::vector<Eigen::VectorXd> grid1(double lo, double hi, int n) {
    std::vector<Eigen::VectorXd> g;
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd u(1);
        u[0] = lo + (hi - lo) * i / (n - 1);
        g.push_back(u);
    }
    return g;
}

std::vector<Eigen::VectorXd> grid2(double lo1, double hi1, int n1, double lo2, double hi2,
                                   int n2) {
    std::vector<Eigen::VectorXd> g;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            Eigen::VectorXd u(2);
            u[0] = lo1 + (hi1 - lo1) * i / (n1 - 1);
            u[1] = lo2 + (hi2 - lo2) * j / (n2 - 1);
            g.push_back(u);
        }
    return g;
}

std::vector<Eigen::VectorXd> grid3(double lo, double hi, int n) {
    std::vector<Eigen::VectorXd> g;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Eigen::VectorXd u(3);
                u[0] = lo + (hi - lo) * i / (n - 1);
                u[1] = lo + (hi - lo) * j / (n - 1);
                u[2] = lo + (hi - lo) * k / (n - 1);
                g.push_back(u);
            }
    return g;
}

ScalarField coord_field(const ContactChart& chart, const std::string& label) {
    return fields::coordinate(chart.dimension(), chart.coord_index(label),
                              "coordinate:" + label);
}

Fixture legendrian_axis() {
    Fixture f{ContactChart::darboux(1), {}, true, true};
    f.patch.name = "legendrian-axis";
    f.patch.ambient_dim = 3;
    f.patch.intrinsic_dim = 1;
    f.patch.param = [](const Eigen::VectorXd& u) { return Point{u[0], 0.0, 0.0}; };
    f.patch.jacobian = [](const Eigen::VectorXd&) {
        Eigen::MatrixXd j(3, 1);
        j << 1.0, 0.0, 0.0;
        return j;
    };
    f.patch.sample_grid = grid1(-1.0, 1.0, 21);
    f.patch.defining_fields = {coord_field(f.chart, "y1"), coord_field(f.chart, "z")};
    return f;
}

Fixture z_axis() {
    Fixture f{ContactChart::darboux(1), {}, false, false};
    f.patch.name = "z-axis";
    f.patch.ambient_dim = 3;
    f.patch.intrinsic_dim = 1;
    f.patch.param = [](const Eigen::VectorXd& u) { return Point{0.0, 0.0, u[0]}; };
    f.patch.jacobian = [](const Eigen::VectorXd&) {
        Eigen::MatrixXd j(3, 1);
        j << 0.0, 0.0, 1.0;
        return j;
    };
    f.patch.sample_grid = grid1(-1.0, 1.0, 21);
    f.patch.defining_fields = {coord_field(f.chart, "x1"), coord_field(f.chart, "y1")};
    return f;
}

Fixture plane_y0() {
    Fixture f{ContactChart::darboux(1), {}, true, false};
    f.patch.name = "plane-y0";
    f.patch.ambient_dim = 3;
    f.patch.intrinsic_dim = 2;
    f.patch.param = [](const Eigen::VectorXd& u) { return Point{u[0], 0.0, u[1]}; };
    f.patch.jacobian = [](const Eigen::VectorXd&) {
        Eigen::MatrixXd j(3, 2);
        j << 1.0, 0.0, 0.0, 0.0, 0.0, 1.0;
        return j;
    };
    f.patch.sample_grid = grid2(-1.0, 1.0, 5, -1.0, 1.0, 5);
    f.patch.defining_fields = {coord_field(f.chart, "y1")};
    return f;
}

Fixture sphere() {
    Fixture f{ContactChart::darboux(1), {}, true, false};
    f.patch.name = "sphere";
    f.patch.ambient_dim = 3;
    f.patch.intrinsic_dim = 2;
    // polar angle kept away from the poles, where this parametrization
    // degenerates (the suite never claims anything about the poles)
    f.patch.param = [](const Eigen::VectorXd& u) {
        return Point{std::sin(u[0]) * std::cos(u[1]), std::sin(u[0]) * std::sin(u[1]),
                     std::cos(u[0])};
    };
    f.patch.jacobian = [](const Eigen::VectorXd& u) {
        Eigen::MatrixXd j(3, 2);
        j << std::cos(u[0]) * std::cos(u[1]), -std::sin(u[0]) * std::sin(u[1]),
            std::cos(u[0]) * std::sin(u[1]), std::sin(u[0]) * std::cos(u[1]),
            -std::sin(u[0]), 0.0;
        return j;
    };
    f.patch.sample_grid =
        grid2(0.4, std::numbers::pi - 0.4, 6, 0.0, 2.0 * std::numbers::pi * 7.0 / 8.0, 8);
    Polynomial radius;
    radius.dim = 3;
    radius.terms = {{{2, 0, 0}, 1.0}, {{0, 2, 0}, 1.0}, {{0, 0, 2}, 1.0}, {{0, 0, 0}, -1.0}};
    f.patch.defining_fields = {fields::polynomial(radius, "x^2+y^2+z^2-1")};
    return f;
}

Fixture paraboloid() {
    Fixture f{ContactChart::darboux(1), {}, true, false};
    f.patch.name = "paraboloid";
    f.patch.ambient_dim = 3;
    f.patch.intrinsic_dim = 2;
    // graph z = (x^2 + y^2)/2; tangent to the contact hyperplane at the
    // origin, where dim(T cap ker alpha) jumps from 1 to 2
    f.patch.param = [](const Eigen::VectorXd& u) {
        return Point{u[0], u[1], 0.5 * (u[0] * u[0] + u[1] * u[1])};
    };
    f.patch.jacobian = [](const Eigen::VectorXd& u) {
        Eigen::MatrixXd j(3, 2);
        j << 1.0, 0.0, 0.0, 1.0, u[0], u[1];
        return j;
    };
    f.patch.sample_grid = grid2(-0.5, 0.5, 5, -0.5, 0.5, 5);
    Polynomial graph;
    graph.dim = 3;
    graph.terms = {{{0, 0, 1}, 1.0}, {{2, 0, 0}, -0.5}, {{0, 2, 0}, -0.5}};
    f.patch.defining_fields = {fields::polynomial(graph, "z-(x^2+y^2)/2")};
    return f;
}

Fixture pre_lagrangian_plane() {
    Fixture f{ContactChart::darboux(2), {}, true, false};
    f.patch.name = "pre-lagrangian-plane";
    f.patch.ambient_dim = 5;
    f.patch.intrinsic_dim = 3;
    // {y1 = y2 = 0}: an (n+1)-dimensional slice, coisotropic but not
    // Legendrian
    f.patch.param = [](const Eigen::VectorXd& u) {
        return Point{u[0], u[1], 0.0, 0.0, u[2]};
    };
    f.patch.jacobian = [](const Eigen::VectorXd&) {
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(5, 3);
        j(0, 0) = j(1, 1) = j(4, 2) = 1.0;
        return j;
    };
    f.patch.sample_grid = grid3(-1.0, 1.0, 3);
    f.patch.defining_fields = {coord_field(f.chart, "y1"), coord_field(f.chart, "y2")};
    return f;
}

Fixture non_coiso_surface_n2() {
    Fixture f{ContactChart::darboux(2), {}, false, false};
    f.patch.name = "non-coiso-surface-n2";
    f.patch.ambient_dim = 5;
    f.patch.intrinsic_dim = 2;
    // {x2 = y1 = y2 = 0}: tangent span{d/dx1, d/dz}; the complement of its
    // contact part inside ker alpha is 3-dimensional, so inclusion fails
    f.patch.param = [](const Eigen::VectorXd& u) {
        return Point{u[0], 0.0, 0.0, 0.0, u[1]};
    };
    f.patch.jacobian = [](const Eigen::VectorXd&) {
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(5, 2);
        j(0, 0) = j(4, 1) = 1.0;
        return j;
    };
    f.patch.sample_grid = grid2(-1.0, 1.0, 5, -1.0, 1.0, 5);
    f.patch.defining_fields = {coord_field(f.chart, "x2"), coord_field(f.chart, "y1"),
                               coord_field(f.chart, "y2")};
    return f;
}

Fixture circle_point() {
    Fixture f{ContactChart::circle(), {}, true, true};
    f.patch.name = "circle-point";
    f.patch.ambient_dim = 1;
    f.patch.intrinsic_dim = 0;
    // one point on the circle; the zero-dimensional Legendrian case
    f.patch.param = [](const Eigen::VectorXd&) { return Point{0.25}; };
    f.patch.sample_grid = {Eigen::VectorXd(0)};
    constexpr double tau = 2.0 * std::numbers::pi;
    f.patch.defining_fields = {ScalarField(
        "sin(2pi(s-1/4))", 1,
        [](double, const Point& p) { return std::sin(tau * (p[0] - 0.25)); },
        [](double, const Point& p) -> Eigen::VectorXd {
            Eigen::VectorXd g(1);
            g[0] = tau * std::cos(tau * (p[0] - 0.25));
            return g;
        })};
    return f;
}

} // namespace

std::vector<std::string> fixture_names() {
    return {"legendrian-axis", "z-axis",      "plane-y0",
            "sphere",          "paraboloid",  "pre-lagrangian-plane",
            "non-coiso-surface-n2", "circle-point"};
}

Fixture make_fixture(const std::string& name) {
    if (name == "legendrian-axis") return legendrian_axis();
    if (name == "z-axis") return z_axis();
    if (name == "plane-y0") return plane_y0();
    if (name == "sphere") return sphere();
    if (name == "paraboloid") return paraboloid();
    if (name == "pre-lagrangian-plane") return pre_lagrangian_plane();
    if (name == "non-coiso-surface-n2") return non_coiso_surface_n2();
    if (name == "circle-point") return circle_point();
    throw InputError("unknown fixture '" + name + "'");
}

} // namespace contactlab
