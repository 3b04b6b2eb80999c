// Submanifold patches: tangent frames, the xi-intersection and its dalpha
// complement, the coisotropy / Legendrian / displaceability verdicts on the
// fixture catalog, and flow invariance of coisotropy.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "contactlab/dynamics.hpp"
#include "contactlab/rng.hpp"
#include "contactlab/submanifold.hpp"

using namespace contactlab;

namespace {

// orthonormal basis of ker alpha at p on a darboux chart:
// span{ dx_i + y_i dz ... } written as columns, then orthonormalized
Eigen::MatrixXd xi_basis(const ContactChart& chart, const Point& p) {
    const int n = chart.pairs();
    const int d = chart.dimension();
    Eigen::MatrixXd cols(d, 2 * n);
    cols.setZero();
    for (int i = 0; i < n; ++i) {
        cols(i, i) = 1.0;            // d/dx_i + y_i d/dz
        cols(d - 1, i) = p[n + i];
        cols(n + i, n + i) = 1.0;    // d/dy_i
    }
    return orthonormal_columns(cols);
}

double containment_sine(const Eigen::MatrixXd& inner, const Eigen::MatrixXd& outer) {
    return max_principal_angle_sine(inner, outer);
}

} // namespace

TEST_CASE("tangent frames are orthonormal and match analytic jacobians") {
    const Fixture fx = make_fixture("sphere");
    for (const Eigen::VectorXd& u : fx.patch.sample_grid) {
        const Subspace t = tangent_space(fx.patch, u);
        CHECK(t.dim() == fx.patch.intrinsic_dim);
        const Eigen::MatrixXd gram = t.basis.transpose() * t.basis;
        const double defect =
            (gram - Eigen::MatrixXd::Identity(t.dim(), t.dim())).cwiseAbs().maxCoeff();
        CHECK(defect <= 1e-12);
        // the analytic jacobian spans the same plane
        const Eigen::MatrixXd j = fx.patch.jacobian_at(u);
        CHECK(containment_sine(orthonormal_columns(j), t.basis) <= 1e-10);
    }
}

TEST_CASE("rank-deficient parametrizations are rejected") {
    SubmanifoldPatch cusp;
    cusp.name = "cusp";
    cusp.ambient_dim = 3;
    cusp.intrinsic_dim = 1;
    cusp.param = [](const Eigen::VectorXd& u) {
        return Point{u[0] * u[0], u[0] * u[0] * u[0], 0.0};
    };
    cusp.jacobian = [](const Eigen::VectorXd& u) {
        Eigen::MatrixXd j(3, 1);
        j << 2.0 * u[0], 3.0 * u[0] * u[0], 0.0;
        return j;
    };
    cusp.sample_grid = {Eigen::VectorXd::Zero(1)};
    CHECK_THROWS_AS(tangent_space(cusp, Eigen::VectorXd::Zero(1)), DegeneratePatchError);
    // away from the cusp the frame is fine
    Eigen::VectorXd u(1);
    u << 0.5;
    CHECK(tangent_space(cusp, u).dim() == 1);
}

TEST_CASE("cap_xi lands inside both the tangent space and ker alpha") {
    for (const std::string& name : fixture_names()) {
        const Fixture fx = make_fixture(name);
        if (!fx.chart.has_contact_form())
            continue;
        for (const Eigen::VectorXd& u : fx.patch.sample_grid) {
            const Subspace t = tangent_space(fx.patch, u);
            const Subspace c = cap_xi(fx.chart, fx.patch, u);
            const Eigen::RowVectorXd a = fx.chart.alpha_covector(c.base);
            for (int j = 0; j < c.dim(); ++j) {
                const double av = (a * c.basis.col(j)).value();
                CHECK(std::abs(av) <= 1e-9);
            }
            if (c.dim() > 0)
                CHECK(containment_sine(c.basis, t.basis) <= 1e-9);
        }
    }
}

TEST_CASE("dalpha_perp has complementary dimension and is an involution") {
    const ContactChart chart = ContactChart::darboux(2);
    Rng rng(71);
    for (int rep = 0; rep < 20; ++rep) {
        const Point p(rng.vector(5, -1.5, 1.5));
        const Eigen::MatrixXd xi = xi_basis(chart, p);
        const int k = rng.uniform_int(1, 3); // 1..3 of the 4 xi-dimensions
        Eigen::MatrixXd combo(5, k);
        for (int j = 0; j < k; ++j)
            combo.col(j) = xi * rng.vector(4, -1.0, 1.0);
        const Subspace v{p, orthonormal_columns(combo)};
        const Subspace w = dalpha_perp(chart, v);
        CHECK(w.dim() == 4 - v.dim());
        // dalpha(w, v) = 0 for all pairs
        const Eigen::MatrixXd d = chart.dalpha_matrix(p);
        const double pairing = (w.basis.transpose() * d * v.basis).cwiseAbs().maxCoeff();
        CHECK(pairing <= 1e-10);
        // double complement returns the original subspace
        const Subspace ww = dalpha_perp(chart, w);
        CHECK(ww.dim() == v.dim());
        CHECK(subspace_equal(ww.basis, v.basis, 1e-8));
    }
}

TEST_CASE("dalpha_perp rejects subspaces that leave ker alpha") {
    const ContactChart chart = ContactChart::darboux(1);
    const Point p{0.2, 0.4, 0.1};
    Eigen::MatrixXd reeb(3, 1);
    reeb << 0.0, 0.0, 1.0; // alpha = 1 on the Reeb direction
    CHECK_THROWS_AS(dalpha_perp(chart, Subspace{p, reeb}), PreconditionError);
}

TEST_CASE("fixture catalog classifies exactly as advertised") {
    for (const std::string& name : fixture_names()) {
        INFO("fixture ", name);
        const Fixture fx = make_fixture(name);
        CHECK(fx.patch.ambient_dim == fx.chart.dimension());
        CHECK(!fx.patch.sample_grid.empty());
        const CoisotropyVerdict cv = coisotropy_test(fx.chart, fx.patch, 1e-8);
        CHECK(cv.pass == fx.expect_coisotropic);
        const LegendrianVerdict lv = legendrian_test(fx.chart, fx.patch, 1e-8);
        CHECK(lv.pass == fx.expect_legendrian);
    }
}

TEST_CASE("coisotropy records carry the intersection and complement dimensions") {
    const Fixture fx = make_fixture("legendrian-axis");
    const CoisotropyVerdict cv = coisotropy_test(fx.chart, fx.patch, 1e-8);
    CHECK(cv.records.size() == fx.patch.sample_grid.size());
    for (const CoisotropyRecord& r : cv.records) {
        // the x-axis is Legendrian: T cap xi = T, and its dalpha-complement
        // in xi is again a line (Legendrians are Lagrangian in (xi, dalpha))
        CHECK(r.dim_cap == 1);
        CHECK(r.dim_perp == 1);
        CHECK(r.inclusion_residual <= 1e-8);
        CHECK(r.pass);
    }
}

TEST_CASE("displaceability separates transverse from tangent Hamiltonian fields") {
    // X_{x1} = (0, 1, x1) is nowhere tangent to the z-axis
    const Fixture axis = make_fixture("z-axis");
    const DisplaceabilityVerdict yes =
        displaceability_test(axis.chart, axis.patch, fields::coordinate(3, 0, "x1"));
    CHECK(yes.displaces);
    CHECK(yes.failures.empty());
    CHECK(yes.min_relative_distance > 1e-3);

    // X_z = (0, y1, z) vanishes on the Legendrian x-axis
    const Fixture leg = make_fixture("legendrian-axis");
    const DisplaceabilityVerdict no =
        displaceability_test(leg.chart, leg.patch, fields::coordinate(3, 2, "z"));
    CHECK(!no.displaces);
    CHECK(!no.failures.empty());
}

TEST_CASE("coordinate Hamiltonian frames span the expected ranks") {
    const ContactChart chart = ContactChart::darboux(1);
    const std::vector<std::string> labels{"x1", "y1", "z"};
    // generic point: X_{x1} = (0,1,x1), X_{y1} = (-1,0,0), X_z = (0,y1,z)
    const FrameRankResult generic = local_frame_rank(chart, Point{0.3, 0.5, 0.2}, labels);
    CHECK(generic.vectors.size() == 3);
    CHECK(generic.rank == 3);
    // at the origin X_z vanishes and the frame drops to rank 2
    const FrameRankResult origin = local_frame_rank(chart, Point{0.0, 0.0, 0.0}, labels);
    CHECK(origin.rank == 2);
}

TEST_CASE("brackets of vanishing combinations vanish on coisotropic patches") {
    const Fixture leg = make_fixture("legendrian-axis");
    const std::vector<ScalarField>& defs = leg.patch.defining_fields;
    REQUIRE(!defs.empty());
    Rng rng(53);
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        // F = sum_i p_i d_i and G = sum_j q_j d_j with random polynomial
        // coefficients both vanish on the patch, so {F,G}_c must too
        auto combo = [&](Rng& r) {
            ScalarField acc = fields::constant(3, 0.0);
            for (const ScalarField& d : defs) {
                const ScalarField coeff =
                    fields::polynomial(fields::random_polynomial(r, 3, 2, -1.0, 1.0));
                acc = fields::add(acc, fields::multiply(coeff, d));
            }
            return acc;
        };
        const ScalarField f = combo(rng);
        const ScalarField g = combo(rng);
        for (const Eigen::VectorXd& u : leg.patch.sample_grid) {
            const Point p = leg.patch.at(u);
            const double scale = (1.0 + std::abs(f.value(0.0, p)) + f.gradient(0.0, p).norm()) *
                                 (1.0 + std::abs(g.value(0.0, p)) + g.gradient(0.0, p).norm());
            const double b = contact_bracket_at(leg.chart, f, g, p);
            worst = std::max(worst, std::abs(b) / scale);
            // on the patch F = G = 0, so both bracket variants coincide
            const double ba = contact_bracket_antisym_at(leg.chart, f, g, p);
            CHECK(std::abs(b - ba) <= 1e-8 * scale);
        }
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("a non-coisotropic patch shows a non-vanishing defining bracket") {
    const Fixture axis = make_fixture("z-axis"); // defined by x1 and y1
    const std::vector<ScalarField>& defs = axis.patch.defining_fields;
    REQUIRE(defs.size() >= 2);
    double biggest = 0.0;
    for (std::size_t i = 0; i < defs.size(); ++i)
        for (std::size_t j = 0; j < defs.size(); ++j) {
            if (i == j)
                continue;
            for (const Eigen::VectorXd& u : axis.patch.sample_grid) {
                const Point p = axis.patch.at(u);
                biggest = std::max(
                    biggest, std::abs(contact_bracket_at(axis.chart, defs[i], defs[j], p)));
            }
        }
    // {x1, y1}_c = -1 on the axis
    CHECK(biggest >= 0.5);
}

TEST_CASE("coisotropy survives a contact flow") {
    const Fixture fx = make_fixture("plane-y0");
    const ScalarField h = fields::oscillating_bump(2);
    const InvarianceReport rep =
        coisotropy_invariance_experiment(fx.chart, fx.patch, h, 0.5, 1e-8, 1e-6);
    CHECK(rep.before.pass);
    CHECK(rep.after.pass);
    CHECK(rep.agree);
}

TEST_CASE("flowed patches move points by the integrated flow") {
    const Fixture fx = make_fixture("plane-y0");
    const ScalarField h = fields::coordinate(3, 2, "z"); // flow (x, e^t y, e^t z)
    const SubmanifoldPatch moved = flowed_patch(fx.chart, fx.patch, h, 1.0);
    CHECK(moved.sample_grid.size() == fx.patch.sample_grid.size());
    for (const Eigen::VectorXd& u : fx.patch.sample_grid) {
        const Point before = fx.patch.at(u);
        const Point after = moved.at(u);
        CHECK(after[0] == doctest::Approx(before[0]).epsilon(1e-9));
        CHECK(after[1] == doctest::Approx(std::exp(1.0) * before[1]).epsilon(1e-8));
        CHECK(after[2] == doctest::Approx(std::exp(1.0) * before[2]).epsilon(1e-8));
    }
}

TEST_CASE("legendrian fixtures are always coisotropic") {
    for (const std::string& name : fixture_names()) {
        const Fixture fx = make_fixture(name);
        const LegendrianVerdict lv = legendrian_test(fx.chart, fx.patch, 1e-8);
        const CoisotropyVerdict cv = coisotropy_test(fx.chart, fx.patch, 1e-8);
        if (lv.pass) CHECK(cv.pass);
    }
}
