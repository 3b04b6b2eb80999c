// Cost certificates: grid sweeps, the Shelukhin-style path cost, orbit
// costs, the conformally weighted variants, the exact circle distance with
// its lower-bound chain, and cost behaviour under concatenation, reversal,
// and conjugation.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "contactlab/norms.hpp"
#include "contactlab/rng.hpp"

using namespace contactlab;

namespace {

SubmanifoldPatch point_patch(const std::string& name, Point p) {
    SubmanifoldPatch patch;
    patch.name = name;
    patch.ambient_dim = p.dim();
    patch.intrinsic_dim = 0;
    patch.param = [p](const Eigen::VectorXd&) { return p; };
    patch.sample_grid = {Eigen::VectorXd(0)};
    return patch;
}

} // namespace

TEST_CASE("grid points enumerate axis zero fastest with centred odd grids") {
    const GridSpec grid{Box::cube(3, -1.0, 1.0), 3};
    CHECK(grid.dim() == 3);
    CHECK(grid.count() == 27);
    auto hits = [&](std::size_t flat, double a, double b, double c) {
        return (grid.point(flat) - Eigen::Vector3d(a, b, c)).cwiseAbs().maxCoeff() == 0.0;
    };
    CHECK(hits(0, -1.0, -1.0, -1.0));
    CHECK(hits(1, 0.0, -1.0, -1.0)); // axis 0 advances first
    CHECK(hits(3, -1.0, 0.0, -1.0));
    CHECK(hits(13, 0.0, 0.0, 0.0)); // centre lands on the odd grid
    CHECK(hits(26, 1.0, 1.0, 1.0));
    const GridSpec coarse = grid.coarsened(5);
    CHECK(coarse.points_per_axis == 5);
    CHECK((coarse.box.lo - grid.box.lo).cwiseAbs().maxCoeff() == 0.0);
    CHECK(!grid.note().empty());
}

TEST_CASE("default grids come from field extents or the circle domain") {
    const ContactChart circle = ContactChart::circle();
    const ScalarField trig = fields::circle_trig(0.3, {0.2}, {0.1});
    const GridSpec cg = default_grid(circle, trig, 101);
    CHECK(cg.dim() == 1);
    CHECK(cg.box.lo[0] == 0.0);
    CHECK(cg.box.hi[0] == 1.0);

    const ContactChart darboux = ContactChart::darboux(1);
    const GridSpec bg = default_grid(darboux, fields::oscillating_bump(2), 41);
    CHECK(bg.box.lo[0] == -1.0);
    CHECK(bg.box.hi[1] == 1.0);
    CHECK(bg.box.hi[2] == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-15));

    // a field with no declared extent cannot define a sweep
    CHECK_THROWS_AS(default_grid(darboux, fields::coordinate(3, 2, "z"), 41), InputError);
}

TEST_CASE("the circle distance is exact with a rotation certificate") {
    const CostReport r1 = circle_delta(Point{0.25}, Point{0.75});
    CHECK(r1.kind == CostKind::CircleDelta);
    CHECK(r1.bound == BoundDirection::Exact);
    CHECK(r1.value == 0.5);
    CHECK(!r1.certificate.empty());

    const CostReport r2 = circle_delta(Point{0.875}, Point{0.125});
    CHECK(r2.value == 0.25); // wraps the short way around

    CHECK(circle_delta(Point{0.3}, Point{0.3}).value == 0.0);
}

TEST_CASE("constant rotations cost exactly their speed") {
    const ContactChart circle = ContactChart::circle();
    const ScalarField h = fields::constant(1, 0.7);
    const GridSpec grid = default_grid(circle, h, 101);
    const CostReport r = shelukhin_cost(circle, h, grid, 8);
    CHECK(r.kind == CostKind::Shelukhin);
    CHECK(r.bound == BoundDirection::Upper);
    CHECK(r.value == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(!r.certificate.empty());
    CHECK(!r.grid_note.empty());
}

TEST_CASE("time-dependent sweeps integrate the moving grid maximum") {
    // H_t = 1 - 2t, so the swept max is |1 - 2t| and the integral is 1/2;
    // the kink at t = 1/2 sits on the even time grid, so the trapezoid is
    // exact for this piecewise-linear integrand
    const ContactChart circle = ContactChart::circle();
    const ScalarField ramp = fields::time_ramp(fields::constant(1, 1.0), 1.0, -1.0);
    const GridSpec grid = default_grid(circle, ramp, 51);
    const CostReport r = shelukhin_cost(circle, ramp, grid, 32);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(r.time_steps == 32);
}

TEST_CASE("the oscillating family has closed-form costs at aligned grids") {
    // 41 z-points over one period put z = pi/2 on the grid (index 30), so
    // the swept sup is exactly 1/k; the origin sits on the 5-point flow grid
    // and is a fixed point with conformal rate -k
    const ContactChart darboux = ContactChart::darboux(1);
    const ScalarField h = fields::oscillating_bump(1);
    const GridSpec grid = default_grid(darboux, h, 41);

    const CostReport sh = shelukhin_cost(darboux, h, grid, 16);
    CHECK(sh.value == doctest::Approx(1.0).epsilon(1e-12));

    const double e = std::exp(1.0);
    const CostReport rs = rs_cost(darboux, h, grid, 16, 5, 5e-3);
    CHECK(rs.kind == CostKind::RS);
    CHECK(rs.value == doctest::Approx(2.0 * e).epsilon(1e-8));

    const CostReport mod = modified_cost(darboux, h, grid, 16, 5, 5e-3);
    CHECK(mod.kind == CostKind::Modified);
    CHECK(mod.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("the family table collects costs and conformal factors per k") {
    const NormParams params{41, 5, 16, 5e-3};
    const std::vector<NoncompRow> rows = noncomparability_table({1, 2}, params);
    REQUIRE(rows.size() == 2);
    for (const NoncompRow& row : rows) {
        const double k = row.k;
        CHECK(row.shelukhin == doctest::Approx(1.0 / k).epsilon(1e-9));
        CHECK(row.rs == doctest::Approx(2.0 * std::exp(k) / k).epsilon(1e-6));
        CHECK(row.modified == doctest::Approx(1.0 / k + k).epsilon(1e-6));
        CHECK(row.g1_at_origin == doctest::Approx(-k).epsilon(1e-6));
        CHECK(row.rs_log == doctest::Approx(std::log(row.rs)).epsilon(1e-12));
        // the weighted cost dwarfs the plain one while the plain one shrinks
        CHECK(row.rs >= std::exp(k) * row.shelukhin);
    }
    CHECK_THROWS_AS(noncomparability_table({0}, params), InputError);
    CHECK_THROWS_AS(noncomparability_table({13}, params), InputError);
}

TEST_CASE("the family table serializes to byte-stable CSV") {
    const NormParams params{21, 3, 8, 1e-2};
    const std::vector<NoncompRow> rows = noncomparability_table({1, 2}, params);
    const std::string csv = noncomparability_csv(rows);
    CHECK(csv.rfind("k,shelukhin,rs,modified,g1_at_origin\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    // a fresh run reproduces the bytes
    const std::string again = noncomparability_csv(noncomparability_table({1, 2}, params));
    CHECK(csv == again);
}

TEST_CASE("orbit costs vanish on fixed points and dead zones") {
    const ContactChart darboux = ContactChart::darboux(1);
    const SubmanifoldPatch origin = point_patch("origin", Point{0.0, 0.0, 0.0});
    const CostReport at_origin =
        orbit_cost(darboux, fields::oscillating_bump(2), origin, 16);
    CHECK(at_origin.kind == CostKind::Orbit);
    CHECK(at_origin.value == 0.0); // fixed point where H vanishes

    const SubmanifoldPatch far = point_patch("far", Point{3.0, 0.0, 0.0});
    CHECK(orbit_cost(darboux, fields::oscillating_bump(1), far, 16).value == 0.0);

    const ContactChart circle = ContactChart::circle();
    const SubmanifoldPatch cp = point_patch("cp", Point{0.25});
    const CostReport rot = orbit_cost(circle, fields::constant(1, 0.25), cp, 16);
    CHECK(rot.value == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("path integrals on the circle dominate the angular displacement") {
    // constant rotations achieve the distance exactly, in both directions
    for (const double c : {0.35, -0.35}) {
        const CircleBoundReport r =
            circle_lower_bound_check(fields::constant(1, c), Point{0.2}, 32, 1e-3);
        CHECK(r.pass);
        CHECK(r.path_integral == doctest::Approx(0.35).epsilon(1e-12));
        CHECK(r.distance == doctest::Approx(0.35).epsilon(1e-12));
    }

    // random single-harmonic paths: the bounded coefficients keep the
    // quadrature error of |H| well under the recorded slack at step 2e-4
    Rng rng(91);
    for (int rep = 0; rep < 10; ++rep) {
        const double mean = rng.uniform(-0.5, 0.5);
        const double a1 = rng.uniform(-0.3, 0.3);
        const double b1 = rng.uniform(-0.3, 0.3);
        const double start = rng.uniform(0.0, 1.0);
        const ScalarField h = fields::circle_trig(mean, {a1}, {b1});
        const CircleBoundReport r = circle_lower_bound_check(h, Point{start}, 32, 2e-4);
        CHECK(r.pass);
        CHECK(r.path_integral >= r.distance - r.slack);
    }
}

TEST_CASE("reversed paths cost the same") {
    const ContactChart circle = ContactChart::circle();
    const ScalarField h = fields::time_ramp(fields::circle_trig(0.4, {0.2}, {-0.1}), 0.3, 1.0);
    const GridSpec grid = default_grid(circle, h, 201);
    const double fwd = shelukhin_cost(circle, h, grid, 64).value;
    const double rev = shelukhin_cost(circle, fields::reversed_path(h, 1.0), grid, 64).value;
    CHECK(fwd == doctest::Approx(rev).epsilon(1e-9));
}

TEST_CASE("concatenation obeys the triangle inequality up to the seam term") {
    // constants make the seam arithmetic exact: the doubled-speed path jumps
    // from 2a to 2b at t = 1/2, and the trapezoid overshoots the sum by
    // (b - a)/steps there
    const ContactChart circle = ContactChart::circle();
    const ScalarField h1 = fields::constant(1, 0.4);
    const ScalarField h2 = fields::constant(1, 0.7);
    const GridSpec grid = default_grid(circle, h1, 101);
    const int steps = 32;
    const double c1 = shelukhin_cost(circle, h1, grid, steps).value;
    const double c2 = shelukhin_cost(circle, h2, grid, steps).value;
    const double cc =
        shelukhin_cost(circle, fields::concat_paths(h1, h2), grid, steps).value;
    CHECK(cc - (c1 + c2) <= (c1 + c2) / steps);
    CHECK(cc >= c1 + c2 - 1e-12); // constants lose nothing to the sweep
}

TEST_CASE("conjugation preserves or sandwiches the path cost") {
    const ContactChart darboux = ContactChart::darboux(1);
    Box box;
    box.lo = Eigen::Vector3d(-1.25, -1.25, -2.5);
    box.hi = Eigen::Vector3d(1.25, 1.25, 2.5);
    const GridSpec grid{box, 11};
    const ScalarField h = fields::oscillating_bump(1);

    SUBCASE("identity") {
        const ConjugationReport r =
            conjugation_cost_check(darboux, h, fields::constant(3, 0.0), grid, 32, 1e-9, 2e-2);
        CHECK(r.pass);
        CHECK(r.identity_rel_dev <= 1e-9);
        CHECK(r.c_minus == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.c_plus == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.cost_conjugated == doctest::Approx(r.cost_original).epsilon(1e-9));
    }

    SUBCASE("Reeb translation is strict") {
        // translation by half the z-grid spacing times ten: sample sets of
        // the shifted and unshifted sweeps coincide, so the costs match to
        // roundoff even though the map moves every point
        const ConjugationReport r =
            conjugation_cost_check(darboux, h, fields::constant(3, 0.5), grid, 32, 1e-9, 2e-2);
        CHECK(r.pass);
        CHECK(r.identity_rel_dev <= 1e-9);
        CHECK(r.sandwich_ok);
    }

    SUBCASE("scaling flows rescale inside the sandwich") {
        // H_psi = 0.1z has constant rate dH(R) = 0.1, so g_psi = 0.1
        // everywhere and the sandwich collapses to an exact e^{0.1} rescale
        Polynomial zpol;
        zpol.dim = 3;
        zpol.terms = {{{0, 0, 1}, 0.1}};
        const ConjugationReport r = conjugation_cost_check(
            darboux, h, fields::polynomial(zpol, "0.1z"), grid, 32, 0.05, 2e-2);
        CHECK(r.pass);
        CHECK(r.sandwich_ok);
        const double factor = std::exp(0.1);
        CHECK(r.c_minus == doctest::Approx(factor).epsilon(1e-6));
        CHECK(r.c_plus == doctest::Approx(factor).epsilon(1e-6));
        CHECK(r.cost_conjugated >= factor * r.cost_original * 0.95);
        CHECK(r.cost_conjugated <= factor * r.cost_original * 1.05);
    }
}

TEST_CASE("cost kinds and bound directions print distinctly") {
    CHECK(to_string(CostKind::Shelukhin) != to_string(CostKind::RS));
    CHECK(to_string(CostKind::Modified) != to_string(CostKind::Orbit));
    CHECK(!to_string(CostKind::CircleDelta).empty());
    CHECK(to_string(BoundDirection::Upper) != to_string(BoundDirection::Lower));
    CHECK(!to_string(BoundDirection::Exact).empty());
}
