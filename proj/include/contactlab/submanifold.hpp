// Sampled parametrized submanifolds and the pointwise linear-algebra tests
// on them: intersection with the contact hyperplane, symplectic orthogonals
// inside it, coisotropy, Legendrian-ness, infinitesimal displaceability,
// coordinate frame ranks, and flow-invariance experiments.
//
// A patch is a parameter-to-point map with a sample grid; everything else is
// derived per sample.  Tolerances follow the library-wide convention:
// ranks via relative singular value cutoffs, subspace inclusions via
// principal-angle sines.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "contactlab/chart.hpp"
#include "contactlab/dynamics.hpp"
#include "contactlab/linalg.hpp"
#include "contactlab/scalar_field.hpp"

namespace contactlab {

struct SubmanifoldPatch {
    std::string name;
    int ambient_dim = 0;
    int intrinsic_dim = 0;
    std::function<Point(const Eigen::VectorXd&)> param;
    // Optional analytic jacobian (columns = tangent vectors); finite
    // differences of param with fd_step otherwise.
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
    std::vector<Eigen::VectorXd> sample_grid;
    // Fields vanishing identically on the patch, for vanishing-ideal tests.
    std::vector<ScalarField> defining_fields;
    double fd_step = kDefaultGradientStep;

    Point at(const Eigen::VectorXd& u) const;
    Eigen::MatrixXd jacobian_at(const Eigen::VectorXd& u) const;
};

// Orthonormalized tangent space; throws DegeneratePatchError when the
// jacobian drops below full column rank.
Subspace tangent_space(const SubmanifoldPatch& patch, const Eigen::VectorXd& u);

// T_pY intersected with ker alpha_p, as an orthonormal basis.
Subspace cap_xi(const ContactChart& chart, const SubmanifoldPatch& patch,
                const Eigen::VectorXd& u);

// Symplectic orthogonal complement of V inside the contact hyperplane:
// {w in ker alpha : dalpha(w, v) = 0 for all v in V}.  V must itself sit
// inside ker alpha (checked to alpha_tol).
Subspace dalpha_perp(const ContactChart& chart, const Subspace& v,
                     double alpha_tol = 1e-8);

struct CoisotropyRecord {
    Eigen::VectorXd u;
    int dim_cap = 0;           // dim(T intersect ker alpha)
    int dim_perp = 0;          // dim of its dalpha-orthogonal
    double inclusion_residual = 0.0;
    bool pass = false;
};

struct CoisotropyVerdict {
    std::vector<CoisotropyRecord> records;
    double tol = 0.0;
    bool pass = false; // every record passed
};

// Pointwise test of (T cap ker alpha)^perp inside (T cap ker alpha) on the
// whole sample grid.
CoisotropyVerdict coisotropy_test(const ContactChart& chart, const SubmanifoldPatch& patch,
                                  double tol = 1e-8);

struct LegendrianVerdict {
    int expected_dim = 0; // n for a (2n+1)-dimensional chart
    bool dimension_ok = false;
    double max_alpha_residual = 0.0;
    double tol = 0.0;
    bool pass = false;
};

LegendrianVerdict legendrian_test(const ContactChart& chart, const SubmanifoldPatch& patch,
                                  double tol = 1e-8);

struct DisplaceabilityVerdict {
    bool displaces = false;
    double min_relative_distance = 0.0; // min over samples of dist(X, T)/|X|
    // parameter values where the field was tangent or vanished
    std::vector<Eigen::VectorXd> failures;
};

// Passes iff X_H points out of the tangent space at every sample.
DisplaceabilityVerdict displaceability_test(const ContactChart& chart,
                                            const SubmanifoldPatch& patch,
                                            const ScalarField& h, double tol = 1e-8);

struct FrameRankResult {
    std::vector<TangentVector> vectors;
    int rank = 0;
};

// Hamiltonian fields of the named coordinate functions at x, with the
// numerical rank of their span.
FrameRankResult local_frame_rank(const ContactChart& chart, const Point& x,
                                 const std::vector<std::string>& coordinate_labels);

// Image patch of the time-t flow; tangent data comes from finite
// differences across re-integrated parameter probes.
SubmanifoldPatch flowed_patch(const ContactChart& chart, const SubmanifoldPatch& patch,
                              const ScalarField& h, double t,
                              double step = kDefaultFlowStep,
                              double fd_step = kDefaultPushforwardStep);

struct InvarianceReport {
    CoisotropyVerdict before;
    CoisotropyVerdict after;
    bool agree = false;
};

// Coisotropy verdict before and after pushing the patch through the time-t
// flow of H.  The flowed side uses a looser tolerance to absorb the finite
// difference error of the pushed tangent frames.
InvarianceReport coisotropy_invariance_experiment(const ContactChart& chart,
                                                  const SubmanifoldPatch& patch,
                                                  const ScalarField& h, double t,
                                                  double tol = 1e-8,
                                                  double flowed_tol = 1e-6,
                                                  double step = kDefaultFlowStep);

// Named fixture catalog used by the test suites and the CLI.
struct Fixture {
    ContactChart chart;
    SubmanifoldPatch patch;
    bool expect_coisotropic = false;
    bool expect_legendrian = false;
};

std::vector<std::string> fixture_names();
Fixture make_fixture(const std::string& name);

} // namespace contactlab
