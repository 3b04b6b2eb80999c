// Cone (symplectization) and circle-bundle (prequantization) constructions
// over the contact charts: weighted function lifts, lifted maps and fields,
// the symplectic bracket on the cone, and numerical checks of the
// coisotropic correspondence on both sides.
//
// The symplectic bracket sign is not hard-coded.  Both candidate conventions
// for the defining equation of a symplectic Hamiltonian field (omega(X,-) =
// +dA or -dA) are evaluated once against the contact bracket of the pair
// (e^theta x1, e^theta y1), and the matching one is frozen for the process.
// The matching contact bracket throughout this module is the antisymmetric
// variant contact_bracket_antisym_at.
#pragma once

#include <vector>

#include "contactlab/dynamics.hpp"
#include "contactlab/submanifold.hpp"

namespace contactlab {

// --------------------------------------------------------------------------
// symplectization (cone) side

// e^theta * F on base x R, analytic chain-rule gradient.  F time-independent.
ScalarField lift_function(const ScalarField& f);

// Orthonormal basis of {w : omega(w, v) = 0 for all v in span(tbasis)} for
// an arbitrary antisymmetric form matrix.
Eigen::MatrixXd omega_perp(const Eigen::MatrixXd& omega, const Eigen::MatrixXd& tbasis);

// Sign s in omega(X_A, -) = s * dA frozen by the calibration described
// above; process-wide, computed once on the cone over darboux:1.
int symp_bracket_sign();

// Hamiltonian field of A on the cone chart for the calibrated convention.
TangentVector symp_field_at(const ContactChart& symp, const ScalarField& a, const Point& p);

// dA(X_B) with the calibrated convention; antisymmetric in (A, B).
double symp_bracket_at(const ContactChart& symp, const ScalarField& a, const ScalarField& b,
                       const Point& p);

// X_F on the base extended by -dF(R) in the theta slot; cross-checked
// against the defining equation of the lifted function's field on the cone.
TangentVector lifted_field_at(const ContactChart& symp, const ScalarField& f_base,
                              const Point& hat_p);

// The cone lift (m, theta) -> (flow_t(m), theta - g_t(m)) of a contact flow.
class LiftedMap {
public:
    LiftedMap(const ContactChart& symp, ScalarField h, double t,
              double step = kDefaultFlowStep);

    // raw coordinates in, raw coordinates out (no periodic wrap), so the
    // map can be finite-differenced
    Eigen::VectorXd apply_raw(const Eigen::VectorXd& hat_p) const;
    Point apply(const Point& hat_p) const;
    double time() const { return t_; }

private:
    ContactChart symp_;
    Flow base_flow_;
    double t_;
};

struct SymplecticCheck {
    double max_residual = 0.0;
    double tol = 0.0;
    bool pass = false;
};

// Verifies Phi^* omega = omega at the given points by finite differences.
SymplecticCheck verify_lift_map_symplectic(const ContactChart& symp, const LiftedMap& map,
                                           const std::vector<Point>& hat_points,
                                           double fd_step = kDefaultPushforwardStep,
                                           double tol = 1e-6);

struct CorrespondenceRecord {
    Eigen::VectorXd u;
    double theta = 0.0;
    // principal-angle sines between the theta-projection of the
    // omega-orthogonal of T x R and the base-side dalpha-orthogonal
    double projected_vs_base = 0.0;
    double base_vs_projected = 0.0;
    bool base_coisotropic = false;
    bool lifted_coisotropic = false;
};

struct CorrespondenceReport {
    std::vector<CorrespondenceRecord> records;
    double tol = 0.0;
    bool subspaces_agree = false;
    bool verdicts_agree = false;
    bool pass = false;
};

// Checks, at every (sample, theta): the theta-projection of the
// omega-orthogonal of T_pY x R equals (T_pY cap ker alpha)^perp, and that
// the contact and symplectic coisotropy verdicts coincide.
CorrespondenceReport symp_coisotropy_correspondence_check(const ContactChart& symp,
                                                          const SubmanifoldPatch& base_patch,
                                                          const std::vector<double>& thetas,
                                                          double tol = 1e-8);

struct CostBoundReport {
    bool window_ok = false;       // every sampled theta stayed within [-R, R]
    double max_abs_theta = 0.0;
    bool pointwise_ok = false;    // lifted max <= e^R * base max at each time
    double lifted_integral = 0.0; // integral of the lifted orbit max
    double base_integral = 0.0;   // integral of the base orbit max
    double window_factor = 1.0;   // e^R
};

// Flows the patch L (lifted at theta = 0) and compares the orbit sup of the
// lifted Hamiltonian e^theta H with e^R times the base orbit sup per time
// sample, plus the integrated comparison.
CostBoundReport lifted_cost_bound_check(const ContactChart& symp,
                                        const SubmanifoldPatch& base_patch,
                                        const ScalarField& h, double r_window,
                                        int time_samples = 20,
                                        double step = kDefaultFlowStep);

// --------------------------------------------------------------------------
// prequantization (planar base) side

// Hamiltonian field of F for the planar form dx^dy, omega(X, -) = -dF;
// explicitly (-dF/dy, dF/dx).
Eigen::Vector2d planar_field(const ScalarField& f, const Point& p);

// dF(X_G) for the planar form; antisymmetric.
double planar_bracket(const ScalarField& f, const ScalarField& g, const Point& p);

// F o (bundle projection): a fiberwise-constant field on the total space.
ScalarField prequant_pullback(const ScalarField& f);

// Horizontal lift of the planar field plus the vertical component with
// alpha = F; cross-checked against contact_field_at of the pullback.
TangentVector prequant_lift_field(const ContactChart& preq, const ScalarField& f,
                                  const Point& a);

struct BracketCheck {
    double max_deviation = 0.0;
    double tol = 0.0;
    bool pass = false;
};

// Contact bracket of two pullbacks against the pullback of the planar
// bracket at each sample.
BracketCheck prequant_bracket_check(const ContactChart& preq, const ScalarField& f,
                                    const ScalarField& g, const std::vector<Point>& samples,
                                    double tol = 1e-8);

// Symplectic coisotropy of a planar patch: T^perp_omega inside T.
struct PlanarVerdict {
    double max_inclusion_residual = 0.0;
    double tol = 0.0;
    bool pass = false;
};
PlanarVerdict planar_coisotropy_test(const SubmanifoldPatch& patch, double tol = 1e-8);

// Full fiber preimage of a planar patch inside the bundle chart.
SubmanifoldPatch preimage_patch(const SubmanifoldPatch& planar_patch, int fiber_samples = 8);

struct PairedVerdict {
    PlanarVerdict base;
    CoisotropyVerdict total;
    bool agree = false;
};

// Planar verdict for the patch and contact verdict for its fiber preimage.
PairedVerdict prequant_coisotropy_check(const ContactChart& preq,
                                        const SubmanifoldPatch& planar_patch,
                                        double tol = 1e-8);

// Planar patch fixtures for the bundle checks: "lagrangian-line" {y=0},
// "point2d" a single point, "whole-plane" a full-dimensional square.
SubmanifoldPatch make_planar_fixture(const std::string& name);
std::vector<std::string> planar_fixture_names();

} // namespace contactlab
