// Contact Hamiltonian dynamics: the field solve, Poisson-type brackets,
// conformal-factor rates, fixed-step isotopy integration, and the
// Hamiltonian-level composition/truncation utilities built on top.
//
// The Hamiltonian field of H is the unique X with
//
//     alpha(X) = H        and        dalpha(X, -) = dH(R) alpha(-) - dH(-),
//
// solved here as one stacked (d+1) x d least-squares system per evaluation
// with a residual monitor, so a broken chart tensor or gradient surfaces as
// an error instead of a silently wrong field.  The conformal rate dH(R)
// integrates along orbits to the factor g_t with (flow_t)^* alpha = e^{g_t} alpha.
#pragma once

#include <array>
#include <memory>
#include <vector>

#include "contactlab/chart.hpp"
#include "contactlab/scalar_field.hpp"

namespace contactlab {

inline constexpr double kDefaultFlowStep = 1e-3;
inline constexpr double kDefaultPushforwardStep = 1e-4;
// Stacked-solve residual must stay below this times (1 + |H| + |dH|).
inline constexpr double kSolveResidualRelTol = 1e-10;
// Coordinates beyond this magnitude abort integration as a blow-up.
inline constexpr double kBlowUpLimit = 1e8;

TangentVector contact_field_at(const ContactChart& chart, const ScalarField& h, double t,
                               const Point& p);

// dH_t(R) at p, the growth rate of the conformal factor along the orbit.
double conformal_rate_at(const ContactChart& chart, const ScalarField& h, double t,
                         const Point& p);

// dF(X_G) + dG(R) * F.  Not antisymmetric: pairing a field with itself gives
// 2 F dF(R).  Only defined for time-independent fields; freeze a
// time-dependent field first.
double contact_bracket_at(const ContactChart& chart, const ScalarField& f,
                          const ScalarField& g, const Point& p);

// Sign-flipped variant dF(X_G) - F * dG(R).  Antisymmetric, and the version
// under which the conjugation identity and the cone-lift bracket identity
// hold; see verify_conformal_naturality.
double contact_bracket_antisym_at(const ContactChart& chart, const ScalarField& f,
                                  const ScalarField& g, const Point& p);

// Sampled orbit of the joint ODE (dx/dt = X_{H_t}(x), dg/dt = dH_t(R)(x)).
struct Trajectory {
    ContactChart chart;
    std::shared_ptr<const ScalarField> hamiltonian;
    std::vector<double> times;
    std::vector<Point> points;     // normalized into the chart's periodic ranges
    std::vector<double> conformal; // conformal[0] == 0
    double step = 0.0;

    std::size_t size() const { return times.size(); }
    const Point& endpoint() const { return points.back(); }
    double conformal_end() const { return conformal.back(); }
};

// Classical fixed-step 4th-order integration over [t0, t1], t1 > t0.  The
// requested step is rounded so the span divides evenly.
Trajectory integrate_isotopy(const ContactChart& chart, const ScalarField& h,
                             const Point& x0, std::array<double, 2> t_span,
                             double step = kDefaultFlowStep);

// Endpoint-only integration on unnormalized coordinates.  Used wherever
// finite differences across nearby starts must not see periodic wrapping.
struct EndState {
    Eigen::VectorXd coords;
    double conformal = 0.0;
};
EndState integrate_endpoint(const ContactChart& chart, const ScalarField& h,
                            const Eigen::VectorXd& x0, double t0, double t1,
                            double step = kDefaultFlowStep);

struct FlowSample {
    Point point;
    double conformal = 0.0;
};

// Convenience handle for the flow of one Hamiltonian at a fixed step.
// Stateless: every query integrates from scratch, so it is safe to share
// across threads.  Negative times are served by flowing the negated
// Hamiltonian and need a time-independent field.
class Flow {
public:
    Flow(ContactChart chart, ScalarField h, double step = kDefaultFlowStep);

    FlowSample at(double t, const Point& p) const;
    Point map(double t, const Point& p) const { return at(t, p).point; }
    double conformal(double t, const Point& p) const { return at(t, p).conformal; }
    EndState raw(double t, const Eigen::VectorXd& x0) const;

    const ContactChart& chart() const { return chart_; }
    const ScalarField& hamiltonian() const { return h_; }
    double step() const { return step_; }

private:
    ContactChart chart_;
    ScalarField h_;
    double step_;
};

// Jacobian of the time-t flow map at p by central differences of size
// fd_step per coordinate.
Eigen::MatrixXd flow_pushforward_matrix(const ContactChart& chart, const ScalarField& h,
                                        double t, const Point& p,
                                        double fd_step = kDefaultPushforwardStep,
                                        double step = kDefaultFlowStep);

// Checks that the time-t flow map pulls alpha back to e^{g_t} alpha at p:
// compares alpha(dflow v) with e^{g_t} alpha(v) over coordinate directions v.
struct PullbackReport {
    double max_residual = 0.0;
    double tol = 0.0;
    double conformal = 0.0; // integrated g_t at p
    bool pass = false;
};
PullbackReport verify_contactomorphism(const ContactChart& chart, const ScalarField& h,
                                       const Point& p, double t,
                                       double fd_step = kDefaultPushforwardStep,
                                       double tol = 1e-6,
                                       double step = kDefaultFlowStep);

// Odd C^2 cutoff: identity for |s| >= 1/n, zero for |s| <= 1/(2n), quintic
// smoothstep blend between.  |smooth_truncation(s, n) - s| <= 1/n everywhere.
double smooth_truncation(double s, int n);
double smooth_truncation_slope(double s, int n);

// beta_n composed with G, gradient by chain rule.
ScalarField truncated(const ScalarField& g, int n);

// Generator of (flow_G^t)^{-1} o flow_H^t as a time-dependent field:
//   (t, p) |-> e^{-g_t(p)} (H_t - G_t)(flow_G^t(p)),
// where g_t is the conformal factor of G's flow.  Every evaluation
// re-integrates G's flow from p, so prefer modest outer step sizes.
ScalarField transition_hamiltonian(const ContactChart& chart, const ScalarField& g,
                                   const ScalarField& h,
                                   double step = kDefaultFlowStep);

// e^{-g} (F o phi) for phi the time-1 flow of h_psi with conformal factor g.
// This is the pull-back of F under which brackets transform naturally.
ScalarField transported_field(const ContactChart& chart, const ScalarField& f,
                              const ScalarField& h_psi,
                              double step = kDefaultFlowStep);

// Conjugation identity for the antisymmetric bracket: with phi the time-1
// flow of h_psi and g its conformal factor,
//   { e^{-g} F o phi, e^{-g} G o phi } = e^{-g} {F, G} o phi
// at each sample point.  The identity fails for the non-antisymmetric
// bracket variant, which is why this check pins the antisymmetric one.
struct NaturalityReport {
    double max_deviation = 0.0;
    double tol = 0.0;
    bool pass = false;
};
NaturalityReport verify_conformal_naturality(const ContactChart& chart,
                                             const ScalarField& h_psi,
                                             const ScalarField& f, const ScalarField& g,
                                             const std::vector<Point>& samples,
                                             double tol = 1e-5,
                                             double step = kDefaultFlowStep);

} // namespace contactlab
