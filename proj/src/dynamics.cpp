#include "contactlab/dynamics.hpp"

#include <cmath>
#include <utility>

namespace contactlab {

namespace {

struct FieldSample {
    Eigen::VectorXd x;  // contact Hamiltonian field components
    double rate;        // dH(R)
};

// Solves the stacked system
//   [ alpha ]        [ H       ]
//   [ D^T   ]  X  =  [ rate * alpha^T - grad ]
// where D(i,j) = dalpha(e_i, e_j), so (D^T X)_i = dalpha(X, e_i).
FieldSample solve_field(const ContactChart& chart, const ScalarField& h, double t,
                        const Point& p) {
    const int d = chart.dimension();
    const Eigen::RowVectorXd a = chart.alpha_covector(p);
    const Eigen::MatrixXd dmat = chart.dalpha_matrix(p);
    const double hval = h.value(t, p);
    const Eigen::VectorXd grad = h.gradient(t, p);
    const double rate = grad.dot(chart.reeb(p).components);

    Eigen::MatrixXd m(d + 1, d);
    m.row(0) = a;
    m.bottomRows(d) = dmat.transpose();
    Eigen::VectorXd rhs(d + 1);
    rhs[0] = hval;
    for (int i = 0; i < d; ++i) rhs[1 + i] = rate * a[i] - grad[i];

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    if (qr.rank() < d)
        throw DegenerateChartError("contact field solve: stacked tensor matrix of chart " +
                                   chart.name() + " is rank-deficient");
    const Eigen::VectorXd x = qr.solve(rhs);

    const double resid = (m * x - rhs).cwiseAbs().maxCoeff();
    const double bound = kSolveResidualRelTol * (1.0 + std::abs(hval) + grad.norm());
    if (!(resid <= bound))
        throw InconsistentSystemError(
            "contact field solve: residual " + std::to_string(resid) + " exceeds bound " +
            std::to_string(bound) + " for field '" + h.label() + "' on " + chart.name());
    return {x, rate};
}

void check_contact_chart(const ContactChart& chart, const char* where) {
    if (!chart.has_contact_form())
        throw UnsupportedFormError(std::string(where) + ": chart " + chart.name() +
                                   " carries no contact form");
}

void check_time_independent(const ScalarField& f, const char* where) {
    if (f.time_dependent())
        throw InputError(std::string(where) + ": field '" + f.label() +
                         "' is time-dependent; freeze a time slice first");
}

} // namespace

TangentVector contact_field_at(const ContactChart& chart, const ScalarField& h, double t,
                               const Point& p) {
    check_contact_chart(chart, "contact_field_at");
    return TangentVector(p, solve_field(chart, h, t, p).x);
}

double conformal_rate_at(const ContactChart& chart, const ScalarField& h, double t,
                         const Point& p) {
    check_contact_chart(chart, "conformal_rate_at");
    return h.gradient(t, p).dot(chart.reeb(p).components);
}

double contact_bracket_at(const ContactChart& chart, const ScalarField& f,
                          const ScalarField& g, const Point& p) {
    check_contact_chart(chart, "contact_bracket_at");
    check_time_independent(f, "contact_bracket_at");
    check_time_independent(g, "contact_bracket_at");
    const FieldSample xg = solve_field(chart, g, 0.0, p);
    return f.gradient(0.0, p).dot(xg.x) + xg.rate * f.value(0.0, p);
}

double contact_bracket_antisym_at(const ContactChart& chart, const ScalarField& f,
                                  const ScalarField& g, const Point& p) {
    check_contact_chart(chart, "contact_bracket_antisym_at");
    check_time_independent(f, "contact_bracket_antisym_at");
    check_time_independent(g, "contact_bracket_antisym_at");
    const FieldSample xg = solve_field(chart, g, 0.0, p);
    return f.gradient(0.0, p).dot(xg.x) - f.value(0.0, p) * xg.rate;
}

namespace {

// One classical 4th-order step of the joint (coords, conformal) state.
// y has length d+1 with g in the final slot.
Eigen::VectorXd joint_derivative(const ContactChart& chart, const ScalarField& h, double t,
                                 const Eigen::VectorXd& y) {
    const int d = chart.dimension();
    Point p(y.head(d));
    const FieldSample fs = solve_field(chart, h, t, p);
    Eigen::VectorXd dy(d + 1);
    dy.head(d) = fs.x;
    dy[d] = fs.rate;
    return dy;
}

Eigen::VectorXd rk4_step(const ContactChart& chart, const ScalarField& h, double t,
                         const Eigen::VectorXd& y, double hstep) {
    const Eigen::VectorXd k1 = joint_derivative(chart, h, t, y);
    const Eigen::VectorXd k2 = joint_derivative(chart, h, t + 0.5 * hstep, y + (0.5 * hstep) * k1);
    const Eigen::VectorXd k3 = joint_derivative(chart, h, t + 0.5 * hstep, y + (0.5 * hstep) * k2);
    const Eigen::VectorXd k4 = joint_derivative(chart, h, t + hstep, y + hstep * k3);
    return y + (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

bool state_ok(const Eigen::VectorXd& y) {
    return y.allFinite() && y.cwiseAbs().maxCoeff() < kBlowUpLimit;
}

struct StepPlan {
    int n;
    double h;
};

StepPlan plan_steps(double t0, double t1, double step, const char* where) {
    if (!(step > 0.0)) throw InputError(std::string(where) + ": step must be positive");
    if (!(t1 > t0)) throw InputError(std::string(where) + ": need t1 > t0");
    const double span = t1 - t0;
    int n = static_cast<int>(std::lround(span / step));
    if (n < 1) n = 1;
    return {n, span / n};
}

Eigen::VectorXd integrate_state(const ContactChart& chart, const ScalarField& h,
                                const Eigen::VectorXd& x0, double t0, double t1,
                                double step,
                                const std::function<void(double, const Eigen::VectorXd&)>& on_sample) {
    const int d = chart.dimension();
    if (static_cast<int>(x0.size()) != d)
        throw InputError("integrate: start point has dimension " +
                         std::to_string(x0.size()) + ", chart " + chart.name() + " needs " +
                         std::to_string(d));
    const StepPlan plan = plan_steps(t0, t1, step, "integrate");

    Eigen::VectorXd y(d + 1);
    y.head(d) = x0;
    y[d] = 0.0;
    if (!state_ok(y)) throw BlowUpError("integrate: start state not finite", t0);
    if (on_sample) on_sample(t0, y);

    for (int i = 0; i < plan.n; ++i) {
        const double t = t0 + i * plan.h;
        y = rk4_step(chart, h, t, y, plan.h);
        if (!state_ok(y))
            throw BlowUpError("integrate: state left the finite range under field '" +
                                  h.label() + "'",
                              t);
        if (on_sample) on_sample(t0 + (i + 1) * plan.h, y);
    }
    return y;
}

} // namespace

Trajectory integrate_isotopy(const ContactChart& chart, const ScalarField& h,
                             const Point& x0, std::array<double, 2> t_span, double step) {
    check_contact_chart(chart, "integrate_isotopy");
    Trajectory traj{chart, nullptr, {}, {}, {}, 0.0};
    traj.hamiltonian = std::make_shared<const ScalarField>(h);
    traj.step = plan_steps(t_span[0], t_span[1], step, "integrate_isotopy").h;
    const int d = chart.dimension();
    integrate_state(chart, h, x0.coords, t_span[0], t_span[1], step,
                    [&](double t, const Eigen::VectorXd& y) {
                        traj.times.push_back(t);
                        traj.points.push_back(chart.normalize(Point(y.head(d))));
                        traj.conformal.push_back(y[d]);
                    });
    return traj;
}

EndState integrate_endpoint(const ContactChart& chart, const ScalarField& h,
                            const Eigen::VectorXd& x0, double t0, double t1, double step) {
    check_contact_chart(chart, "integrate_endpoint");
    const Eigen::VectorXd y = integrate_state(chart, h, x0, t0, t1, step, nullptr);
    return {y.head(chart.dimension()), y[chart.dimension()]};
}

Flow::Flow(ContactChart chart, ScalarField h, double step)
    : chart_(std::move(chart)), h_(std::move(h)), step_(step) {
    check_contact_chart(chart_, "Flow");
    if (!(step_ > 0.0)) throw InputError("Flow: step must be positive");
}

EndState Flow::raw(double t, const Eigen::VectorXd& x0) const {
    if (t == 0.0) return {x0, 0.0};
    if (t > 0.0) return integrate_endpoint(chart_, h_, x0, 0.0, t, step_);
    check_time_independent(h_, "Flow at negative time");
    // flow of -H traverses the same orbits backwards; its conformal factor
    // integrand is -dH(R) along them, matching g_{-t}
    return integrate_endpoint(chart_, fields::scale(h_, -1.0), x0, 0.0, -t, step_);
}

FlowSample Flow::at(double t, const Point& p) const {
    const EndState e = raw(t, p.coords);
    return {chart_.normalize(Point(e.coords)), e.conformal};
}

Eigen::MatrixXd flow_pushforward_matrix(const ContactChart& chart, const ScalarField& h,
                                        double t, const Point& p, double fd_step,
                                        double step) {
    if (!(fd_step > 0.0)) throw InputError("flow_pushforward_matrix: fd_step must be positive");
    const int d = chart.dimension();
    Flow flow(chart, h, step);
    Eigen::MatrixXd jac(d, d);
    Eigen::VectorXd probe = p.coords;
    for (int i = 0; i < d; ++i) {
        const double saved = probe[i];
        probe[i] = saved + fd_step;
        const Eigen::VectorXd hi = flow.raw(t, probe).coords;
        probe[i] = saved - fd_step;
        const Eigen::VectorXd lo = flow.raw(t, probe).coords;
        probe[i] = saved;
        jac.col(i) = (hi - lo) / (2.0 * fd_step);
    }
    return jac;
}

PullbackReport verify_contactomorphism(const ContactChart& chart, const ScalarField& h,
                                       const Point& p, double t, double fd_step, double tol,
                                       double step) {
    check_contact_chart(chart, "verify_contactomorphism");
    Flow flow(chart, h, step);
    const EndState end = flow.raw(t, p.coords);
    const Point image(end.coords);
    const Eigen::MatrixXd jac = flow_pushforward_matrix(chart, h, t, p, fd_step, step);
    const double weight = std::exp(end.conformal);

    PullbackReport rep;
    rep.tol = tol;
    rep.conformal = end.conformal;
    for (int i = 0; i < chart.dimension(); ++i) {
        TangentVector v(p, Eigen::VectorXd::Unit(chart.dimension(), i));
        TangentVector pushed(image, jac.col(i));
        const double resid = std::abs(chart.alpha(pushed) - weight * chart.alpha(v));
        rep.max_residual = std::max(rep.max_residual, resid);
    }
    rep.pass = rep.max_residual <= tol;
    return rep;
}

double smooth_truncation(double s, int n) {
    if (n < 1) throw InputError("smooth_truncation: need n >= 1");
    const double lo = 1.0 / (2.0 * n), hi = 1.0 / n;
    const double a = std::abs(s);
    if (a >= hi) return s;
    if (a <= lo) return 0.0;
    const double u = (a - lo) / (hi - lo);
    const double q = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
    return s * q;
}

double smooth_truncation_slope(double s, int n) {
    if (n < 1) throw InputError("smooth_truncation_slope: need n >= 1");
    const double lo = 1.0 / (2.0 * n), hi = 1.0 / n;
    const double a = std::abs(s);
    if (a >= hi) return 1.0;
    if (a <= lo) return 0.0;
    const double u = (a - lo) / (hi - lo);
    const double q = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
    const double dq = 30.0 * u * u * (1.0 - u) * (1.0 - u) / (hi - lo);
    // d/ds [s q(|s|)] = q + s sign(s) q'(|s|) = q + |s| q'(|s|)
    return q + a * dq;
}

ScalarField truncated(const ScalarField& g, int n) {
    if (n < 1) throw InputError("truncated: need n >= 1");
    ScalarField f("trunc" + std::to_string(n) + "(" + g.label() + ")", g.dimension(),
                  [g, n](double t, const Point& p) {
                      return smooth_truncation(g.value(t, p), n);
                  },
                  [g, n](double t, const Point& p) -> Eigen::VectorXd {
                      return smooth_truncation_slope(g.value(t, p), n) * g.gradient(t, p);
                  });
    if (g.time_dependent()) f.mark_time_dependent();
    if (g.extent()) f.set_extent(*g.extent(), g.compactly_supported());
    return f;
}

ScalarField transition_hamiltonian(const ContactChart& chart, const ScalarField& g,
                                   const ScalarField& h, double step) {
    check_contact_chart(chart, "transition_hamiltonian");
    if (g.dimension() != chart.dimension() || h.dimension() != chart.dimension())
        throw InputError("transition_hamiltonian: field/chart dimension mismatch");
    Flow flow_g(chart, g, step);
    ScalarField f("transition(" + h.label() + "|" + g.label() + ")", chart.dimension(),
                  [flow_g, g, h](double t, const Point& p) {
                      if (t == 0.0) return h.value(0.0, p) - g.value(0.0, p);
                      const EndState e = flow_g.raw(t, p.coords);
                      const Point q(e.coords);
                      return std::exp(-e.conformal) * (h.value(t, q) - g.value(t, q));
                  });
    f.mark_time_dependent();
    return f;
}

ScalarField transported_field(const ContactChart& chart, const ScalarField& f,
                              const ScalarField& h_psi, double step) {
    check_contact_chart(chart, "transported_field");
    check_time_independent(f, "transported_field");
    Flow psi(chart, h_psi, step);
    return ScalarField("transport(" + f.label() + "|" + h_psi.label() + ")",
                       chart.dimension(), [psi, f](double, const Point& p) {
                           const EndState e = psi.raw(1.0, p.coords);
                           return std::exp(-e.conformal) * f.value(0.0, Point(e.coords));
                       });
}

NaturalityReport verify_conformal_naturality(const ContactChart& chart,
                                             const ScalarField& h_psi, const ScalarField& f,
                                             const ScalarField& g,
                                             const std::vector<Point>& samples, double tol,
                                             double step) {
    check_contact_chart(chart, "verify_conformal_naturality");
    const ScalarField u = transported_field(chart, f, h_psi, step);
    const ScalarField v = transported_field(chart, g, h_psi, step);
    Flow psi(chart, h_psi, step);

    NaturalityReport rep;
    rep.tol = tol;
    for (const Point& p : samples) {
        const double lhs = contact_bracket_antisym_at(chart, u, v, p);
        const EndState e = psi.raw(1.0, p.coords);
        const double rhs =
            std::exp(-e.conformal) * contact_bracket_antisym_at(chart, f, g, Point(e.coords));
        rep.max_deviation = std::max(rep.max_deviation, std::abs(lhs - rhs));
    }
    rep.pass = rep.max_deviation <= tol;
    return rep;
}

} // namespace contactlab
