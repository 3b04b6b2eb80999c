// Certified cost estimators for contact isotopies.  Every number produced
// here is a certificate tied to one explicit generating path and one
// explicit sampling grid, never a claimed infimum: upper bounds come from
// integrating grid maxima along the given path, the circle distance is the
// one exactly computable case, and each report records which kind it is.
//
// Conformal-factor sweeps (the e^{-min g} weight and the time-1 factor)
// integrate an orbit per grid point and are therefore run on a coarser
// "flow grid" than the value sweeps; both grids are reported.
#pragma once

#include <string>
#include <vector>

#include "contactlab/dynamics.hpp"
#include "contactlab/submanifold.hpp"

namespace contactlab {

enum class CostKind { Shelukhin, Orbit, RS, Modified, CircleDelta };
enum class BoundDirection { Upper, Exact, Lower };

std::string to_string(CostKind kind);
std::string to_string(BoundDirection dir);

// Uniform grid over a box, endpoints included, axis 0 varying fastest.
// Odd point counts put the box centre on the grid exactly.
struct GridSpec {
    Box box;
    int points_per_axis = 201;

    int dim() const { return box.dim(); }
    std::size_t count() const;
    Eigen::VectorXd point(std::size_t flat) const;
    std::string note() const;
    GridSpec coarsened(int points) const { return GridSpec{box, points}; }
};

// Grid derived from the field's declared extent box; the circle chart gets
// its full fundamental domain.  Anything else without an extent is an
// unbounded sweep request and an input error.
GridSpec default_grid(const ContactChart& chart, const ScalarField& h,
                      int points_per_axis = 201);

struct CostReport {
    CostKind kind = CostKind::Shelukhin;
    double value = 0.0;
    BoundDirection bound = BoundDirection::Upper;
    std::string certificate; // the path used, or the exact argument
    std::string grid_note;   // grid and step metadata
    int time_steps = 0;
};

// integral over [0,1] of the grid max of |H_t|, trapezoid in time; the cost
// of the path t -> flow_t(H), an upper bound for any cost attributed to its
// time-1 map.  Time-independent fields are swept once.
CostReport shelukhin_cost(const ContactChart& chart, const ScalarField& h,
                          const GridSpec& grid, int time_steps);

// integral over [0,1] of max over the flowed samples of L of |H_t|: the
// orbit-cost certificate for moving L to its time-1 image.
CostReport orbit_cost(const ContactChart& chart, const ScalarField& h,
                      const SubmanifoldPatch& l, int time_steps,
                      double flow_step = kDefaultFlowStep);

// e^{-min g} times the integrated oscillation (grid max - grid min of H_t),
// where min g runs over the flow grid, every integrator step, and t in
// [0,1].  A per-path quantity: nothing here claims path-independence.
CostReport rs_cost(const ContactChart& chart, const ScalarField& h, const GridSpec& grid,
                   int time_steps, int flow_points = 11, double flow_step = 5e-3);

// shelukhin_cost plus the flow-grid max of |g at time 1|.
CostReport modified_cost(const ContactChart& chart, const ScalarField& h,
                         const GridSpec& grid, int time_steps, int flow_points = 11,
                         double flow_step = 5e-3);

// Angular distance min(|p-q|, 1-|p-q|) on the circle, exact, with the
// rotation path s -> s + t*delta as certificate.
CostReport circle_delta(const Point& p, const Point& q);

// Verifies the circle lower-bound chain for one path: the integral of
// |H_t| along the orbit of p dominates the angular distance from p to its
// time-1 image, up to the recorded slack.  Quadrature runs on the
// trajectory's own step grid; time_steps sets a floor on its resolution.
struct CircleBoundReport {
    double path_integral = 0.0;
    double distance = 0.0;
    double slack = 1e-6;
    bool pass = false;
};
CircleBoundReport circle_lower_bound_check(const ScalarField& h, const Point& p,
                                           int time_steps,
                                           double step = kDefaultFlowStep);

// Conjugation behaviour of the path cost.  With psi the time-1 flow of
// k_psi (time-independent) and f its conformal factor, the conjugated path
// is generated by (e^f H_t) o psi^{-1}; the check computes
//   (a) the conjugated cost by honestly round-tripping psi^{-1} per grid
//       point, against the cost of H measured in the rescaled form e^f
//       alpha (identity up to grid coverage), and
//   (b) the sandwich  min_grid e^f * cost(H) <= conjugated cost <=
//       max_grid e^f * cost(H), within the relative tolerance.
struct ConjugationReport {
    double cost_original = 0.0;   // integral of grid max |H_t|
    double cost_conjugated = 0.0; // same for the conjugated path
    double cost_rescaled = 0.0;   // integral of grid max e^f |H_t|
    double c_minus = 1.0;         // grid min of e^f
    double c_plus = 1.0;          // grid max of e^f
    double identity_rel_dev = 0.0;
    bool sandwich_ok = false;
    double rel_tol = 0.0;
    bool pass = false;
};
ConjugationReport conjugation_cost_check(const ContactChart& chart, const ScalarField& h,
                                         const ScalarField& k_psi, const GridSpec& grid,
                                         int time_steps, double rel_tol = 0.05,
                                         double step = 5e-3);

// One row of the oscillating-family experiment on darboux:1.
struct NoncompRow {
    int k = 0;
    double shelukhin = 0.0;
    double rs = 0.0;
    double modified = 0.0;
    double g1_at_origin = 0.0;
    double rs_log = 0.0; // ln(rs), the headline number once rs is large
};

struct NormParams {
    int value_points = 201; // per axis, value sweeps
    int flow_points = 11;   // per axis, conformal-factor sweeps
    int time_steps = 32;
    double flow_step = 5e-3;
};

// Runs the bump * sin(k^2 z)/k family for every k in the list and collects
// the three costs plus the conformal factor at the origin.  k is capped at
// 12: beyond that e^{-min g} is astronomically large and only ln(rs) (the
// rs_log field) remains meaningful.
std::vector<NoncompRow> noncomparability_table(const std::vector<int>& k_list,
                                               const NormParams& params = {});

// CSV with header k,shelukhin,rs,modified,g1_at_origin; '.' decimal,
// ',' separator, LF endings, %.12g values - byte-stable across runs.
std::string noncomparability_csv(const std::vector<NoncompRow>& rows);

} // namespace contactlab
