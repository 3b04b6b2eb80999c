#include "contactlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>

#include "contactlab/parallel.hpp"

namespace contactlab {

std::string to_string(CostKind kind) {
    switch (kind) {
    case CostKind::Shelukhin: return "shelukhin";
    case CostKind::Orbit: return "orbit";
    case CostKind::RS: return "rs";
    case CostKind::Modified: return "modified";
    case CostKind::CircleDelta: return "circle-delta";
    }
    return "?";
}

std::string to_string(BoundDirection dir) {
    switch (dir) {
    case BoundDirection::Upper: return "upper";
    case BoundDirection::Exact: return "exact";
    case BoundDirection::Lower: return "lower";
    }
    return "?";
}

std::size_t GridSpec::count() const {
    if (points_per_axis < 2) throw InputError("grid needs at least 2 points per axis");
    if (dim() < 1) throw InputError("grid box has no axes");
    std::size_t n = 1;
    for (int i = 0; i < dim(); ++i) {
        n *= static_cast<std::size_t>(points_per_axis);
        if (n > (std::size_t{1} << 33))
            throw InputError("grid would exceed 2^33 points; coarsen it");
    }
    return n;
}

Eigen::VectorXd GridSpec::point(std::size_t flat) const {
    const int d = dim();
    const auto ppa = static_cast<std::size_t>(points_per_axis);
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) {
        const auto idx = flat % ppa;
        flat /= ppa;
        x[i] = box.lo[i] +
               (box.hi[i] - box.lo[i]) * static_cast<double>(idx) /
                   static_cast<double>(points_per_axis - 1);
    }
    return x;
}

std::string GridSpec::note() const {
    char buf[64];
    std::string s = std::to_string(points_per_axis) + "^" + std::to_string(dim()) +
                    " grid on ";
    for (int i = 0; i < dim(); ++i) {
        std::snprintf(buf, sizeof buf, "[%.6g,%.6g]", box.lo[i], box.hi[i]);
        if (i) s += "x";
        s += buf;
    }
    return s;
}

GridSpec default_grid(const ContactChart& chart, const ScalarField& h,
                      int points_per_axis) {
    if (h.dimension() != chart.dimension())
        throw InputError("default_grid: field '" + h.label() + "' does not live on " +
                         chart.name());
    if (h.extent()) return GridSpec{*h.extent(), points_per_axis};
    if (chart.kind() == ChartKind::Circle)
        return GridSpec{Box::cube(1, 0.0, 1.0), points_per_axis};
    throw InputError("field '" + h.label() +
                     "' has no extent box and the chart is not compact; a grid max "
                     "would be meaningless");
}

namespace {

struct SweepStats {
    double max_abs = 0.0;
    double max_v = -std::numeric_limits<double>::infinity();
    double min_v = std::numeric_limits<double>::infinity();
};

// Grid extrema of H_t; chunks reduce privately and merge under a lock, so
// the result is independent of the chunk schedule.
SweepStats sweep_values(const ScalarField& h, const GridSpec& grid, double t) {
    SweepStats total;
    std::mutex merge;
    parallel_chunks(grid.count(), [&](std::size_t lo, std::size_t hi) {
        SweepStats local;
        for (std::size_t i = lo; i < hi; ++i) {
            const double v = h.value(t, Point(grid.point(i)));
            local.max_abs = std::max(local.max_abs, std::abs(v));
            local.max_v = std::max(local.max_v, v);
            local.min_v = std::min(local.min_v, v);
        }
        std::lock_guard<std::mutex> guard(merge);
        total.max_abs = std::max(total.max_abs, local.max_abs);
        total.max_v = std::max(total.max_v, local.max_v);
        total.min_v = std::min(total.min_v, local.min_v);
    });
    return total;
}

double trapezoid(const std::vector<double>& samples) {
    const std::size_t n = samples.size();
    if (n < 2) throw InputError("trapezoid needs at least two samples");
    double sum = 0.5 * (samples.front() + samples.back());
    for (std::size_t j = 1; j + 1 < n; ++j) sum += samples[j];
    return sum / static_cast<double>(n - 1);
}

void check_time_steps(int time_steps) {
    if (time_steps < 1) throw InputError("need at least one time step");
}

// Conformal-factor extremes over the flow grid: the running min of g along
// every orbit (all integrator steps) and the largest |g| at time 1.
struct ConformalSweep {
    double min_g = 0.0;       // min over grid points, orbits start at g = 0
    double max_abs_g1 = 0.0;
};

ConformalSweep sweep_conformal(const ContactChart& chart, const ScalarField& h,
                               const GridSpec& flow_grid, double flow_step) {
    ConformalSweep total;
    std::mutex merge;
    parallel_chunks(flow_grid.count(), [&](std::size_t lo, std::size_t hi) {
        ConformalSweep local;
        for (std::size_t i = lo; i < hi; ++i) {
            const Trajectory traj = integrate_isotopy(
                chart, h, Point(flow_grid.point(i)), {0.0, 1.0}, flow_step);
            for (double g : traj.conformal) local.min_g = std::min(local.min_g, g);
            local.max_abs_g1 = std::max(local.max_abs_g1, std::abs(traj.conformal_end()));
        }
        std::lock_guard<std::mutex> guard(merge);
        total.min_g = std::min(total.min_g, local.min_g);
        total.max_abs_g1 = std::max(total.max_abs_g1, local.max_abs_g1);
    });
    return total;
}

void check_chart_field(const ContactChart& chart, const ScalarField& h,
                       const GridSpec& grid, const char* where) {
    if (!chart.has_contact_form())
        throw UnsupportedFormError(std::string(where) + ": chart " + chart.name() +
                                   " carries no contact form");
    if (h.dimension() != chart.dimension() || grid.dim() != chart.dimension())
        throw InputError(std::string(where) + ": field or grid dimension does not match " +
                         chart.name());
}

// Per-time-sample grid stats, with the single-sweep shortcut for
// time-independent fields.
std::vector<SweepStats> time_sweeps(const ScalarField& h, const GridSpec& grid,
                                    int time_steps) {
    std::vector<SweepStats> stats(static_cast<std::size_t>(time_steps) + 1);
    if (!h.time_dependent()) {
        const SweepStats s = sweep_values(h, grid, 0.0);
        for (auto& slot : stats) slot = s;
        return stats;
    }
    for (int j = 0; j <= time_steps; ++j)
        stats[static_cast<std::size_t>(j)] =
            sweep_values(h, grid, static_cast<double>(j) / time_steps);
    return stats;
}

} // namespace

CostReport shelukhin_cost(const ContactChart& chart, const ScalarField& h,
                          const GridSpec& grid, int time_steps) {
    check_chart_field(chart, h, grid, "shelukhin_cost");
    check_time_steps(time_steps);
    const auto stats = time_sweeps(h, grid, time_steps);
    std::vector<double> maxima;
    maxima.reserve(stats.size());
    for (const auto& s : stats) maxima.push_back(s.max_abs);

    CostReport report;
    report.kind = CostKind::Shelukhin;
    report.value = trapezoid(maxima);
    report.bound = BoundDirection::Upper;
    report.certificate = "path cost of the isotopy generated by '" + h.label() +
                         "' over [0,1]; trapezoid of the grid max of |H_t|";
    report.grid_note = grid.note();
    report.time_steps = time_steps;
    return report;
}

CostReport orbit_cost(const ContactChart& chart, const ScalarField& h,
                      const SubmanifoldPatch& l, int time_steps, double flow_step) {
    if (h.dimension() != chart.dimension())
        throw InputError("orbit_cost: field '" + h.label() + "' does not live on " +
                         chart.name());
    if (l.sample_grid.empty())
        throw InputError("orbit_cost: patch '" + l.name + "' has no sample grid");
    check_time_steps(time_steps);

    std::vector<Trajectory> orbits;
    orbits.reserve(l.sample_grid.size());
    for (const auto& u : l.sample_grid)
        orbits.push_back(integrate_isotopy(chart, h, l.at(u), {0.0, 1.0}, flow_step));

    std::vector<double> maxima(static_cast<std::size_t>(time_steps) + 1, 0.0);
    for (int j = 0; j <= time_steps; ++j) {
        const double t = static_cast<double>(j) / time_steps;
        double m = 0.0;
        for (const auto& orbit : orbits) {
            const auto idx = static_cast<std::size_t>(std::lround(t / orbit.step));
            const Point& q = orbit.points[std::min(idx, orbit.size() - 1)];
            m = std::max(m, std::abs(h.value(t, q)));
        }
        maxima[static_cast<std::size_t>(j)] = m;
    }

    CostReport report;
    report.kind = CostKind::Orbit;
    report.value = trapezoid(maxima);
    report.bound = BoundDirection::Upper;
    report.certificate = "orbit cost moving patch '" + l.name + "' (" +
                         std::to_string(l.sample_grid.size()) +
                         " samples) along the flow of '" + h.label() + "'";
    report.grid_note = "flow step " + std::to_string(flow_step);
    report.time_steps = time_steps;
    return report;
}

CostReport rs_cost(const ContactChart& chart, const ScalarField& h, const GridSpec& grid,
                   int time_steps, int flow_points, double flow_step) {
    check_chart_field(chart, h, grid, "rs_cost");
    check_time_steps(time_steps);
    const auto stats = time_sweeps(h, grid, time_steps);
    std::vector<double> osc;
    osc.reserve(stats.size());
    for (const auto& s : stats) osc.push_back(s.max_v - s.min_v);
    const GridSpec flow_grid = grid.coarsened(flow_points);
    const ConformalSweep conf = sweep_conformal(chart, h, flow_grid, flow_step);

    CostReport report;
    report.kind = CostKind::RS;
    report.value = std::exp(-conf.min_g) * trapezoid(osc);
    report.bound = BoundDirection::Upper;
    report.certificate =
        "per-path estimate for the isotopy generated by '" + h.label() +
        "': e^{-min g} * integrated oscillation, min g = " + std::to_string(conf.min_g);
    report.grid_note = grid.note() + "; conformal sweep on " + flow_grid.note() +
                       ", step " + std::to_string(flow_step);
    report.time_steps = time_steps;
    return report;
}

CostReport modified_cost(const ContactChart& chart, const ScalarField& h,
                         const GridSpec& grid, int time_steps, int flow_points,
                         double flow_step) {
    check_chart_field(chart, h, grid, "modified_cost");
    CostReport she = shelukhin_cost(chart, h, grid, time_steps);
    const GridSpec flow_grid = grid.coarsened(flow_points);
    const ConformalSweep conf = sweep_conformal(chart, h, flow_grid, flow_step);

    CostReport report;
    report.kind = CostKind::Modified;
    report.value = she.value + conf.max_abs_g1;
    report.bound = BoundDirection::Upper;
    report.certificate = she.certificate + "; plus grid max |g at time 1| = " +
                         std::to_string(conf.max_abs_g1);
    report.grid_note = grid.note() + "; conformal sweep on " + flow_grid.note() +
                       ", step " + std::to_string(flow_step);
    report.time_steps = time_steps;
    return report;
}

CostReport circle_delta(const Point& p, const Point& q) {
    if (p.dim() != 1 || q.dim() != 1)
        throw InputError("circle_delta expects 1-coordinate circle points");
    // signed shortest rotation amount in [-1/2, 1/2]
    double delta = q[0] - p[0];
    delta -= std::round(delta);

    CostReport report;
    report.kind = CostKind::CircleDelta;
    report.value = std::abs(delta);
    report.bound = BoundDirection::Exact;
    char buf[96];
    std::snprintf(buf, sizeof buf, "rotation s -> s %c %.12g t, t in [0,1]",
                  delta < 0 ? '-' : '+', std::abs(delta));
    report.certificate = buf;
    report.grid_note = "closed form";
    report.time_steps = 0;
    return report;
}

CircleBoundReport circle_lower_bound_check(const ScalarField& h, const Point& p,
                                           int time_steps, double step) {
    check_time_steps(time_steps);
    const ContactChart circle = ContactChart::circle();
    const double eff_step = std::min(step, 1.0 / time_steps);
    const Trajectory traj = integrate_isotopy(circle, h, p, {0.0, 1.0}, eff_step);

    std::vector<double> speed;
    speed.reserve(traj.size());
    for (std::size_t j = 0; j < traj.size(); ++j)
        speed.push_back(std::abs(h.value(traj.times[j], traj.points[j])));

    CircleBoundReport report;
    report.path_integral = trapezoid(speed);
    report.distance = circle_delta(p, traj.endpoint()).value;
    report.pass = report.path_integral >= report.distance - report.slack;
    return report;
}

ConjugationReport conjugation_cost_check(const ContactChart& chart, const ScalarField& h,
                                         const ScalarField& k_psi, const GridSpec& grid,
                                         int time_steps, double rel_tol, double step) {
    check_chart_field(chart, h, grid, "conjugation_cost_check");
    check_time_steps(time_steps);
    if (k_psi.time_dependent())
        throw InputError("conjugation_cost_check: the conjugating generator must be "
                         "time-independent so its flow inverts cleanly");
    const Flow psi(chart, k_psi, step);
    const std::size_t n = grid.count();

    // per grid point z: w = psi^{-1}(z) by reverse integration, f(w) by
    // forward integration, both cached for the time sweep
    std::vector<Eigen::VectorXd> w(n);
    std::vector<double> f_at_w(n), f_at_grid(n);
    parallel_chunks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const Eigen::VectorXd z = grid.point(i);
            w[i] = psi.raw(-1.0, z).coords;
            f_at_w[i] = psi.raw(1.0, w[i]).conformal;
            f_at_grid[i] = psi.raw(1.0, z).conformal;
        }
    });

    const int t_samples = h.time_dependent() ? time_steps : 0;
    std::vector<double> conj_max(static_cast<std::size_t>(t_samples) + 1, 0.0);
    std::vector<double> resc_max(conj_max.size(), 0.0);
    std::vector<double> orig_max(conj_max.size(), 0.0);
    std::mutex merge;
    parallel_chunks(n, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> lc(conj_max.size(), 0.0), lr(conj_max.size(), 0.0),
            lo_max(conj_max.size(), 0.0);
        for (std::size_t i = lo; i < hi; ++i) {
            const Point wz(w[i]);
            const Point z(grid.point(i));
            for (std::size_t j = 0; j < conj_max.size(); ++j) {
                const double t =
                    t_samples == 0 ? 0.0 : static_cast<double>(j) / t_samples;
                lc[j] = std::max(lc[j], std::exp(f_at_w[i]) * std::abs(h.value(t, wz)));
                lr[j] = std::max(lr[j], std::exp(f_at_grid[i]) * std::abs(h.value(t, z)));
                lo_max[j] = std::max(lo_max[j], std::abs(h.value(t, z)));
            }
        }
        std::lock_guard<std::mutex> guard(merge);
        for (std::size_t j = 0; j < conj_max.size(); ++j) {
            conj_max[j] = std::max(conj_max[j], lc[j]);
            resc_max[j] = std::max(resc_max[j], lr[j]);
            orig_max[j] = std::max(orig_max[j], lo_max[j]);
        }
    });

    auto integrate = [&](const std::vector<double>& m) {
        return m.size() == 1 ? m[0] : trapezoid(m);
    };

    ConjugationReport report;
    report.rel_tol = rel_tol;
    report.cost_original = integrate(orig_max);
    report.cost_conjugated = integrate(conj_max);
    report.cost_rescaled = integrate(resc_max);
    double fmin = std::numeric_limits<double>::infinity(), fmax = -fmin;
    for (double f : f_at_grid) {
        fmin = std::min(fmin, f);
        fmax = std::max(fmax, f);
    }
    report.c_minus = std::exp(fmin);
    report.c_plus = std::exp(fmax);
    const double scale = std::max({report.cost_rescaled, report.cost_conjugated, 1e-12});
    report.identity_rel_dev =
        std::abs(report.cost_conjugated - report.cost_rescaled) / scale;
    report.sandwich_ok =
        report.cost_conjugated >= report.c_minus * report.cost_original * (1.0 - rel_tol) &&
        report.cost_conjugated <= report.c_plus * report.cost_original * (1.0 + rel_tol);
    report.pass = report.identity_rel_dev <= rel_tol && report.sandwich_ok;
    return report;
}

std::vector<NoncompRow> noncomparability_table(const std::vector<int>& k_list,
                                               const NormParams& params) {
    if (k_list.empty()) throw InputError("noncomparability_table: empty k list");
    for (int k : k_list) {
        if (k < 1) throw InputError("noncomparability_table: k must be positive");
        if (k > 12)
            throw InputError("noncomparability_table: k = " + std::to_string(k) +
                             " exceeds the overflow guard k <= 12; e^{-min g} would "
                             "dwarf double precision usefully long before that");
    }
    const ContactChart chart = ContactChart::darboux(1);
    std::vector<NoncompRow> rows;
    rows.reserve(k_list.size());
    for (int k : k_list) {
        const ScalarField h = fields::oscillating_bump(k);
        const GridSpec grid{*h.extent(), params.value_points};
        const GridSpec flow_grid = grid.coarsened(params.flow_points);

        // one value sweep and one conformal sweep feed all three costs
        const SweepStats stats = sweep_values(h, grid, 0.0);
        const ConformalSweep conf =
            sweep_conformal(chart, h, flow_grid, params.flow_step);
        const Trajectory origin_orbit = integrate_isotopy(
            chart, h, Point{0.0, 0.0, 0.0}, {0.0, 1.0}, params.flow_step);

        NoncompRow row;
        row.k = k;
        row.shelukhin = stats.max_abs;
        row.rs = std::exp(-conf.min_g) * (stats.max_v - stats.min_v);
        row.modified = stats.max_abs + conf.max_abs_g1;
        row.g1_at_origin = origin_orbit.conformal_end();
        row.rs_log = -conf.min_g + std::log(stats.max_v - stats.min_v);
        rows.push_back(row);
    }
    return rows;
}

std::string noncomparability_csv(const std::vector<NoncompRow>& rows) {
    std::string csv = "k,shelukhin,rs,modified,g1_at_origin\n";
    char buf[160];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.12g,%.12g\n", row.k,
                      row.shelukhin, row.rs, row.modified, row.g1_at_origin);
        csv += buf;
    }
    return csv;
}

} // namespace contactlab
