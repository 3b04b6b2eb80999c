// Scalar fields (Hamiltonians, defining functions, conformal weights) as
// value/gradient closure pairs.  Fields built from the combinators below
// carry analytic gradients; anything else falls back to central differences
// with a per-field step.  A field may advertise an extent box: the region a
// grid sweep must cover to see its extrema, with a separate flag for fields
// that vanish identically outside that box.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "contactlab/errors.hpp"
#include "contactlab/point.hpp"
#include "contactlab/rng.hpp"

namespace contactlab {

inline constexpr double kDefaultGradientStep = 1e-5;

struct Box {
    Eigen::VectorXd lo, hi;

    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const Eigen::VectorXd& x) const {
        for (int i = 0; i < dim(); ++i)
            if (x[i] < lo[i] || x[i] > hi[i]) return false;
        return true;
    }
    static Box cube(int d, double l, double h) {
        return Box{Eigen::VectorXd::Constant(d, l), Eigen::VectorXd::Constant(d, h)};
    }
};

class ScalarField {
public:
    using ValueFn = std::function<double(double, const Point&)>;
    using GradientFn = std::function<Eigen::VectorXd(double, const Point&)>;

    ScalarField(std::string label, int dim, ValueFn value)
        : ScalarField(std::move(label), dim, std::move(value), nullptr) {}

    ScalarField(std::string label, int dim, ValueFn value, GradientFn grad)
        : label_(std::move(label)), dim_(dim), value_(std::move(value)),
          grad_(std::move(grad)) {
        if (dim_ < 1) throw InputError("scalar field needs dimension >= 1");
        if (!value_) throw InputError("scalar field needs a value closure");
    }

    double value(double t, const Point& p) const {
        check_point(p);
        return value_(t, p);
    }
    double operator()(double t, const Point& p) const { return value(t, p); }

    Eigen::VectorXd gradient(double t, const Point& p) const {
        check_point(p);
        if (grad_) return grad_(t, p);
        Eigen::VectorXd g(dim_);
        Point probe = p;
        for (int i = 0; i < dim_; ++i) {
            const double saved = probe[i];
            probe[i] = saved + fd_step_;
            const double hi = value_(t, probe);
            probe[i] = saved - fd_step_;
            const double lo = value_(t, probe);
            probe[i] = saved;
            g[i] = (hi - lo) / (2.0 * fd_step_);
        }
        return g;
    }

    // dF(v) at v's base point.
    double directional(double t, const TangentVector& v) const {
        return gradient(t, v.base).dot(v.components);
    }

    int dimension() const { return dim_; }
    const std::string& label() const { return label_; }
    bool time_dependent() const { return time_dependent_; }
    bool has_analytic_gradient() const { return static_cast<bool>(grad_); }
    bool compactly_supported() const { return compact_; }
    const std::optional<Box>& extent() const { return extent_; }
    double fd_step() const { return fd_step_; }

    ScalarField& mark_time_dependent() {
        time_dependent_ = true;
        return *this;
    }
    ScalarField& set_extent(Box b, bool compact) {
        if (b.dim() != dim_) throw InputError("extent box dimension mismatch");
        extent_ = std::move(b);
        compact_ = compact;
        return *this;
    }
    ScalarField& set_fd_step(double h) {
        if (h <= 0.0) throw InputError("finite difference step must be positive");
        fd_step_ = h;
        return *this;
    }

    // Time-independent snapshot at t0.
    ScalarField frozen(double t0) const {
        ScalarField f(label_ + "@t=" + std::to_string(t0), dim_,
                      [inner = *this, t0](double, const Point& p) { return inner.value(t0, p); });
        if (grad_)
            f.grad_ = [inner = *this, t0](double, const Point& p) { return inner.gradient(t0, p); };
        f.extent_ = extent_;
        f.compact_ = compact_;
        f.fd_step_ = fd_step_;
        return f;
    }

private:
    void check_point(const Point& p) const {
        if (p.dim() != dim_)
            throw InputError("field '" + label_ + "' expects dimension " +
                             std::to_string(dim_) + ", got point of dimension " +
                             std::to_string(p.dim()));
    }

    std::string label_;
    int dim_;
    ValueFn value_;
    GradientFn grad_;
    bool time_dependent_ = false;
    bool compact_ = false;
    std::optional<Box> extent_;
    double fd_step_ = kDefaultGradientStep;
};

// Sparse multivariate polynomial; exponents per term, one coefficient.
struct Polynomial {
    struct Term {
        std::vector<int> exponents;
        double coeff;
    };
    int dim = 0;
    std::vector<Term> terms;

    double value(const Eigen::VectorXd& x) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
};

namespace fields {

ScalarField constant(int dim, double c);
ScalarField coordinate(int dim, int index, const std::string& label);
ScalarField polynomial(Polynomial p, const std::string& label = "poly");

// Dense random polynomial of total degree <= max_degree with coefficients
// uniform in [coeff_lo, coeff_hi].
Polynomial random_polynomial(Rng& rng, int dim, int max_degree, double coeff_lo,
                             double coeff_hi);

// Nonpositive radial profile on the unit disk, -e * exp(-1/(1 - x^2 - y^2))
// inside and 0 outside; smooth, minimum value -1 at the origin.
ScalarField planar_bump();

// Three-coordinate field bump(x, y) * sin(k^2 z) / k.  Sup norm 1/k; its
// z-derivative at the origin is -k, so amplitude shrinks as oscillation and
// conformal stretching grow.  Extent box covers one z-period (the field is
// z-periodic, so the box sees the global extrema, but the field does not
// vanish outside it).
ScalarField oscillating_bump(int k);

// mean + sum_j (a_j cos(2 pi j s) + b_j sin(2 pi j s)) on the circle chart.
ScalarField circle_trig(double mean, std::vector<double> cos_coeffs,
                        std::vector<double> sin_coeffs);

ScalarField add(const ScalarField& a, const ScalarField& b);
ScalarField scale(const ScalarField& a, double c);
ScalarField multiply(const ScalarField& a, const ScalarField& b);
// (c0 + c1 t) * a; time-dependent by construction.
ScalarField time_ramp(const ScalarField& a, double c0, double c1);
// Generator of the time-reversed path: K(t, p) = -H(total - t, p).
ScalarField reversed_path(const ScalarField& h, double total);
// Run first over [0, 1/2] and second over [1/2, 1] at double speed, so the
// time-1 map is the composition of the two time-1 maps.
ScalarField concat_paths(const ScalarField& first, const ScalarField& second);

} // namespace fields

} // namespace contactlab
