#include "contactlab/scalar_field.hpp"

#include <cmath>
#include <numbers>

namespace contactlab {

double Polynomial::value(const Eigen::VectorXd& x) const {
    double s = 0.0;
    for (const auto& t : terms) {
        double m = t.coeff;
        for (int i = 0; i < dim; ++i)
            for (int e = 0; e < t.exponents[i]; ++e) m *= x[i];
        s += m;
    }
    return s;
}

Eigen::VectorXd Polynomial::gradient(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
    for (const auto& t : terms) {
        for (int j = 0; j < dim; ++j) {
            if (t.exponents[j] == 0) continue;
            double m = t.coeff * t.exponents[j];
            for (int i = 0; i < dim; ++i) {
                const int e = t.exponents[i] - (i == j ? 1 : 0);
                for (int k = 0; k < e; ++k) m *= x[i];
            }
            g[j] += m;
        }
    }
    return g;
}

namespace fields {

ScalarField constant(int dim, double c) {
    return ScalarField("const:" + std::to_string(c), dim,
                       [c](double, const Point&) { return c; },
                       [dim](double, const Point&) { return Eigen::VectorXd::Zero(dim); });
}

ScalarField coordinate(int dim, int index, const std::string& label) {
    if (index < 0 || index >= dim) throw InputError("coordinate index out of range");
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    e[index] = 1.0;
    return ScalarField(label, dim,
                       [index](double, const Point& p) { return p[index]; },
                       [e](double, const Point&) { return e; });
}

ScalarField polynomial(Polynomial p, const std::string& label) {
    if (p.dim < 1) throw InputError("polynomial needs dimension >= 1");
    for (const auto& t : p.terms)
        if (static_cast<int>(t.exponents.size()) != p.dim)
            throw InputError("polynomial term exponent count != dimension");
    return ScalarField(label, p.dim,
                       [p](double, const Point& q) { return p.value(q.coords); },
                       [p](double, const Point& q) { return p.gradient(q.coords); });
}

Polynomial random_polynomial(Rng& rng, int dim, int max_degree, double coeff_lo,
                             double coeff_hi) {
    Polynomial p;
    p.dim = dim;
    // enumerate all exponent tuples with total degree <= max_degree
    std::vector<int> exps(dim, 0);
    while (true) {
        int total = 0;
        for (int e : exps) total += e;
        if (total <= max_degree)
            p.terms.push_back({exps, rng.uniform(coeff_lo, coeff_hi)});
        int i = 0;
        while (i < dim) {
            if (++exps[i] <= max_degree) break;
            exps[i] = 0;
            ++i;
        }
        if (i == dim) break;
    }
    return p;
}

namespace {

// w = 1 - x^2 - y^2; value -exp(1 - 1/w) inside the disk.  Below this
// threshold the value underflows to zero anyway and 1/w^2 risks overflow.
constexpr double kBumpCutoff = 1e-12;

double bump_value(double x, double y) {
    const double w = 1.0 - x * x - y * y;
    if (w < kBumpCutoff) return 0.0;
    return -std::exp(1.0 - 1.0 / w);
}

Eigen::Vector2d bump_gradient(double x, double y) {
    const double w = 1.0 - x * x - y * y;
    if (w < kBumpCutoff) return Eigen::Vector2d::Zero();
    const double f = -std::exp(1.0 - 1.0 / w);
    const double scale = -2.0 / (w * w);
    return Eigen::Vector2d(f * scale * x, f * scale * y);
}

} // namespace

ScalarField planar_bump() {
    ScalarField f("bump", 2,
                  [](double, const Point& p) { return bump_value(p[0], p[1]); },
                  [](double, const Point& p) -> Eigen::VectorXd {
                      return bump_gradient(p[0], p[1]);
                  });
    f.set_extent(Box::cube(2, -1.0, 1.0), /*compact=*/true);
    return f;
}

ScalarField oscillating_bump(int k) {
    if (k < 1) throw InputError("oscillating bump needs k >= 1");
    const double kk = static_cast<double>(k) * k;
    ScalarField f("hk:" + std::to_string(k), 3,
                  [k, kk](double, const Point& p) {
                      return bump_value(p[0], p[1]) * std::sin(kk * p[2]) / k;
                  },
                  [k, kk](double, const Point& p) -> Eigen::VectorXd {
                      const double s = std::sin(kk * p[2]);
                      const double c = std::cos(kk * p[2]);
                      const Eigen::Vector2d gb = bump_gradient(p[0], p[1]);
                      Eigen::VectorXd g(3);
                      g[0] = gb[0] * s / k;
                      g[1] = gb[1] * s / k;
                      g[2] = bump_value(p[0], p[1]) * k * c;
                      return g;
                  });
    const double zmax = std::numbers::pi / kk;
    Box b = Box::cube(3, -1.0, 1.0);
    b.lo[2] = -zmax;
    b.hi[2] = zmax;
    f.set_extent(b, /*compact=*/false);
    return f;
}

ScalarField circle_trig(double mean, std::vector<double> cos_coeffs,
                        std::vector<double> sin_coeffs) {
    constexpr double tau = 2.0 * std::numbers::pi;
    ScalarField f("circle-trig", 1,
                  [mean, cos_coeffs, sin_coeffs](double, const Point& p) {
                      double v = mean;
                      for (std::size_t j = 0; j < cos_coeffs.size(); ++j)
                          v += cos_coeffs[j] * std::cos(tau * (j + 1.0) * p[0]);
                      for (std::size_t j = 0; j < sin_coeffs.size(); ++j)
                          v += sin_coeffs[j] * std::sin(tau * (j + 1.0) * p[0]);
                      return v;
                  },
                  [cos_coeffs, sin_coeffs](double, const Point& p) -> Eigen::VectorXd {
                      double d = 0.0;
                      for (std::size_t j = 0; j < cos_coeffs.size(); ++j)
                          d -= cos_coeffs[j] * tau * (j + 1.0) * std::sin(tau * (j + 1.0) * p[0]);
                      for (std::size_t j = 0; j < sin_coeffs.size(); ++j)
                          d += sin_coeffs[j] * tau * (j + 1.0) * std::cos(tau * (j + 1.0) * p[0]);
                      Eigen::VectorXd g(1);
                      g[0] = d;
                      return g;
                  });
    f.set_extent(Box::cube(1, 0.0, 1.0), /*compact=*/false);
    return f;
}

namespace {

void require_same_dim(const ScalarField& a, const ScalarField& b) {
    if (a.dimension() != b.dimension())
        throw InputError("field combination: dimensions differ (" + a.label() + ", " +
                         b.label() + ")");
}

ScalarField combine_extent(ScalarField f, const ScalarField& a, const ScalarField& b) {
    if (a.time_dependent() || b.time_dependent()) f.mark_time_dependent();
    // union box: covers the extrema of any pointwise combination of two
    // fields that both vanish (or stop varying) outside their boxes
    if (a.extent() && b.extent()) {
        Box u{a.extent()->lo.cwiseMin(b.extent()->lo),
              a.extent()->hi.cwiseMax(b.extent()->hi)};
        f.set_extent(std::move(u), a.compactly_supported() && b.compactly_supported());
    }
    return f;
}

} // namespace

ScalarField add(const ScalarField& a, const ScalarField& b) {
    require_same_dim(a, b);
    ScalarField f("(" + a.label() + "+" + b.label() + ")", a.dimension(),
                  [a, b](double t, const Point& p) { return a.value(t, p) + b.value(t, p); },
                  [a, b](double t, const Point& p) -> Eigen::VectorXd {
                      return a.gradient(t, p) + b.gradient(t, p);
                  });
    return combine_extent(std::move(f), a, b);
}

ScalarField scale(const ScalarField& a, double c) {
    ScalarField f(std::to_string(c) + "*" + a.label(), a.dimension(),
                  [a, c](double t, const Point& p) { return c * a.value(t, p); },
                  [a, c](double t, const Point& p) -> Eigen::VectorXd {
                      return c * a.gradient(t, p);
                  });
    if (a.time_dependent()) f.mark_time_dependent();
    if (a.extent()) f.set_extent(*a.extent(), a.compactly_supported());
    return f;
}

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
    require_same_dim(a, b);
    ScalarField f("(" + a.label() + "*" + b.label() + ")", a.dimension(),
                  [a, b](double t, const Point& p) { return a.value(t, p) * b.value(t, p); },
                  [a, b](double t, const Point& p) -> Eigen::VectorXd {
                      return a.value(t, p) * b.gradient(t, p) +
                             b.value(t, p) * a.gradient(t, p);
                  });
    return combine_extent(std::move(f), a, b);
}

ScalarField time_ramp(const ScalarField& a, double c0, double c1) {
    ScalarField f("ramp(" + a.label() + ")", a.dimension(),
                  [a, c0, c1](double t, const Point& p) {
                      return (c0 + c1 * t) * a.value(t, p);
                  },
                  [a, c0, c1](double t, const Point& p) -> Eigen::VectorXd {
                      return (c0 + c1 * t) * a.gradient(t, p);
                  });
    f.mark_time_dependent();
    if (a.extent()) f.set_extent(*a.extent(), a.compactly_supported());
    return f;
}

ScalarField reversed_path(const ScalarField& h, double total) {
    ScalarField f("rev(" + h.label() + ")", h.dimension(),
                  [h, total](double t, const Point& p) { return -h.value(total - t, p); },
                  [h, total](double t, const Point& p) -> Eigen::VectorXd {
                      return -h.gradient(total - t, p);
                  });
    f.mark_time_dependent();
    if (h.extent()) f.set_extent(*h.extent(), h.compactly_supported());
    return f;
}

ScalarField concat_paths(const ScalarField& first, const ScalarField& second) {
    if (first.dimension() != second.dimension())
        throw InputError("concat_paths: fields '" + first.label() + "' and '" +
                         second.label() + "' live in different dimensions");
    // double speed on each half so the joint path still runs over [0, 1];
    // t = 1/2 belongs to the second leg
    ScalarField f("concat(" + first.label() + "," + second.label() + ")",
                  first.dimension(),
                  [first, second](double t, const Point& p) {
                      return t < 0.5 ? 2.0 * first.value(2.0 * t, p)
                                     : 2.0 * second.value(2.0 * t - 1.0, p);
                  },
                  [first, second](double t, const Point& p) -> Eigen::VectorXd {
                      return t < 0.5 ? 2.0 * first.gradient(2.0 * t, p)
                                     : 2.0 * second.gradient(2.0 * t - 1.0, p);
                  });
    f.mark_time_dependent();
    return combine_extent(std::move(f), first, second);
}

} // namespace fields

} // namespace contactlab
