#include "contactlab/chart.hpp"

#include <cmath>
#include <utility>

namespace contactlab {

namespace {

double wrap_unit(double x) {
    double w = x - std::floor(x);
    // floor(1.0 - eps) can round the difference back up to 1.0
    if (w >= 1.0) w -= 1.0;
    return w;
}

double wrapped_gap(double a, double b) {
    double d = std::abs(wrap_unit(a) - wrap_unit(b));
    return std::min(d, 1.0 - d);
}

} // namespace

ContactChart::ContactChart(ChartKind kind, int n, std::shared_ptr<const ContactChart> base)
    : kind_(kind), n_(n), base_(std::move(base)) {
    switch (kind_) {
    case ChartKind::Darboux: dim_ = 2 * n_ + 1; break;
    case ChartKind::Circle: dim_ = 1; break;
    case ChartKind::Prequantization: dim_ = 3; break;
    case ChartKind::Symplectization: dim_ = base_->dimension() + 1; break;
    }
}

ContactChart ContactChart::darboux(int n) {
    if (n < 1 || n > 64)
        throw InputError("darboux chart needs 1 <= n <= 64, got " + std::to_string(n));
    return ContactChart(ChartKind::Darboux, n, nullptr);
}

ContactChart ContactChart::circle() { return ContactChart(ChartKind::Circle, 0, nullptr); }

ContactChart ContactChart::prequantization() {
    return ContactChart(ChartKind::Prequantization, 1, nullptr);
}

ContactChart ContactChart::symplectization(const ContactChart& base) {
    if (!base.has_contact_form())
        throw InputError("symplectization base must carry a contact form, got " + base.name());
    return ContactChart(ChartKind::Symplectization, 0,
                        std::make_shared<const ContactChart>(base));
}

ContactChart ContactChart::parse(const std::string& name) {
    if (name == "circle") return circle();
    if (name == "preq") return prequantization();
    if (name.rfind("darboux:", 0) == 0) {
        const std::string tail = name.substr(8);
        try {
            std::size_t used = 0;
            int n = std::stoi(tail, &used);
            if (used != tail.size()) throw std::invalid_argument(tail);
            return darboux(n);
        } catch (const std::logic_error&) {
            throw InputError("bad darboux pair count in chart name '" + name + "'");
        }
    }
    if (name.rfind("symp:", 0) == 0) return symplectization(parse(name.substr(5)));
    throw InputError("unknown chart name '" + name + "'");
}

std::string ContactChart::name() const {
    switch (kind_) {
    case ChartKind::Darboux: return "darboux:" + std::to_string(n_);
    case ChartKind::Circle: return "circle";
    case ChartKind::Prequantization: return "preq";
    case ChartKind::Symplectization: return "symp:" + base_->name();
    }
    return "?";
}

int ContactChart::pairs() const {
    if (kind_ == ChartKind::Symplectization)
        throw UnsupportedFormError("pair count undefined on " + name());
    return n_;
}

const ContactChart& ContactChart::base() const {
    if (kind_ != ChartKind::Symplectization)
        throw UnsupportedFormError("chart " + name() + " has no base chart");
    return *base_;
}

void ContactChart::require_dim(const Point& p, const char* where) const {
    if (p.dim() != dim_)
        throw InputError(std::string(where) + ": point has dimension " +
                         std::to_string(p.dim()) + ", chart " + name() + " needs " +
                         std::to_string(dim_));
}

void ContactChart::require_contact(const char* where) const {
    if (!has_contact_form())
        throw UnsupportedFormError(std::string(where) + ": chart " + name() +
                                   " carries no contact form");
}

Point ContactChart::normalize(Point p) const {
    require_dim(p, "normalize");
    for (int i = 0; i < dim_; ++i)
        if (periodic_coord(i)) p[i] = wrap_unit(p[i]);
    return p;
}

bool ContactChart::periodic_coord(int i) const {
    if (i < 0 || i >= dim_) throw InputError("periodic_coord: index out of range");
    switch (kind_) {
    case ChartKind::Darboux: return false;
    case ChartKind::Circle: return true;
    case ChartKind::Prequantization: return i == 2;
    case ChartKind::Symplectization:
        return i < base_->dimension() && base_->periodic_coord(i);
    }
    return false;
}

double ContactChart::coord_distance(const Point& p, const Point& q) const {
    require_dim(p, "coord_distance");
    require_dim(q, "coord_distance");
    double d = 0.0;
    for (int i = 0; i < dim_; ++i) {
        double gap = periodic_coord(i) ? wrapped_gap(p[i], q[i]) : std::abs(p[i] - q[i]);
        d = std::max(d, gap);
    }
    return d;
}

double ContactChart::alpha(const TangentVector& v) const {
    require_contact("alpha");
    require_dim(v.base, "alpha");
    if (v.dim() != dim_) throw InputError("alpha: vector/chart dimension mismatch");
    const Point& p = v.base;
    const Eigen::VectorXd& c = v.components;
    switch (kind_) {
    case ChartKind::Darboux: {
        double a = c[2 * n_];
        for (int i = 0; i < n_; ++i) a -= p[n_ + i] * c[i];
        return a;
    }
    case ChartKind::Circle:
        return c[0];
    case ChartKind::Prequantization:
        return c[2] + p[0] * c[1];
    default:
        return 0.0; // unreachable, require_contact throws
    }
}

double ContactChart::dalpha(const TangentVector& v, const TangentVector& w) const {
    require_contact("dalpha");
    require_dim(v.base, "dalpha");
    if (v.dim() != dim_ || w.dim() != dim_)
        throw InputError("dalpha: vector/chart dimension mismatch");
    if (v.base.coords != w.base.coords)
        throw InputError("dalpha: arguments anchored at different points");
    const Eigen::VectorXd& a = v.components;
    const Eigen::VectorXd& b = w.components;
    switch (kind_) {
    case ChartKind::Darboux: {
        // sum_i (v_xi w_yi - v_yi w_xi); term order fixed so the swap
        // (v, w) -> (w, v) negates every partial sum exactly
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += a[i] * b[n_ + i] - a[n_ + i] * b[i];
        return s;
    }
    case ChartKind::Circle:
        return 0.0;
    case ChartKind::Prequantization:
        return a[0] * b[1] - a[1] * b[0];
    default:
        return 0.0;
    }
}

TangentVector ContactChart::reeb(const Point& p) const {
    require_contact("reeb");
    require_dim(p, "reeb");
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dim_);
    switch (kind_) {
    case ChartKind::Darboux: c[2 * n_] = 1.0; break;
    case ChartKind::Circle: c[0] = 1.0; break;
    case ChartKind::Prequantization: c[2] = 1.0; break;
    default: break;
    }
    return TangentVector(p, std::move(c));
}

Eigen::RowVectorXd ContactChart::alpha_covector(const Point& p) const {
    require_contact("alpha_covector");
    require_dim(p, "alpha_covector");
    Eigen::RowVectorXd a = Eigen::RowVectorXd::Zero(dim_);
    switch (kind_) {
    case ChartKind::Darboux:
        for (int i = 0; i < n_; ++i) a[i] = -p[n_ + i];
        a[2 * n_] = 1.0;
        break;
    case ChartKind::Circle:
        a[0] = 1.0;
        break;
    case ChartKind::Prequantization:
        a[1] = p[0];
        a[2] = 1.0;
        break;
    default:
        break;
    }
    return a;
}

Eigen::MatrixXd ContactChart::dalpha_matrix(const Point& p) const {
    require_contact("dalpha_matrix");
    require_dim(p, "dalpha_matrix");
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim_, dim_);
    switch (kind_) {
    case ChartKind::Darboux:
        for (int i = 0; i < n_; ++i) {
            d(i, n_ + i) = 1.0;
            d(n_ + i, i) = -1.0;
        }
        break;
    case ChartKind::Circle:
        break;
    case ChartKind::Prequantization:
        d(0, 1) = 1.0;
        d(1, 0) = -1.0;
        break;
    default:
        break;
    }
    return d;
}

double ContactChart::omega(const TangentVector& u, const TangentVector& v) const {
    if (kind_ != ChartKind::Symplectization)
        throw UnsupportedFormError("omega: chart " + name() + " is not a symplectization");
    require_dim(u.base, "omega");
    if (u.dim() != dim_ || v.dim() != dim_)
        throw InputError("omega: vector/chart dimension mismatch");
    if (u.base.coords != v.base.coords)
        throw InputError("omega: arguments anchored at different points");
    const int d = base_->dimension();
    Point bp(u.base.coords.head(d));
    TangentVector ub(bp, u.components.head(d));
    TangentVector vb(bp, v.components.head(d));
    const double ut = u.components[d], vt = v.components[d];
    // e^theta (u_theta alpha(v) - v_theta alpha(u) + dalpha(u, v))
    return std::exp(u.base[d]) *
           (ut * base_->alpha(vb) - vt * base_->alpha(ub) + base_->dalpha(ub, vb));
}

Eigen::MatrixXd ContactChart::omega_matrix(const Point& p) const {
    if (kind_ != ChartKind::Symplectization)
        throw UnsupportedFormError("omega_matrix: chart " + name() + " is not a symplectization");
    require_dim(p, "omega_matrix");
    const int d = base_->dimension();
    Point bp(p.coords.head(d));
    const double w = std::exp(p[d]);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
    m.topLeftCorner(d, d) = w * base_->dalpha_matrix(bp);
    Eigen::RowVectorXd a = base_->alpha_covector(bp);
    for (int j = 0; j < d; ++j) {
        m(d, j) = w * a[j];
        m(j, d) = -w * a[j];
    }
    return m;
}

std::string ContactChart::coord_label(int i) const {
    if (i < 0 || i >= dim_) throw InputError("coord_label: index out of range");
    switch (kind_) {
    case ChartKind::Darboux:
        if (i < n_) return "x" + std::to_string(i + 1);
        if (i < 2 * n_) return "y" + std::to_string(i - n_ + 1);
        return "z";
    case ChartKind::Circle:
        return "s";
    case ChartKind::Prequantization:
        return i == 0 ? "x" : (i == 1 ? "y" : "t");
    case ChartKind::Symplectization:
        return i < base_->dimension() ? base_->coord_label(i) : "theta";
    }
    return "?";
}

int ContactChart::coord_index(const std::string& label) const {
    for (int i = 0; i < dim_; ++i)
        if (coord_label(i) == label) return i;
    throw InputError("chart " + name() + " has no coordinate named '" + label + "'");
}

bool ContactChart::operator==(const ContactChart& other) const {
    if (kind_ != other.kind_ || n_ != other.n_) return false;
    if (kind_ == ChartKind::Symplectization) return *base_ == *other.base_;
    return true;
}

} // namespace contactlab
