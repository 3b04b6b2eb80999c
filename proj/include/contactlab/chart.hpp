// Chart catalog.  Every model the library computes in is one of four
// explicit coordinate charts with closed-form structure tensors:
//
//   darboux:n   coords (x_1..x_n, y_1..y_n, z),  alpha = dz - sum_i y_i dx_i,
//               dalpha = sum_i dx_i ^ dy_i,      Reeb = d/dz
//   circle      coord  (s), s taken mod 1,       alpha = ds, dalpha = 0, Reeb = d/ds
//   preq        coords (x, y, t), t mod 1,       alpha = dt + x dy,
//               dalpha = dx ^ dy,                Reeb = d/dt
//   symp:BASE   coords (base coords..., theta),  no contact form; carries the
//               symplectic form of the exponential-weight cone over BASE:
//               Omega((u,a),(v,b)) = e^theta (a alpha(v) - b alpha(u) + dalpha(u,v))
//
// Evaluators are hand-expanded so that bilinear antisymmetry holds exactly in
// floating point, not just up to roundoff.
#pragma once

#include <memory>
#include <string>

#include "contactlab/errors.hpp"
#include "contactlab/point.hpp"

namespace contactlab {

enum class ChartKind { Darboux, Circle, Prequantization, Symplectization };

class ContactChart {
public:
    static ContactChart darboux(int n);
    static ContactChart circle();
    static ContactChart prequantization();
    static ContactChart symplectization(const ContactChart& base);

    // Parses "darboux:n", "circle", "preq", "symp:<base name>".
    static ContactChart parse(const std::string& name);

    ChartKind kind() const { return kind_; }
    std::string name() const;
    int dimension() const { return dim_; }

    // Number of Darboux-type coordinate pairs: n for darboux:n, 0 for the
    // circle, 1 for preq.  Unsupported on symplectization charts.
    int pairs() const;

    bool has_contact_form() const { return kind_ != ChartKind::Symplectization; }
    // Base chart of a symplectization; throws on the other kinds.
    const ContactChart& base() const;

    // Wraps periodic coordinates into [0,1).  Other coordinates untouched.
    Point normalize(Point p) const;
    bool periodic_coord(int i) const;
    // Wrap-aware distance between coordinate tuples, max over coordinates.
    double coord_distance(const Point& p, const Point& q) const;

    // Contact evaluators (throw UnsupportedFormError on symplectization).
    double alpha(const TangentVector& v) const;
    double dalpha(const TangentVector& v, const TangentVector& w) const;
    TangentVector reeb(const Point& p) const;
    // alpha as a row covector and dalpha as the matrix D with
    // D(i,j) = dalpha(e_i, e_j); both at a fixed point.
    Eigen::RowVectorXd alpha_covector(const Point& p) const;
    Eigen::MatrixXd dalpha_matrix(const Point& p) const;

    // Symplectic evaluators (throw UnsupportedFormError on contact charts).
    double omega(const TangentVector& u, const TangentVector& v) const;
    Eigen::MatrixXd omega_matrix(const Point& p) const;

    // Human-readable coordinate labels, e.g. x1..xn, y1..yn, z.
    std::string coord_label(int i) const;
    // Index of a labelled coordinate; throws InputError if unknown.
    int coord_index(const std::string& label) const;

    bool operator==(const ContactChart& other) const;

private:
    ContactChart(ChartKind kind, int n, std::shared_ptr<const ContactChart> base);

    void require_dim(const Point& p, const char* where) const;
    void require_contact(const char* where) const;

    ChartKind kind_;
    int n_;   // pair count for Darboux; unused otherwise
    int dim_;
    std::shared_ptr<const ContactChart> base_;
};

} // namespace contactlab
