// Small dense subspace utilities on top of Eigen.  Everything here operates
// on matrices whose columns span a subspace; rank decisions use a relative
// singular value cutoff so results are scale-invariant.
#pragma once

#include <Eigen/Dense>

#include "contactlab/point.hpp"

namespace contactlab {

// Singular values below rank_rel_tol * sigma_max count as zero.
inline constexpr double kRankRelTol = 1e-10;

// Subspace of the tangent space at a fixed point, stored as orthonormal
// columns.  dim() == 0 is the zero subspace (basis has zero columns).
struct Subspace {
    Point base;
    Eigen::MatrixXd basis;

    int dim() const { return static_cast<int>(basis.cols()); }
    int ambient_dim() const { return static_cast<int>(basis.rows()); }
};

int numerical_rank(const Eigen::MatrixXd& a, double rel_tol = kRankRelTol);

// Orthonormal basis of the column span.
Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& a, double rel_tol = kRankRelTol);

// Orthonormal basis of the kernel {x : a x = 0}.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double rel_tol = kRankRelTol);

// Kernel with an absolute singular value floor on top of the relative one.
// Needed when the matrix may be numerically zero in its entirety (e.g. the
// contact form restricted to a Legendrian tangent space): a purely relative
// cutoff would then keep roundoff-sized singular values as "rank".
Eigen::MatrixXd null_space_scaled(const Eigen::MatrixXd& a, double abs_cutoff,
                                  double rel_tol = kRankRelTol);

// Largest sine of a principal angle from span(w) into span(v): zero iff
// span(w) is contained in span(v).  Columns of both inputs must be
// orthonormal; w with zero columns gives 0, v with zero columns gives 1
// unless w is also trivial.
double max_principal_angle_sine(const Eigen::MatrixXd& w, const Eigen::MatrixXd& v);

// Containment test span(w) <= span(v) up to tol, via the sine above.
bool subspace_contained(const Eigen::MatrixXd& w, const Eigen::MatrixXd& v, double tol);

// Equality of spans: equal dimensions and mutual containment.
bool subspace_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol);

} // namespace contactlab
