#include "contactlab/linalg.hpp"

#include <algorithm>

namespace contactlab {

namespace {

Eigen::JacobiSVD<Eigen::MatrixXd> full_svd(const Eigen::MatrixXd& a) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

int rank_from_svd(const Eigen::JacobiSVD<Eigen::MatrixXd>& svd, double rel_tol,
                  double abs_cutoff = 0.0) {
    if (svd.singularValues().size() == 0) return 0;
    const double cutoff = std::max(rel_tol * svd.singularValues()[0], abs_cutoff);
    int r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > cutoff) ++r;
    return r;
}

} // namespace

int numerical_rank(const Eigen::MatrixXd& a, double rel_tol) {
    if (a.size() == 0) return 0;
    return rank_from_svd(full_svd(a), rel_tol);
}

Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& a, double rel_tol) {
    if (a.size() == 0) return Eigen::MatrixXd(a.rows(), 0);
    auto svd = full_svd(a);
    const int r = rank_from_svd(svd, rel_tol);
    return svd.matrixU().leftCols(r);
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double rel_tol) {
    return null_space_scaled(a, 0.0, rel_tol);
}

Eigen::MatrixXd null_space_scaled(const Eigen::MatrixXd& a, double abs_cutoff,
                                  double rel_tol) {
    if (a.rows() == 0 || a.cols() == 0)
        return Eigen::MatrixXd::Identity(a.cols(), a.cols());
    auto svd = full_svd(a);
    const int r = rank_from_svd(svd, rel_tol, abs_cutoff);
    return svd.matrixV().rightCols(a.cols() - r);
}

double max_principal_angle_sine(const Eigen::MatrixXd& w, const Eigen::MatrixXd& v) {
    if (w.cols() == 0) return 0.0;
    // residual of projecting w onto span(v); for orthonormal w the largest
    // singular value of (I - v v^T) w is sin of the worst principal angle
    Eigen::MatrixXd resid = w;
    if (v.cols() > 0) resid -= v * (v.transpose() * w);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(resid);
    return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()[0];
}

bool subspace_contained(const Eigen::MatrixXd& w, const Eigen::MatrixXd& v, double tol) {
    return max_principal_angle_sine(w, v) <= tol;
}

bool subspace_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol) {
    return a.cols() == b.cols() && subspace_contained(a, b, tol) &&
           subspace_contained(b, a, tol);
}

} // namespace contactlab
