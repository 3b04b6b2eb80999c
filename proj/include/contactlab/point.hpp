#pragma once

#include <Eigen/Dense>
#include <initializer_list>

namespace contactlab {

// Coordinate tuple in some chart.  Charts own the interpretation (which
// coordinates wrap, what the one-form looks like); a Point is just numbers.
struct Point {
    Eigen::VectorXd coords;

    Point() = default;
    explicit Point(Eigen::VectorXd c) : coords(std::move(c)) {}
    Point(std::initializer_list<double> c) : coords(Eigen::Map<const Eigen::VectorXd>(c.begin(), static_cast<Eigen::Index>(c.size()))) {}

    int dim() const { return static_cast<int>(coords.size()); }
    double operator[](int i) const { return coords[i]; }
    double& operator[](int i) { return coords[i]; }
};

// Tangent vector anchored at a base point of the same chart.
struct TangentVector {
    Point base;
    Eigen::VectorXd components;

    TangentVector() = default;
    TangentVector(Point b, Eigen::VectorXd c) : base(std::move(b)), components(std::move(c)) {}

    int dim() const { return static_cast<int>(components.size()); }
};

} // namespace contactlab
