#include "romforge/oracle/pure_bending.hpp"

#include <stdexcept>

namespace romforge::oracle {

Vec3 pure_bending_displacement(const Vec3& X, Real k, Real nu) {
    const Real x = X[0], y = X[1], z = X[2];
    return {k * x * y, -0.5 * k * (x * x + nu * (y * y - z * z)), -nu * k * y * z};
}

Mat3 pure_bending_gradient(const Vec3& X, Real k, Real nu) {
    const Real x = X[0], y = X[1], z = X[2];
    Mat3 H;
    H << k * y, k * x, 0, //
        -k * x, -nu * k * y, nu * k * z, //
        0, -nu * k * z, -nu * k * y;
    return H;
}

Mat3 pure_bending_strain_linear(const Vec3& X, Real k, Real nu) {
    Mat3 e = Mat3::Zero();
    e(0, 0) = k * X[1];
    e(1, 1) = -nu * k * X[1];
    e(2, 2) = -nu * k * X[1];
    return e;
}

Mat3 pure_bending_strain_quadratic(const Vec3& X, Real k, Real nu, int part) {
    const Real x = X[0], y = X[1], z = X[2];
    const Real k2h = 0.5 * k * k;
    Mat3 g = Mat3::Zero();
    switch (part) {
    case 1:
        g(0, 0) = k2h * x * x;
        break;
    case 2:
        g(0, 0) = k2h * y * y;
        g(0, 1) = g(1, 0) = k2h * x * y;
        g(1, 1) = k2h * x * x;
        break;
    case 3:
        g(0, 1) = g(1, 0) = nu * k2h * x * y;
        g(0, 2) = g(2, 0) = -nu * k2h * x * z;
        g(1, 1) = nu * nu * k2h * (y * y + z * z);
        g(2, 2) = nu * nu * k2h * (y * y + z * z);
        break;
    default:
        throw std::invalid_argument("quadratic strain part must be 1, 2 or 3");
    }
    return g;
}

Mat3 pure_bending_strain(const Vec3& X, Real k, Real nu) {
    return pure_bending_strain_linear(X, k, nu) + pure_bending_strain_quadratic(X, k, nu, 1) +
           pure_bending_strain_quadratic(X, k, nu, 2) + pure_bending_strain_quadratic(X, k, nu, 3);
}

} // namespace romforge::oracle
