#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <string>
#include <vector>

namespace romforge {

using Real  = double;
using Index = std::int64_t;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

// Row-major triplet-assembled symmetric operators use column-major storage;
// solvers below only rely on the lower triangle being present.
using SpMat   = Eigen::SparseMatrix<Real>;
using Triplet = Eigen::Triplet<Real>;

} // namespace romforge
