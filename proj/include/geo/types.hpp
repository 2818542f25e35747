#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace geo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

using ScalarField = std::function<double(const Vec&)>;
using VectorField = std::function<Vec(const Vec&)>;
using MatrixField = std::function<Mat(const Vec&)>;

/// Third-order array stored as one matrix per output component:
/// `t[k](i, j)` is the (i, j) second partial of component k.
using Tensor3 = std::vector<Mat>;
using Tensor3Field = std::function<Tensor3(const Vec&)>;

/// Returns true when a point is admissible. An empty predicate admits everything.
using Membership = std::function<bool(const Vec&)>;

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

}  // namespace geo
