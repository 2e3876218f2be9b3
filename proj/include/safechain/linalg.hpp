#pragma once

#include <Eigen/Dense>

namespace safechain {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Block i (1-based) of width m from a stacked vector [x_1; x_2; ...].
inline Vec block(const Vec& stacked, int i, int m)
{
    return stacked.segment((i - 1) * m, m);
}

inline void set_block(Vec& stacked, int i, int m, const Vec& value)
{
    stacked.segment((i - 1) * m, m) = value;
}

}  // namespace safechain
