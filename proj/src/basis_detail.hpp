#pragma once

#include <Eigen/Dense>

#include "ftlab/basis.hpp"

namespace ftlab::detail {

// Node table for int_0^inf t^alpha e^{-E t} (...) dt with a gen-Laguerre(alpha) rule.
// Row i is the node t_i = u_i/E; column k holds
//     (w_i E^{-alpha-1})^power * b_k(c t_i)/|b_k|   (without the e^{-gamma t} factor).
// Evaluated in long double so that huge polynomial values and tiny weights
// never meet in double.
Eigen::MatrixXd weighted_basis_table(const BasisSpec& b, const specfun::QuadratureRule& rule, double E,
                                     double power);

// (w_i E^{-alpha-1})^power at each node
Eigen::VectorXd scaled_weights(const specfun::QuadratureRule& rule, double E, double power);

int default_order(const BasisSpec& b);

}  // namespace ftlab::detail
