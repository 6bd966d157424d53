#pragma once

#include <Eigen/Core>

#include "compopt/finset.hpp"

namespace compopt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// (phi_* x)_j = sum of x_i over the fiber phi^{-1}(j); empty fibers give 0.
Vec pushforward_apply(const FinFunction& phi, const Vec& x);

/// (phi^* y)_i = y_{phi(i)}.
Vec pullback_apply(const FinFunction& phi, const Vec& y);

/// Dense codom x dom indicator matrix M with M(j,i) = 1 iff phi(i) = j,
/// so pushforward_apply(phi, x) == M * x. The functional forms above are
/// the canonical semantics; the matrices are a verification layer.
Mat pushforward_matrix(const FinFunction& phi);

/// Transpose of pushforward_matrix; pullback_apply(phi, y) == M * y.
Mat pullback_matrix(const FinFunction& phi);

}  // namespace compopt
