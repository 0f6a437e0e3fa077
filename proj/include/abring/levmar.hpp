#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace abring {

// Fills residuals r(p) and, when jacobian != nullptr, dr/dp.
using ResidualFunction =
    std::function<void(const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* jacobian)>;
using FeasibleFunction = std::function<bool(const Eigen::VectorXd& p)>;

struct LevMarOptions {
    int max_iterations = 200;
    double relative_tolerance = 1e-10;  // on the cost change of an accepted step
    double initial_damping = 1e-3;
};

struct LevMarResult {
    Eigen::VectorXd params;
    double cost = 0.0;  // 0.5 |r|^2
    int iterations = 0;
    bool converged = false;
    std::vector<double> cost_history;  // initial cost, then one entry per accepted step
    std::vector<int> collinear;        // parameter indices spanning a (near) null direction
    std::string message;
};

// Damped Gauss-Newton with Marquardt diagonal scaling. Steps are accepted only
// if they reduce the cost and pass `feasible`, so cost_history is strictly
// decreasing.
LevMarResult levenberg_marquardt(const ResidualFunction& fn, Eigen::VectorXd p0,
                                 const LevMarOptions& options = {},
                                 const FeasibleFunction& feasible = {});

} // namespace abring
