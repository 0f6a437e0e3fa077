#include "abring/levmar.hpp"

#include <algorithm>
#include <cmath>

namespace abring {

namespace {

std::vector<int> null_direction(const Eigen::MatrixXd& jacobian) {
    const Eigen::Index n = jacobian.cols();
    std::vector<int> out;
    Eigen::VectorXd norms = jacobian.colwise().norm();
    for (Eigen::Index j = 0; j < n; ++j) {
        if (!(norms[j] > 0.0)) out.push_back(static_cast<int>(j));
    }
    if (!out.empty()) return out;

    Eigen::MatrixXd normalized = jacobian;
    for (Eigen::Index j = 0; j < n; ++j) normalized.col(j) /= norms[j];
    const Eigen::MatrixXd gram = normalized.transpose() * normalized;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.eigenvalues()[0] > 1e-12 * std::max(1.0, eig.eigenvalues()[n - 1])) return out;
    const Eigen::VectorXd v = eig.eigenvectors().col(0);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (std::abs(v[j]) > 0.1) out.push_back(static_cast<int>(j));
    }
    return out;
}

} // namespace

LevMarResult levenberg_marquardt(const ResidualFunction& fn, Eigen::VectorXd p0,
                                 const LevMarOptions& options, const FeasibleFunction& feasible) {
    LevMarResult result;
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    fn(p0, r, &jac);
    double cost = 0.5 * r.squaredNorm();
    if (!std::isfinite(cost)) {
        result.params = p0;
        result.cost = cost;
        result.message = "non-finite residual at the initial point";
        return result;
    }
    result.cost_history.push_back(cost);

    Eigen::VectorXd p = std::move(p0);
    double lambda = options.initial_damping;
    Eigen::VectorXd trial_r;
    int it = 0;
    for (; it < options.max_iterations; ++it) {
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd g = jac.transpose() * r;
        const Eigen::VectorXd diag = jtj.diagonal().cwiseMax(1e-300);

        bool accepted = false;
        double new_cost = cost;
        Eigen::VectorXd trial;
        // Inner loop: raise damping until a step reduces the cost.
        for (int attempt = 0; attempt < 40; ++attempt) {
            Eigen::MatrixXd a = jtj;
            a.diagonal() += lambda * diag;
            const Eigen::VectorXd step = a.ldlt().solve(-g);
            if (!step.allFinite()) {
                lambda *= 10.0;
                continue;
            }
            trial = p + step;
            if (feasible && !feasible(trial)) {
                lambda *= 4.0;
                continue;
            }
            fn(trial, trial_r, nullptr);
            new_cost = 0.5 * trial_r.squaredNorm();
            if (std::isfinite(new_cost) && new_cost < cost) {
                accepted = true;
                break;
            }
            lambda *= 4.0;
        }
        if (!accepted) {
            result.converged = true;
            result.message = "no cost-reducing step (local minimum)";
            break;
        }

        const double change = (cost - new_cost) / std::max(cost, 1e-300);
        p = trial;
        cost = new_cost;
        result.cost_history.push_back(cost);
        fn(p, r, &jac);
        lambda = std::max(lambda / 3.0, 1e-15);
        if (change < options.relative_tolerance) {
            result.converged = true;
            result.message = "relative cost change below tolerance";
            ++it;
            break;
        }
    }
    if (!result.converged) result.message = "iteration cap reached";

    result.params = p;
    result.cost = cost;
    result.iterations = it;
    result.collinear = null_direction(jac);
    return result;
}

} // namespace abring
