#include "graphgp/cavity_core.hpp"

#include <cmath>
#include <stdexcept>

namespace graphgp {

std::vector<double> walk_coefficients(int p, double a) {
    if (p < 1)
        throw std::invalid_argument("walk_coefficients: p must be >= 1");
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("walk_coefficients: a must be finite and > 0");
    const double step = 1.0 / a;
    const double stay = 1.0 - step;
    std::vector<double> c(static_cast<std::size_t>(p) + 1);
    double binom = 1.0;
    for (int q = 0; q <= p; ++q) {
        c[static_cast<std::size_t>(q)] =
            binom * std::pow(step, q) * std::pow(stay, p - q);
        binom *= static_cast<double>(p - q) / static_cast<double>(q + 1);
    }
    return c;
}

Eigen::MatrixXd o_base_matrix(int p, int d,
                              const std::vector<double>& coefficients) {
    if (static_cast<int>(coefficients.size()) != p + 1)
        throw std::invalid_argument("o_base_matrix: need p+1 coefficients");
    if (d < 0)
        throw std::invalid_argument("o_base_matrix: d must be >= 0");
    const int n = message_dimension(p);
    Eigen::MatrixXd o = Eigen::MatrixXd::Zero(n, n);
    const double dd = static_cast<double>(d);
    o(0, 0) = dd * coefficients[0];
    for (int q = 1; q <= p; ++q) {
        o(0, q) = o(q, 0) = dd * coefficients[static_cast<std::size_t>(q)] / 2.0;
        o(q, p + q) = o(p + q, q) = dd;
    }
    return o;
}

Eigen::MatrixXd x_matrix(int p) {
    const int n = message_dimension(p);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
    for (int q = 1; q <= p; ++q)
        x(q - 1, p + q) = x(p + q, q - 1) = -1.0;
    return x;
}

InteractionMatrices build_interaction_matrices(int p, double a, int d) {
    return InteractionMatrices{o_base_matrix(p, d, walk_coefficients(p, a)),
                               x_matrix(p)};
}

void subtract_xvx(Eigen::MatrixXd& m, const Eigen::MatrixXd& v) {
    const int n = static_cast<int>(m.rows());
    const int p = (n - 1) / 2;
    // X e_{p+q} = -e_{q-1} and X e_{q-1} = -e_{p+q}, so (X v X)_{jk} =
    // v(map(j), map(k)) for j,k != p and 0 in row/column p.
    auto map = [p](int j) { return j < p ? j + p + 1 : j - p - 1; };
    for (int j = 0; j < n; ++j) {
        if (j == p)
            continue;
        const int mj = map(j);
        for (int k = 0; k < n; ++k) {
            if (k == p)
                continue;
            m(j, k) -= v(mj, map(k));
        }
    }
}

bool rank_one_regularized_inverse(const Eigen::MatrixXd& m, double s,
                                  Eigen::MatrixXd& out) {
    if (!(s >= 0.0) || !m.allFinite())
        return false;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    const Eigen::VectorXd udiag = lu.matrixLU().diagonal().cwiseAbs();
    const double umax = udiag.maxCoeff();
    const double umin = udiag.minCoeff();
    if (!(umax > 0.0) || !std::isfinite(umax) || umin <= umax * 1e-14)
        return false;
    out = lu.inverse();
    const double m00 = out(0, 0);
    const double denom = s + m00;
    if (!std::isfinite(denom) ||
        std::abs(denom) <= 1e-13 * (std::abs(s) + std::abs(m00)))
        return false;
    const Eigen::VectorXd w = out.col(0);
    out.noalias() -= (w * w.transpose()) / denom;
    out = 0.5 * (out + out.transpose()).eval();
    if (s == 0.0) {
        // Divergent-coefficient limit: the first row/column vanish
        // identically; zero them exactly rather than leaving roundoff dust.
        out.row(0).setZero();
        out.col(0).setZero();
    }
    return out.allFinite();
}

Eigen::MatrixXd rank_one_regularized_inverse(const Eigen::MatrixXd& m, double s) {
    Eigen::MatrixXd out;
    if (!rank_one_regularized_inverse(m, s, out))
        throw std::runtime_error(
            "rank_one_regularized_inverse: singular matrix or vanishing "
            "update denominator");
    return out;
}

bool leading_inverse_entry(Eigen::PartialPivLU<Eigen::MatrixXd>& lu,
                           const Eigen::MatrixXd& m, double& m00) {
    lu.compute(m);
    const Eigen::VectorXd udiag = lu.matrixLU().diagonal().cwiseAbs();
    const double umax = udiag.maxCoeff();
    const double umin = udiag.minCoeff();
    if (!(umax > 0.0) || !std::isfinite(umax) || umin <= umax * 1e-14)
        return false;
    m00 = lu.solve(Eigen::VectorXd::Unit(m.rows(), 0))(0);
    return std::isfinite(m00);
}

CavityModel make_cavity_model(int p, double a) {
    CavityModel model;
    model.p = p;
    model.a = a;
    model.coefficients = walk_coefficients(p, a);
    model.o1 = o_base_matrix(p, 1, model.coefficients);
    return model;
}

} // namespace graphgp
