// Shared machinery of both cavity solvers: the binomial walk coefficients, the
// O/X interaction matrices in a real-valued representation, and the rank-one
// regularized inverse that realizes the vanishing-regularizer limits in
// closed form.
//
// Message matrices are (2p+1) x (2p+1), real and symmetric, with index
// convention 0 -> h^0, 1..p -> h^1..h^p, p+1..2p -> hhat^1..hhat^p. The
// complex-valued fixed-point equations (couplings -i*d in O and +i in X) are
// mapped to this real form by the change of variables hhat -> i*hhat, i.e.
// congruence with T = diag(1,...,1, i,...,i), which leaves every (0,0)
// element of messages and inverses unchanged; a complex reference
// implementation lives in the tests.
#pragma once

#include <vector>

#include <Eigen/Dense>

namespace graphgp {

// c_q = binom(p, q) a^{-q} (1 - 1/a)^{p-q}: the weight of the q-step term in
// the kernel's expansion in powers of D^{-1/2} A D^{-1/2}. Sums to 1; all
// nonnegative when a >= 1.
std::vector<double> walk_coefficients(int p, double a);

inline int message_dimension(int p) { return 2 * p + 1; }

// O_base(d): (0,0) = d*c_0; (0,q) = (q,0) = d*c_q/2 for q = 1..p;
// (q, p+q) = (p+q, q) = d for q = 1..p; zeros elsewhere. Linear in d.
Eigen::MatrixXd o_base_matrix(int p, int d, const std::vector<double>& coefficients);

// X: (q-1, p+q) = (p+q, q-1) = -1 for q = 1..p; zeros elsewhere (row/column p
// are zero). Independent of d.
Eigen::MatrixXd x_matrix(int p);

struct InteractionMatrices {
    Eigen::MatrixXd o_base;
    Eigen::MatrixXd x;
};

InteractionMatrices build_interaction_matrices(int p, double a, int d);

// m -= X v X. Because X acts as the signed swap e_{p+q} <-> -e_{q-1}, the
// product is just v with permuted indices (signs cancel) and zero row/column
// p, so no matrix multiplication is needed.
void subtract_xvx(Eigen::MatrixXd& m, const Eigen::MatrixXd& v);

// (M + (1/s) e0 e0^T)^{-1} evaluated through the rank-one update of M^{-1};
// s = 0 encodes the divergent-coefficient limit, in which the result
// annihilates e0 (its first row and column are exactly zero). Uses general
// LU with pivoting: these matrices are symmetric but indefinite.
// Returns false when M is numerically singular or the update denominator
// vanishes; the throwing overload raises std::runtime_error instead.
bool rank_one_regularized_inverse(const Eigen::MatrixXd& m, double s,
                                  Eigen::MatrixXd& out);
Eigen::MatrixXd rank_one_regularized_inverse(const Eigen::MatrixXd& m, double s);

// (M^{-1})_{00} by a single LU solve, reusing the caller's factorization
// workspace; returns false when M is numerically singular.
bool leading_inverse_entry(Eigen::PartialPivLU<Eigen::MatrixXd>& lu,
                           const Eigen::MatrixXd& m, double& m00);

// Precomputed immutables for a given (p, a): coefficients and the d=1 base
// matrix (O_base(d) = d * o1).
struct CavityModel {
    int p = 0;
    double a = 0.0;
    std::vector<double> coefficients;
    Eigen::MatrixXd o1;
};

CavityModel make_cavity_model(int p, double a);

} // namespace graphgp
