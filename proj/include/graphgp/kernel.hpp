// Random-walk kernel on a graph: C0 = ((1-1/a) I + (1/a) B)^p with
// B = D^{-1/2} A D^{-1/2}, i.e. p attempts of a lazy walk that steps with
// probability 1/a (lengthscale ~ p/a), together with its globally normalized
// (unit average prior variance) and locally normalized (unit prior variance
// at every vertex) variants. Rows/columns of isolated vertices follow the
// L_ii = 1 convention, giving diagonal entries (1-1/a)^p before
// normalization.
#pragma once

#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "graphgp/graph.hpp"

namespace graphgp {

struct KernelParams {
    double a = 2.0; // inverse step probability
    int p = 10;     // number of walk attempts
};

// Positive-semidefiniteness requires a >= 2 or even p (the spectrum of the
// one-step factor is 1 - l/a with l in [0, 2]); violations throw
// std::invalid_argument.
void validate_kernel_params(const KernelParams& params);

enum class Normalization { unnormalized, global, local };

std::string to_string(Normalization mode);
Normalization normalization_from_string(const std::string& name); // config_error

// L = I - B with the isolated-vertex convention L_ii = 1.
Eigen::SparseMatrix<double> normalized_laplacian(const Graph& g);

struct KernelMatrix {
    Eigen::MatrixXd C;
    KernelParams params;
    Normalization normalization = Normalization::unnormalized;
    double kappa = 1.0;                // trace(raw)/V, the global normalizer
    Eigen::VectorXd local_normalizers; // raw diagonal (filled by local mode)
};

// Unnormalized kernel, computed by p repeated multiplications with the sparse
// one-step factor (exact matrix power).
KernelMatrix raw_kernel(const Graph& g, const KernelParams& params);

// Global: C = raw * V / trace(raw). Local: C_ij = raw_ij / sqrt(raw_ii raw_jj);
// requires a strictly positive raw diagonal (violated only when the PSD
// condition fails), otherwise throws std::runtime_error. Normalizing an
// already-normalized matrix in its own mode is the identity.
KernelMatrix normalize_kernel(const KernelMatrix& raw, Normalization mode);

} // namespace graphgp
