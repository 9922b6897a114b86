#include "graphgp/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "graphgp/errors.hpp"
#include "graphgp/format.hpp"

namespace graphgp {

void validate_kernel_params(const KernelParams& params) {
    if (!(params.a > 0.0) || !std::isfinite(params.a))
        throw std::invalid_argument("kernel: a must be finite and > 0");
    if (params.p < 1)
        throw std::invalid_argument("kernel: p must be >= 1");
    if (params.a < 2.0 && params.p % 2 != 0)
        throw std::invalid_argument(
            "kernel: positive semidefiniteness requires a >= 2 or even p "
            "(got a=" + format_double(params.a) + ", p=" + format_int(params.p) + ")");
}

std::string to_string(Normalization mode) {
    switch (mode) {
    case Normalization::unnormalized: return "unnormalized";
    case Normalization::global: return "global";
    case Normalization::local: return "local";
    }
    return "unknown";
}

Normalization normalization_from_string(const std::string& name) {
    if (name == "unnormalized") return Normalization::unnormalized;
    if (name == "global") return Normalization::global;
    if (name == "local") return Normalization::local;
    throw config_error("unknown normalization '" + name +
                       "' (expected unnormalized|global|local)");
}

namespace {

// B = D^{-1/2} A D^{-1/2}; rows/columns of isolated vertices are zero.
Eigen::SparseMatrix<double> symmetric_adjacency(const Graph& g) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(2 * g.edges.size());
    for (const auto& [u, v] : g.edges) {
        const double w = 1.0 / std::sqrt(static_cast<double>(g.degrees[u]) *
                                         static_cast<double>(g.degrees[v]));
        triplets.emplace_back(u, v, w);
        triplets.emplace_back(v, u, w);
    }
    Eigen::SparseMatrix<double> b(g.n_vertices, g.n_vertices);
    b.setFromTriplets(triplets.begin(), triplets.end());
    return b;
}

} // namespace

Eigen::SparseMatrix<double> normalized_laplacian(const Graph& g) {
    Eigen::SparseMatrix<double> l = symmetric_adjacency(g);
    l *= -1.0;
    Eigen::SparseMatrix<double> identity(g.n_vertices, g.n_vertices);
    identity.setIdentity();
    l += identity;
    return l;
}

KernelMatrix raw_kernel(const Graph& g, const KernelParams& params) {
    validate_kernel_params(params);
    const int n = g.n_vertices;
    const double step = 1.0 / params.a;

    // One-step factor (1 - 1/a) I + (1/a) B, kept sparse; the full kernel is
    // its p-th power accumulated densely.
    Eigen::SparseMatrix<double> one_step = symmetric_adjacency(g);
    one_step *= step;
    Eigen::SparseMatrix<double> identity(n, n);
    identity.setIdentity();
    one_step += (1.0 - step) * identity;

    Eigen::MatrixXd c = Eigen::MatrixXd::Identity(n, n);
    for (int k = 0; k < params.p; ++k)
        c = one_step * c;
    c = 0.5 * (c + c.transpose()).eval();
    if (!c.allFinite())
        throw std::runtime_error("raw_kernel: non-finite entries in kernel power");

    KernelMatrix kernel;
    kernel.C = std::move(c);
    kernel.params = params;
    kernel.normalization = Normalization::unnormalized;
    kernel.kappa = kernel.C.trace() / static_cast<double>(n);
    return kernel;
}

KernelMatrix normalize_kernel(const KernelMatrix& raw, Normalization mode) {
    KernelMatrix out;
    out.params = raw.params;
    out.normalization = mode;
    out.kappa = raw.kappa;
    switch (mode) {
    case Normalization::unnormalized:
        out.C = raw.C;
        return out;
    case Normalization::global: {
        const double kappa = raw.C.trace() / static_cast<double>(raw.C.rows());
        if (!(kappa > 0.0) || !std::isfinite(kappa))
            throw std::runtime_error(
                "normalize_kernel: nonpositive average prior variance " +
                format_double(kappa));
        out.C = raw.C / kappa;
        out.kappa = kappa;
        return out;
    }
    case Normalization::local: {
        const Eigen::VectorXd diag = raw.C.diagonal();
        for (int i = 0; i < diag.size(); ++i)
            if (!(diag[i] > 0.0) || !std::isfinite(diag[i]))
                throw std::runtime_error(
                    "normalize_kernel: nonpositive prior variance " +
                    format_double(diag[i]) + " at vertex " + format_int(i) +
                    " (possible only when the positive-semidefiniteness "
                    "condition is violated)");
        const Eigen::VectorXd inv_sqrt = diag.cwiseSqrt().cwiseInverse();
        out.C = inv_sqrt.asDiagonal() * raw.C * inv_sqrt.asDiagonal();
        // Force an exactly unit diagonal; the multiplicative form above is
        // already within roundoff of it.
        out.C.diagonal().setOnes();
        out.local_normalizers = diag;
        return out;
    }
    }
    throw std::logic_error("normalize_kernel: unhandled mode");
}

} // namespace graphgp
