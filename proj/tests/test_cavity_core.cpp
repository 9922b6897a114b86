#include "doctest.h"

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "graphgp/cavity_core.hpp"
#include "graphgp/rng.hpp"
#include "support/complex_reference.hpp"

using namespace graphgp;

namespace {

// Random symmetric indefinite invertible matrix: Q diag(+-d) Q^T with
// |d| in [0.3, 3], so conditioning stays benign while signs are mixed.
Eigen::MatrixXd random_indefinite(int dim, rng_t& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd gauss(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            gauss(r, c) = normal(rng);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
    const Eigen::MatrixXd q = qr.householderQ();
    std::uniform_real_distribution<double> magnitude(0.3, 3.0);
    std::bernoulli_distribution coin(0.5);
    Eigen::VectorXd d(dim);
    for (int i = 0; i < dim; ++i)
        d(i) = (coin(rng) ? 1.0 : -1.0) * magnitude(rng);
    Eigen::MatrixXd m = q * d.asDiagonal() * q.transpose();
    return 0.5 * (m + m.transpose());
}

} // namespace

TEST_CASE("walk coefficients: pinned values, normalization, positivity") {
    const std::vector<double> c1 = walk_coefficients(1, 2.0);
    REQUIRE(c1.size() == 2);
    CHECK(c1[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(c1[1] == doctest::Approx(0.5).epsilon(1e-14));

    const std::vector<double> c2 = walk_coefficients(2, 2.0);
    REQUIRE(c2.size() == 3);
    CHECK(c2[0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(c2[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(c2[2] == doctest::Approx(0.25).epsilon(1e-14));

    rng_t rng(31);
    std::uniform_real_distribution<double> pick_a(1.0, 6.0);
    for (int rep = 0; rep < 20; ++rep) {
        const int p = 1 + static_cast<int>(rng() % 12);
        const double a = pick_a(rng);
        const std::vector<double> c = walk_coefficients(p, a);
        REQUIRE(static_cast<int>(c.size()) == p + 1);
        double total = 0.0;
        for (double x : c) {
            CHECK(x >= 0.0);
            total += x;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("interaction matrices: pinned p=1, a=2, d=3 layout") {
    const InteractionMatrices m = build_interaction_matrices(1, 2.0, 3);
    Eigen::MatrixXd o_expected(3, 3);
    o_expected << 1.5, 0.75, 0.0, 0.75, 0.0, 3.0, 0.0, 3.0, 0.0;
    Eigen::MatrixXd x_expected(3, 3);
    x_expected << 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0;
    CHECK((m.o_base - o_expected).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((m.x - x_expected).cwiseAbs().maxCoeff() < 1e-14);

    // O_base is linear in d and shares X across degrees.
    const InteractionMatrices unit = build_interaction_matrices(1, 2.0, 1);
    CHECK((m.o_base - 3.0 * unit.o_base).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((m.x - unit.x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("subtract_xvx equals the explicit matrix product") {
    rng_t rng(32);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int p : {1, 2, 4}) {
        const int dim = message_dimension(p);
        const Eigen::MatrixXd x = x_matrix(p);
        for (int rep = 0; rep < 10; ++rep) {
            Eigen::MatrixXd v(dim, dim);
            for (int r = 0; r < dim; ++r)
                for (int c = r; c < dim; ++c)
                    v(r, c) = v(c, r) = normal(rng);
            Eigen::MatrixXd m(dim, dim);
            for (int r = 0; r < dim; ++r)
                for (int c = r; c < dim; ++c)
                    m(r, c) = m(c, r) = normal(rng);
            Eigen::MatrixXd fast = m;
            subtract_xvx(fast, v);
            const Eigen::MatrixXd slow = m - x * v * x;
            CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-13);
        }
    }
}

TEST_CASE("rank-one regularized inverse matches dense inversion") {
    rng_t rng(33);
    std::uniform_real_distribution<double> log_s(-6.0, 3.0);
    for (int rep = 0; rep < 200; ++rep) {
        const int dim = 2 + static_cast<int>(rng() % 11);
        const Eigen::MatrixXd m = random_indefinite(dim, rng);
        const double s = std::pow(10.0, log_s(rng));
        Eigen::MatrixXd shifted = m;
        shifted(0, 0) += 1.0 / s;
        const Eigen::MatrixXd direct = shifted.inverse();
        const Eigen::MatrixXd fast = rank_one_regularized_inverse(m, s);
        const double rel = (fast - direct).norm() / direct.norm();
        CHECK(rel < 1e-9);
    }
}

TEST_CASE("pinned 2x2 regularized inverse") {
    // (I + e0 e0^T)^{-1} = diag(1/2, 1).
    const Eigen::MatrixXd out =
        rank_one_regularized_inverse(Eigen::MatrixXd::Identity(2, 2), 1.0);
    CHECK(out(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(out(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(out(0, 1) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("s = 0 annihilates the first row and column exactly") {
    rng_t rng(34);
    for (int rep = 0; rep < 50; ++rep) {
        const int dim = 2 + static_cast<int>(rng() % 6);
        const Eigen::MatrixXd m = random_indefinite(dim, rng);
        const Eigen::MatrixXd out = rank_one_regularized_inverse(m, 0.0);
        for (int i = 0; i < dim; ++i) {
            CHECK(out(0, i) == 0.0);
            CHECK(out(i, 0) == 0.0);
        }
        // Annihilation clamps coordinate 0: the surviving block inverts the
        // complementary principal submatrix.
        const Eigen::MatrixXd sub =
            m.bottomRightCorner(dim - 1, dim - 1).inverse();
        CHECK((out.bottomRightCorner(dim - 1, dim - 1) - sub).norm() <
              1e-9 * sub.norm());
    }

    Eigen::MatrixXd m(2, 2);
    m << 2.0, 1.0, 1.0, 3.0;
    const Eigen::MatrixXd out = rank_one_regularized_inverse(m, 0.0);
    CHECK(out(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("singular matrices are reported, not inverted") {
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 3);
    Eigen::MatrixXd out;
    CHECK_FALSE(rank_one_regularized_inverse(zero, 0.0, out));
    CHECK_THROWS_AS((void)rank_one_regularized_inverse(zero, 0.0),
                    std::runtime_error);

    Eigen::MatrixXd rank_one(3, 3);
    rank_one.setOnes();
    CHECK_FALSE(rank_one_regularized_inverse(rank_one, 0.5, out));
}

TEST_CASE("leading_inverse_entry equals the full inverse (0,0)") {
    rng_t rng(35);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(5);
    for (int rep = 0; rep < 50; ++rep) {
        const Eigen::MatrixXd m = random_indefinite(5, rng);
        double m00 = 0.0;
        REQUIRE(leading_inverse_entry(lu, m, m00));
        CHECK(m00 == doctest::Approx(m.inverse()(0, 0)).epsilon(1e-9));
    }
    double m00 = 0.0;
    CHECK_FALSE(leading_inverse_entry(lu, Eigen::MatrixXd::Zero(5, 5), m00));
}

TEST_CASE("real representation tracks the complex reference step by step") {
    using graphgp_test::complex_o_base;
    using graphgp_test::complex_reg_inv;
    using graphgp_test::complex_x;
    using graphgp_test::map_complex_to_real;

    rng_t rng(36);
    std::uniform_real_distribution<double> pick_a(2.0, 4.0);
    std::uniform_real_distribution<double> pick_s(0.0, 20.0);
    for (int p : {1, 2, 3}) {
        const double a = pick_a(rng);
        const CavityModel model = make_cavity_model(p, a);
        const Eigen::MatrixXcd o1_c = complex_o_base(p, a, 1);
        const Eigen::MatrixXcd x_c = complex_x(p);
        // Quadratic forms congruence with factor +i per hatted index; on the
        // purely imaginary cross couplings that equals conjugating first and
        // applying the inverse-direction map.
        CHECK((map_complex_to_real(o1_c.conjugate(), p) - model.o1)
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);

        // Evolve a pool of messages through identical schedules in both
        // representations; the congruence must hold after every update.
        std::vector<Eigen::MatrixXd> pool_real;
        std::vector<Eigen::MatrixXcd> pool_complex;
        for (double s0 : {0.0, 3.7, 11.0}) {
            pool_real.push_back(rank_one_regularized_inverse(model.o1, s0));
            pool_complex.push_back(complex_reg_inv(o1_c, s0));
        }
        for (int step = 0; step < 100; ++step) {
            const int d = 1 + static_cast<int>(rng() % 3);
            const double s = (rng() % 4 == 0) ? 0.0 : pick_s(rng);
            Eigen::MatrixXd m_real = static_cast<double>(d) * model.o1;
            Eigen::MatrixXcd m_complex = static_cast<double>(d) * o1_c;
            for (int k = 0; k < d - 1; ++k) {
                const std::size_t pick = rng() % pool_real.size();
                subtract_xvx(m_real, pool_real[pick]);
                m_complex -= x_c * pool_complex[pick] * x_c;
            }
            const Eigen::MatrixXd v_real = rank_one_regularized_inverse(m_real, s);
            const Eigen::MatrixXcd v_complex = complex_reg_inv(m_complex, s);
            const Eigen::MatrixXd mapped = map_complex_to_real(v_complex, p);
            CHECK(std::abs(v_real(0, 0) - v_complex(0, 0).real()) < 1e-10);
            CHECK(std::abs(v_complex(0, 0).imag()) < 1e-10);
            CHECK((mapped - v_real).cwiseAbs().maxCoeff() <
                  1e-8 * std::max(1.0, v_real.cwiseAbs().maxCoeff()));
            pool_real.push_back(v_real);
            pool_complex.push_back(v_complex);
            if (pool_real.size() > 12) {
                pool_real.erase(pool_real.begin());
                pool_complex.erase(pool_complex.begin());
            }
        }
    }
}
