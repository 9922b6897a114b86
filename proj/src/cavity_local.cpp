#include "graphgp/cavity_local.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "graphgp/errors.hpp"
#include "graphgp/poisson_average.hpp"
#include "window_rule.hpp"

namespace graphgp {

namespace {

constexpr std::uint64_t kSaltPopulationLocal = 0x21;
constexpr std::uint64_t kSaltConvergenceLocal = 0x22;
constexpr std::uint64_t kSaltFinalEvalLocal = 0x26;

constexpr int kDecorrelationSweeps = 2;

void check_scalars_local(double sigma2, double nu) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw config_error("sigma2 must be positive and finite");
    if (!(nu >= 0.0) || !std::isfinite(nu))
        throw config_error("nu must be nonnegative and finite");
}

enum class UpdateStatus { ok, singular, nonpositive_normalizer };

// Non-throwing core of update_pair_local; scratch matrices are supplied by
// the caller so population sweeps do not reallocate.
UpdateStatus try_update_pair(const CavityModel& model,
                             const std::vector<const LocalPair*>& incoming,
                             const Eigen::MatrixXd& reverse_aux, int d, int gamma,
                             double sigma2, LocalPair& out, double& normalizer,
                             Eigen::MatrixXd& work,
                             Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
    const double dd = static_cast<double>(d);

    work = dd * model.o1;
    for (const LocalPair* pair : incoming)
        subtract_xvx(work, pair->v_aux);
    if (!rank_one_regularized_inverse(work, 0.0, out.v_aux))
        return UpdateStatus::singular;

    // Full-vertex prior matrix: the cavity matrix above with the reverse-edge
    // auxiliary message joined in.
    subtract_xvx(work, reverse_aux);
    double m00 = 0.0;
    if (!leading_inverse_entry(lu, work, m00))
        return UpdateStatus::singular;
    if (!(m00 > 0.0))
        return UpdateStatus::nonpositive_normalizer;
    // (M~^{-1})_00 = 1/(d * prior variance), so the reciprocal prior variance
    // is d * m00.
    normalizer = dd * m00;

    work = dd * model.o1;
    for (const LocalPair* pair : incoming)
        subtract_xvx(work, pair->v_main);
    // Observation regularizer: the same s = (likelihood precision)/d rule as
    // the globally normalized update, with the per-vertex likelihood
    // precision gamma * v / sigma2. The degree cancels against v = d * m00,
    // leaving s = gamma * (M~^{-1})_00 / sigma2.
    const double s = gamma == 0 ? 0.0 : m00 * static_cast<double>(gamma) / sigma2;
    if (!rank_one_regularized_inverse(work, s, out.v_main))
        return UpdateStatus::singular;
    return UpdateStatus::ok;
}

struct LocalSweepScratch {
    std::uniform_int_distribution<int> pick_member;
    std::vector<int> donor_indices;
    std::vector<const LocalPair*> incoming;
    LocalPair out;
    Eigen::MatrixXd work;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
};

// One full sweep: population_size single-pair update attempts.
void sweep_local(LocalPopulation& population, const LocalSolverConfig& config,
                 rng_t& rng, LocalSweepScratch& scratch) {
    const int n = static_cast<int>(population.members.size());
    double normalizer = 0.0;
    for (int step = 0; step < n; ++step) {
        // Draw order is part of the reproducibility contract: degree,
        // example count, donor indices, reverse index, target slot.
        const int d = config.dist.size_biased_sample(rng);
        const int gamma = draw_example_count(rng, config.nu);
        scratch.donor_indices.clear();
        for (int k = 0; k < d - 1; ++k)
            scratch.donor_indices.push_back(scratch.pick_member(rng));
        const int reverse = scratch.pick_member(rng);
        const int target = scratch.pick_member(rng);

        scratch.incoming.clear();
        for (int idx : scratch.donor_indices)
            scratch.incoming.push_back(
                &population.members[static_cast<std::size_t>(idx)]);
        const UpdateStatus status = try_update_pair(
            population.model, scratch.incoming,
            population.members[static_cast<std::size_t>(reverse)].v_aux, d,
            gamma, config.sigma2, scratch.out, normalizer, scratch.work,
            scratch.lu);
        if (status == UpdateStatus::singular) {
            ++population.diagnostics.failed_updates;
            continue;
        }
        if (status == UpdateStatus::nonpositive_normalizer) {
            ++population.diagnostics.nonpositive_normalizer;
            continue;
        }
        if (scratch.out.v_aux.col(0).cwiseAbs().maxCoeff() != 0.0 ||
            (gamma == 0 &&
             scratch.out.v_main.col(0).cwiseAbs().maxCoeff() != 0.0))
            ++population.diagnostics.annihilation_violations;
        population.members[static_cast<std::size_t>(target)] = scratch.out;
    }
    ++population.diagnostics.sweeps_run;
}

void init_population_local(LocalPopulation& population,
                           const LocalSolverConfig& config, rng_t& rng) {
    population.model = make_cavity_model(config.params.p, config.params.a);
    const int n = config.settings.population_size;
    const int dim = message_dimension(config.params.p);

    Eigen::MatrixXd work(dim, dim);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(dim);

    // Leaf initialization (d = 1, no incoming): the auxiliary half is the
    // same matrix for every member; the normalizer uses the member's own
    // auxiliary message as the reverse-edge contribution. At gamma = 0 the
    // main half repeats the auxiliary computation bit for bit.
    Eigen::MatrixXd leaf_aux(dim, dim);
    if (!rank_one_regularized_inverse(population.model.o1, 0.0, leaf_aux))
        throw std::runtime_error(
            "run_population_local: leaf auxiliary message failed");
    work = population.model.o1;
    subtract_xvx(work, leaf_aux);
    double leaf_m00 = 0.0;
    if (!leading_inverse_entry(lu, work, leaf_m00) || !(leaf_m00 > 0.0))
        throw std::runtime_error(
            "run_population_local: leaf prior normalizer failed");

    population.members.assign(static_cast<std::size_t>(n), LocalPair());
    for (int i = 0; i < n; ++i) {
        const int gamma = draw_example_count(rng, config.nu);
        const double s =
            gamma == 0 ? 0.0
                       : leaf_m00 * static_cast<double>(gamma) / config.sigma2;
        LocalPair& member = population.members[static_cast<std::size_t>(i)];
        member.v_aux = leaf_aux;
        if (!rank_one_regularized_inverse(population.model.o1, s, member.v_main))
            throw std::runtime_error(
                "run_population_local: leaf main message failed");
    }
}

// Shared driver: initialize, then sweep until the stop rule fires or
// n_sweeps is exhausted. The caller may keep using rng to continue sweeping
// the returned population.
LocalPopulation converge_population_local(const LocalSolverConfig& config,
                                          rng_t& rng) {
    validate_kernel_params(config.params);
    validate_solver_settings(config.settings);
    check_scalars_local(config.sigma2, config.nu);

    LocalPopulation population;
    init_population_local(population, config, rng);

    // All mass on isolated vertices: no edges exist, so leaf messages are
    // never consumed and the population is already at its fixed point.
    if (config.dist.mean_degree() == 0.0) {
        population.diagnostics.converged = true;
        return population;
    }

    const std::uint64_t convergence_seed =
        derive_seed(config.seed, kSaltConvergenceLocal);
    const int dim = message_dimension(config.params.p);
    LocalSweepScratch scratch{
        std::uniform_int_distribution<int>(0, config.settings.population_size - 1),
        {},
        {},
        LocalPair(),
        Eigen::MatrixXd(dim, dim),
        Eigen::PartialPivLU<Eigen::MatrixXd>(dim)};

    std::vector<double> history;
    history.reserve(static_cast<std::size_t>(config.settings.n_sweeps));
    const int min_sweeps =
        std::max(config.settings.min_sweeps, 2 * config.settings.convergence_window);
    for (int sweep = 1; sweep <= config.settings.n_sweeps; ++sweep) {
        sweep_local(population, config, rng, scratch);

        rng_t convergence_rng(convergence_seed);
        const EpsilonEstimate estimate = epsilon_local(
            population, config.dist, config.nu, config.sigma2,
            config.settings.convergence_samples, convergence_rng,
            config.settings.gamma_tail_margin, nullptr);
        history.push_back(estimate.epsilon);
        if (sweep >= min_sweeps &&
            detail::windows_agree(history, config.settings.convergence_window,
                                  config.settings.convergence_tol)) {
            population.diagnostics.converged = true;
            break;
        }
    }
    return population;
}

} // namespace

LocalUpdateResult update_pair_local(const CavityModel& model,
                                    const std::vector<const LocalPair*>& incoming,
                                    const Eigen::MatrixXd& reverse_aux, int d,
                                    int gamma, double sigma2) {
    if (d < 1)
        throw std::invalid_argument("update_pair_local: d must be >= 1");
    if (static_cast<int>(incoming.size()) != d - 1)
        throw std::invalid_argument(
            "update_pair_local: expected d-1 incoming pairs, got " +
            std::to_string(incoming.size()));
    if (gamma < 0)
        throw std::invalid_argument("update_pair_local: gamma must be >= 0");
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("update_pair_local: sigma2 must be positive");

    const int dim = static_cast<int>(model.o1.rows());
    Eigen::MatrixXd work(dim, dim);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(dim);
    LocalUpdateResult result;
    switch (try_update_pair(model, incoming, reverse_aux, d, gamma, sigma2,
                            result.pair, result.normalizer, work, lu)) {
    case UpdateStatus::ok:
        return result;
    case UpdateStatus::singular:
        throw std::runtime_error("update_pair_local: singular update matrix");
    case UpdateStatus::nonpositive_normalizer:
        throw std::runtime_error(
            "update_pair_local: nonpositive prior normalizer");
    }
    throw std::logic_error("update_pair_local: unreachable");
}

LocalPopulation run_population_local(const LocalSolverConfig& config) {
    rng_t rng(derive_seed(config.seed, kSaltPopulationLocal));
    return converge_population_local(config, rng);
}

EpsilonEstimate epsilon_local(const LocalPopulation& population,
                              const DegreeDistribution& dist, double nu,
                              double sigma2, long n_samples, rng_t& rng,
                              double gamma_tail_margin,
                              PopulationDiagnostics* diagnostics) {
    if (population.members.empty())
        throw std::invalid_argument("epsilon_local: population is empty");
    if (n_samples < 1)
        throw std::invalid_argument("epsilon_local: n_samples must be >= 1");
    check_scalars_local(sigma2, nu);

    const CavityModel& model = population.model;
    const int dim = static_cast<int>(model.o1.rows());
    std::uniform_int_distribution<int> pick_member(
        0, static_cast<int>(population.members.size()) - 1);
    std::vector<int> indices;
    Eigen::MatrixXd work(dim, dim);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(dim);

    double sum = 0.0;
    double sum_sq = 0.0;
    long accepted = 0;
    long discarded = 0;
    const long max_attempts = 2 * n_samples + 1000;
    for (long attempt = 0; attempt < max_attempts && accepted < n_samples; ++attempt) {
        const int d = dist.sample(rng);
        // Normalized prior precision at the sampled vertex; exactly 1 for
        // isolated vertices by construction of the normalization.
        double precision = 1.0;
        if (d > 0) {
            // The two assemblies share member indices: the estimator averages
            // over the joint distribution of (auxiliary, main) pairs.
            indices.clear();
            for (int k = 0; k < d; ++k)
                indices.push_back(pick_member(rng));

            work = static_cast<double>(d) * model.o1;
            for (int idx : indices)
                subtract_xvx(work,
                             population.members[static_cast<std::size_t>(idx)].v_aux);
            double m_aux00 = 0.0;
            if (!leading_inverse_entry(lu, work, m_aux00) || !(m_aux00 > 0.0)) {
                ++discarded;
                if (diagnostics)
                    ++diagnostics->nonpositive_m00;
                continue;
            }

            work = static_cast<double>(d) * model.o1;
            for (int idx : indices)
                subtract_xvx(work,
                             population.members[static_cast<std::size_t>(idx)].v_main);
            double m00 = 0.0;
            if (!leading_inverse_entry(lu, work, m00) || !(m00 > 0.0)) {
                ++discarded;
                if (diagnostics)
                    ++diagnostics->nonpositive_m00;
                continue;
            }
            precision = m00 / m_aux00;
        }
        const double value = poisson_expectation(
            nu,
            [&](int g) {
                return 1.0 / (static_cast<double>(g) / sigma2 + precision);
            },
            gamma_tail_margin);
        sum += value;
        sum_sq += value * value;
        ++accepted;
    }
    if (accepted == 0)
        throw std::runtime_error("epsilon_local: every sample was discarded");

    EpsilonEstimate estimate;
    estimate.epsilon = sum / static_cast<double>(accepted);
    estimate.n_samples = accepted;
    estimate.discarded = discarded;
    if (accepted > 1) {
        const double centered =
            sum_sq - sum * sum / static_cast<double>(accepted);
        const double variance =
            std::max(0.0, centered) / static_cast<double>(accepted - 1);
        estimate.std_err = std::sqrt(variance / static_cast<double>(accepted));
    }
    return estimate;
}

LocalSolution solve_local(const LocalSolverConfig& config) {
    rng_t rng(derive_seed(config.seed, kSaltPopulationLocal));
    LocalSolution solution;
    solution.population = converge_population_local(config, rng);
    LocalPopulation& population = solution.population;

    const int n_evals = config.settings.averaging_sweeps;
    const long samples_per_eval =
        std::max<long>(1, config.settings.epsilon_samples / n_evals);
    const bool can_sweep = config.dist.mean_degree() > 0.0;
    const int dim = message_dimension(config.params.p);
    LocalSweepScratch scratch{
        std::uniform_int_distribution<int>(0, config.settings.population_size - 1),
        {},
        {},
        LocalPair(),
        Eigen::MatrixXd(dim, dim),
        Eigen::PartialPivLU<Eigen::MatrixXd>(dim)};

    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n_evals));
    long total_samples = 0;
    long total_discarded = 0;
    double fallback_std_err = 0.0;
    for (int s = 0; s < n_evals; ++s) {
        if (s > 0 && can_sweep)
            for (int k = 0; k < kDecorrelationSweeps; ++k)
                sweep_local(population, config, rng, scratch);
        rng_t eval_rng(derive_seed(config.seed, kSaltFinalEvalLocal,
                                   static_cast<std::uint64_t>(s)));
        const EpsilonEstimate estimate = epsilon_local(
            population, config.dist, config.nu, config.sigma2, samples_per_eval,
            eval_rng, config.settings.gamma_tail_margin,
            &population.diagnostics);
        values.push_back(estimate.epsilon);
        total_samples += estimate.n_samples;
        total_discarded += estimate.discarded;
        fallback_std_err = estimate.std_err;
    }

    EpsilonEstimate& final_estimate = solution.estimate;
    double sum = 0.0;
    for (double v : values)
        sum += v;
    final_estimate.epsilon = sum / static_cast<double>(values.size());
    final_estimate.n_samples = total_samples;
    final_estimate.discarded = total_discarded;
    if (values.size() > 1) {
        double scatter = 0.0;
        for (double v : values) {
            const double centered = v - final_estimate.epsilon;
            scatter += centered * centered;
        }
        final_estimate.std_err = std::sqrt(
            scatter / (static_cast<double>(values.size()) *
                       static_cast<double>(values.size() - 1)));
    } else {
        final_estimate.std_err = fallback_std_err;
    }
    return solution;
}

double population_entrywise_stddev_max(const LocalPopulation& population) {
    if (population.members.empty())
        throw std::invalid_argument(
            "population_entrywise_stddev_max: population is empty");
    const auto stddev_max = [&](auto&& select) {
        const Eigen::MatrixXd& first = select(population.members.front());
        Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(first.rows(), first.cols());
        for (const LocalPair& pair : population.members)
            mean += select(pair);
        mean /= static_cast<double>(population.members.size());
        Eigen::MatrixXd second = Eigen::MatrixXd::Zero(first.rows(), first.cols());
        for (const LocalPair& pair : population.members) {
            Eigen::MatrixXd centered = select(pair) - mean;
            second += centered.cwiseProduct(centered);
        }
        second /= static_cast<double>(population.members.size());
        return std::sqrt(second.maxCoeff());
    };
    const double aux = stddev_max([](const LocalPair& p) -> const Eigen::MatrixXd& {
        return p.v_aux;
    });
    const double main_part =
        stddev_max([](const LocalPair& p) -> const Eigen::MatrixXd& {
            return p.v_main;
        });
    return std::max(aux, main_part);
}

} // namespace graphgp
