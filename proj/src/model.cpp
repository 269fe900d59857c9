#include "sdgnet/model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "sdgnet/errors.hpp"

namespace sdgnet {

namespace {

double stable_logistic(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double clip_probability(double p) {
    return std::min(std::max(p, DBL_EPSILON), 1.0 - DBL_EPSILON);
}

Eigen::Matrix3d information_matrix(const Eigen::MatrixXd& design, const Eigen::Vector3d& beta) {
    Eigen::Matrix3d info = Eigen::Matrix3d::Zero();
    for (Eigen::Index i = 0; i < design.rows(); ++i) {
        const double p = stable_logistic(design.row(i).dot(beta));
        const Eigen::Vector3d x = design.row(i).transpose();
        info += p * (1.0 - p) * x * x.transpose();
    }
    return info;
}

FittedModel partial_model(const Eigen::Vector3d& beta, double log_lik, int iterations) {
    FittedModel m;
    for (int k = 0; k < 3; ++k) m.beta[static_cast<std::size_t>(k)] = beta(k);
    m.log_likelihood = log_lik;
    m.iterations = iterations;
    m.converged = false;
    return m;
}

}  // namespace

long SplitPlan::train_size() const {
    return std::count(in_train.begin(), in_train.end(), std::uint8_t{1});
}

long SplitPlan::test_size() const { return static_cast<long>(in_train.size()) - train_size(); }

EvalReport make_eval_report(long tp, long fn, long fp, long tn) {
    EvalReport r{tp, fn, fp, tn, 0.0};
    const long total = r.total();
    if (total > 0) r.accuracy = static_cast<double>(tp + tn) / static_cast<double>(total);
    return r;
}

double predict_probability(const std::array<double, 3>& beta, double x_d, double x_h) {
    return stable_logistic(beta[0] + beta[1] * x_d + beta[2] * x_h);
}

int classify(double p, double threshold) { return p >= threshold ? 1 : 0; }

double log_likelihood(const std::array<double, 3>& beta, std::span<const Observation> data) {
    double ll = 0.0;
    for (const auto& obs : data) {
        const double z = beta[0] + beta[1] * obs.x_d + beta[2] * obs.x_h;
        ll += static_cast<double>(obs.y) * z - softplus(z);
    }
    return ll;
}

std::array<double, 3> log_likelihood_gradient(const std::array<double, 3>& beta,
                                              std::span<const Observation> data) {
    std::array<double, 3> g{0.0, 0.0, 0.0};
    for (const auto& obs : data) {
        const double p = predict_probability(beta, obs.x_d, obs.x_h);
        const double r = static_cast<double>(obs.y) - p;
        g[0] += r;
        g[1] += r * obs.x_d;
        g[2] += r * obs.x_h;
    }
    return g;
}

FittedModel fit_logistic(std::span<const Observation> data) {
    const auto n = static_cast<Eigen::Index>(data.size());
    if (n < 3) throw DomainError("fit_logistic: need at least 3 observations");

    bool has_zero = false, has_one = false;
    for (const auto& obs : data) (obs.y != 0 ? has_one : has_zero) = true;
    if (!has_zero || !has_one)
        throw DataError("fit_logistic: labels contain a single class, nothing to fit");

    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd response(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& obs = data[static_cast<std::size_t>(i)];
        design(i, 0) = 1.0;
        design(i, 1) = obs.x_d;
        design(i, 2) = obs.x_h;
        response(i) = static_cast<double>(obs.y);
    }

    const auto loglik = [&](const Eigen::Vector3d& b) {
        return log_likelihood({b(0), b(1), b(2)}, data);
    };

    Eigen::Vector3d beta = Eigen::Vector3d::Zero();
    double ll_prev = loglik(beta);
    bool converged = false;
    int iterations = 0;

    for (int iter = 1; iter <= kMaxIterations; ++iter) {
        iterations = iter;

        // One IRLS proposal from the current coefficients.
        Eigen::VectorXd sqrt_w(n), working(n);
        const Eigen::VectorXd eta = design * beta;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double p = clip_probability(stable_logistic(eta(i)));
            const double w = p * (1.0 - p);
            sqrt_w(i) = std::sqrt(w);
            working(i) = eta(i) + (response(i) - p) / w;
        }
        const Eigen::MatrixXd weighted_design = sqrt_w.asDiagonal() * design;
        const Eigen::VectorXd weighted_response = sqrt_w.cwiseProduct(working);
        Eigen::Vector3d proposal =
            weighted_design.colPivHouseholderQr().solve(weighted_response);

        double ll_new = loglik(proposal);
        for (int half = 0; half < 30 && !(ll_new >= ll_prev); ++half) {
            proposal = 0.5 * (proposal + beta);
            ll_new = loglik(proposal);
        }
        beta = proposal;

        if (beta.cwiseAbs().maxCoeff() > kSeparationBound)
            throw FitError("fit_logistic: coefficient magnitude exceeded " +
                               std::to_string(kSeparationBound) +
                               ", data look completely or quasi-separated",
                           partial_model(beta, ll_new, iterations));

        if (std::abs(ll_new - ll_prev) < kLogLikTolerance) {
            converged = true;
            ll_prev = ll_new;
            break;
        }
        ll_prev = ll_new;
    }

    if (!converged)
        throw FitError("fit_logistic: no convergence within " + std::to_string(kMaxIterations) +
                           " iterations",
                       partial_model(beta, ll_prev, iterations));

    // Covariance = inverse observed information at the optimum. Falls back to
    // the pseudo-inverse when a predictor column is degenerate.
    const Eigen::Matrix3d info = information_matrix(design, beta);
    Eigen::FullPivLU<Eigen::Matrix3d> lu(info);
    const Eigen::Matrix3d cov =
        lu.isInvertible() ? Eigen::Matrix3d(lu.inverse())
                          : Eigen::Matrix3d(info.completeOrthogonalDecomposition().pseudoInverse());

    FittedModel model;
    for (int k = 0; k < 3; ++k) {
        model.beta[static_cast<std::size_t>(k)] = beta(k);
        for (int l = 0; l < 3; ++l)
            model.covariance[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] =
                cov(k, l);
    }
    model.log_likelihood = ll_prev;
    model.iterations = iterations;
    model.converged = true;

    const WaldSummary wald = wald_inference(model.beta, model.covariance);
    model.standard_errors = wald.standard_errors;
    model.ci95 = wald.ci95;
    model.p_values = wald.p_values;

    std::vector<double> xd(data.size()), xh(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        xd[i] = data[i].x_d;
        xh[i] = data[i].x_h;
    }
    try {
        model.vif = vif(xd, xh);
    } catch (const DomainError&) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        model.vif = {nan, nan};  // constant predictor column
    } catch (const DataError&) {
        const double inf = std::numeric_limits<double>::infinity();
        model.vif = {inf, inf};  // perfectly collinear predictors
    }
    return model;
}

WaldSummary wald_inference(const std::array<double, 3>& beta,
                           const std::array<std::array<double, 3>, 3>& covariance) {
    for (std::size_t i = 0; i < 3; ++i) {
        if (covariance[i][i] < 0.0)
            throw DomainError("wald_inference: negative variance on the diagonal");
        for (std::size_t j = i + 1; j < 3; ++j) {
            const double scale =
                std::max({1.0, std::abs(covariance[i][j]), std::abs(covariance[j][i])});
            if (std::abs(covariance[i][j] - covariance[j][i]) > 1e-8 * scale)
                throw DomainError("wald_inference: covariance matrix is not symmetric");
        }
    }

    WaldSummary out;
    for (std::size_t i = 0; i < 3; ++i) {
        const double se = std::sqrt(covariance[i][i]);
        out.standard_errors[i] = se;
        out.ci95[i] = {beta[i] - kZ975 * se, beta[i] + kZ975 * se};
        if (se == 0.0) {
            // Degenerate information: zero effect is certain (p = 1), a
            // nonzero estimate with zero SE is an unstable p = 0.
            out.p_values[i] = beta[i] == 0.0 ? 1.0 : 0.0;
            out.unstable[i] = beta[i] != 0.0;
        } else {
            const double z = std::abs(beta[i]) / se;
            out.p_values[i] = std::erfc(z / std::sqrt(2.0));
            out.unstable[i] = false;
        }
    }
    return out;
}

std::array<double, 2> vif(std::span<const double> x_d_column, std::span<const double> x_h_column) {
    if (x_d_column.size() != x_h_column.size()) throw DomainError("vif: column length mismatch");
    const std::size_t n = x_d_column.size();
    if (n < 3) throw DomainError("vif: need at least 3 rows");

    double mean_d = 0.0, mean_h = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_d += x_d_column[i];
        mean_h += x_h_column[i];
    }
    mean_d /= static_cast<double>(n);
    mean_h /= static_cast<double>(n);

    double var_d = 0.0, var_h = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dd = x_d_column[i] - mean_d;
        const double dh = x_h_column[i] - mean_h;
        var_d += dd * dd;
        var_h += dh * dh;
        cross += dd * dh;
    }
    if (var_d == 0.0 || var_h == 0.0) throw DomainError("vif: constant predictor column");

    // With exactly two predictors, each R^2 from regressing one on the other
    // equals the squared Pearson correlation, so both factors coincide.
    const double r = cross / std::sqrt(var_d * var_h);
    const double r2 = r * r;
    if (r2 >= 1.0) throw DataError("vif: predictors are perfectly collinear (infinite VIF)");
    const double factor = 1.0 / (1.0 - r2);
    return {factor, factor};
}

SplitPlan stratified_split(std::span<const std::string> point_country,
                           const std::map<std::string, PerformanceCategory>& strata,
                           double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw DomainError("stratified_split: train_fraction must lie strictly in (0, 1)");

    SplitPlan plan;
    plan.seed = seed;
    plan.train_fraction = train_fraction;
    plan.in_train.assign(point_country.size(), 0);

    constexpr std::array<PerformanceCategory, 3> kCategories{
        PerformanceCategory::Worst, PerformanceCategory::Moderate, PerformanceCategory::Best};

    std::array<std::vector<std::size_t>, 3> members;
    for (std::size_t i = 0; i < point_country.size(); ++i) {
        const auto it = strata.find(point_country[i]);
        if (it == strata.end())
            throw DomainError("stratified_split: no performance category for country " +
                              point_country[i]);
        members[static_cast<std::size_t>(it->second)].push_back(i);
    }

    for (std::size_t c = 0; c < kCategories.size(); ++c) {
        auto& idx = members[c];
        if (idx.empty()) {
            plan.skipped_categories.push_back(kCategories[c]);
            continue;
        }
        // Hand-rolled Fisher-Yates: std::shuffle sequences differ between
        // standard libraries, and the plan must be reproducible from the seed.
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (c + 1)));
        for (std::size_t i = idx.size() - 1; i > 0; --i) {
            const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
            std::swap(idx[i], idx[j]);
        }
        const auto take = static_cast<std::size_t>(
            std::llround(train_fraction * static_cast<double>(idx.size())));
        for (std::size_t k = 0; k < take && k < idx.size(); ++k) plan.in_train[idx[k]] = 1;
    }
    return plan;
}

EvalReport evaluate(const FittedModel& model, std::span<const Observation> test,
                    double threshold) {
    if (test.empty()) throw DomainError("evaluate: empty test set");
    long tp = 0, fn = 0, fp = 0, tn = 0;
    for (const auto& obs : test) {
        const int predicted =
            classify(predict_probability(model.beta, obs.x_d, obs.x_h), threshold);
        if (obs.y == 1)
            (predicted == 1 ? tp : fn) += 1;
        else
            (predicted == 1 ? fp : tn) += 1;
    }
    return make_eval_report(tp, fn, fp, tn);
}

}  // namespace sdgnet
