#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdgnet/ingest.hpp"

namespace sdgnet {

// Published coefficients of the pooled model (intercept, x_d, x_h). Shipped
// as a fixture so country reports can be produced without refitting.
inline constexpr std::array<double, 3> kPublishedBeta{-19.2031, 39.0684, 2.1742};

// Exact 97.5% standard normal quantile used for the 95% Wald intervals.
inline constexpr double kZ975 = 1.959964;

inline constexpr double kLogLikTolerance = 1e-10;
inline constexpr int kMaxIterations = 100;
inline constexpr double kSeparationBound = 1e3;

struct Observation {
    double x_d = 0.0;
    double x_h = 0.0;
    int y = 0;
};

struct FittedModel {
    std::array<double, 3> beta{};
    std::array<std::array<double, 3>, 3> covariance{};
    std::array<double, 3> standard_errors{};
    std::array<std::array<double, 2>, 3> ci95{};
    std::array<double, 3> p_values{};
    // Both entries equal 1/(1-r^2) of the two predictors. NaN when a predictor
    // column is constant, +inf when the columns are perfectly collinear.
    std::array<double, 2> vif{};
    double log_likelihood = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct WaldSummary {
    std::array<double, 3> standard_errors{};
    std::array<std::array<double, 2>, 3> ci95{};
    std::array<double, 3> p_values{};
    std::array<bool, 3> unstable{};  // zero SE with nonzero estimate
};

// Separation or non-convergence; carries the last iterate for diagnostics.
class FitError : public std::runtime_error {
public:
    FitError(const std::string& msg, FittedModel last)
        : std::runtime_error(msg), last_(std::move(last)) {}
    const FittedModel& last_iterate() const { return last_; }

private:
    FittedModel last_;
};

// Stratified train/test assignment over pooled data points, index-aligned
// with the point list handed to stratified_split.
struct SplitPlan {
    std::uint64_t seed = 0;
    double train_fraction = 0.8;
    std::vector<std::uint8_t> in_train;
    std::vector<PerformanceCategory> skipped_categories;

    long train_size() const;
    long test_size() const;
};

// Confusion counts with synergy-dominated as the positive class.
struct EvalReport {
    long tp = 0;
    long fn = 0;
    long fp = 0;
    long tn = 0;
    double accuracy = 0.0;

    long total() const { return tp + fn + fp + tn; }
};

EvalReport make_eval_report(long tp, long fn, long fp, long tn);

// logistic(beta0 + beta1*x_d + beta2*x_h), exp-overflow safe.
double predict_probability(const std::array<double, 3>& beta, double x_d, double x_h);

// 1 iff p >= threshold.
int classify(double p, double threshold = 0.5);

// Bernoulli log-likelihood and its analytic gradient.
double log_likelihood(const std::array<double, 3>& beta, std::span<const Observation> data);
std::array<double, 3> log_likelihood_gradient(const std::array<double, 3>& beta,
                                              std::span<const Observation> data);

// Maximum-likelihood fit via iteratively reweighted least squares (Newton).
// Converges when the log-likelihood change drops below kLogLikTolerance.
// Throws DomainError for < 3 observations, DataError when only one label
// class is present, FitError on separation (|beta| > 1e3) or non-convergence.
FittedModel fit_logistic(std::span<const Observation> data);

// SE, 95% CI, and two-sided normal p-value per coefficient.
WaldSummary wald_inference(const std::array<double, 3>& beta,
                           const std::array<std::array<double, 3>, 3>& covariance);

// Variance inflation factors of the two predictor columns.
std::array<double, 2> vif(std::span<const double> x_d_column,
                          std::span<const double> x_h_column);

// Per-category uniform random assignment of round(train_fraction * size)
// points to the training side; deterministic given the seed.
SplitPlan stratified_split(std::span<const std::string> point_country,
                           const std::map<std::string, PerformanceCategory>& strata,
                           double train_fraction, std::uint64_t seed);

EvalReport evaluate(const FittedModel& model, std::span<const Observation> test,
                    double threshold = 0.5);

}  // namespace sdgnet
