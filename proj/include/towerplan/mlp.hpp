#pragma once

#include "towerplan/dataset.hpp"
#include "towerplan/grid.hpp"
#include "towerplan/scenario.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace towerplan {

// Feedforward regressor with tanh hidden units and an identity output.
// weights[l] has shape dims[l+1] x dims[l]; biases[l] has length dims[l+1].
// Inputs are standardized with the stored per-feature mean/std before the
// forward pass.
struct Model {
    std::vector<int> layer_dims;
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
    Eigen::VectorXd feature_mean;
    Eigen::VectorXd feature_std;
    std::uint64_t seed = 0; // training provenance, not serialized
};

struct Hyperparams {
    std::vector<int> hidden_dims{32, 16};
    double learning_rate = 0.01;
    int epochs = 500;
    std::uint64_t seed = 0;
};

// Per-epoch loss under the step-halving rule; entry 0 is the loss at the
// initial parameters, so back() <= front() always holds after training.
struct TrainTrace {
    std::vector<double> epoch_loss;
};

void validate(const Hyperparams& hp);

// Shape-consistency check; throws CorruptionError on mismatch.
void validate(const Model& model);

// Full-batch gradient descent on the mean squared error. Whenever an
// epoch's loss would exceed the previous epoch's, the step is halved and
// the epoch retried, so the final loss never exceeds the initial one.
// Weights and biases start uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)]
// (seeded), except the output bias which starts at the target mean.
// Deterministic: (dataset, hp) fix the resulting model bit-for-bit.
// Throws DataError("training diverged...") if the loss turns non-finite.
Model train(const TrainingDataset& dataset, const Hyperparams& hp, TrainTrace* trace = nullptr);

// Standardized forward pass; pure. Throws DimensionError when the feature
// length differs from layer_dims[0].
double predict_point(const Model& model, const Eigen::VectorXd& features);

// predict_point applied to build_feature_vector(i, config, scenario) for
// every grid point i.
CoverageMap predict_map(const Model& model, const SiteConfiguration& config,
                        const Scenario& scenario);

// Mean squared error of the model over a dataset.
double mse_loss(const Model& model, const TrainingDataset& dataset);

// Compares every backprop partial of the squared error on one sample
// against central finite differences; returns the maximum relative error
// |analytic - numeric| / max(|analytic| + |numeric|, 1e-8).
double gradient_check(const Model& model, const Eigen::VectorXd& features, double target,
                      double epsilon = 1e-5);

// Versioned text format:
//   CPMODEL 1
//   <layer dims, space-separated>
//   <feature means>
//   <feature stds>
//   then per layer: one line of row-major weights, one line of biases.
// All reals carry 17 significant digits; load(save(m)) reproduces
// predictions bit-exactly. Wrong magic/version -> FormatError; truncation
// or inconsistent shapes -> CorruptionError.
std::string serialize_model(const Model& model);
void save_model(const Model& model, const std::string& path);
Model parse_model(const std::string& text);
Model load_model(const std::string& path);

} // namespace towerplan
