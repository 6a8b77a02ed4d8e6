#include "towerplan/mlp.hpp"

#include "towerplan/errors.hpp"
#include "towerplan/features.hpp"
#include "towerplan/io.hpp"
#include "towerplan/rng.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <utility>

namespace towerplan {

namespace {

// Forward pass over a batch; returns per-layer activations, activations[0]
// being the standardized inputs (dims[l] x N each).
std::vector<Eigen::MatrixXd> forward_batch(const Model& model, const Eigen::MatrixXd& inputs) {
    std::vector<Eigen::MatrixXd> activations;
    activations.reserve(model.weights.size() + 1);
    activations.push_back(inputs);
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        Eigen::MatrixXd z =
            (model.weights[l] * activations.back()).colwise() + model.biases[l];
        if (l + 1 < model.weights.size()) z = z.array().tanh().matrix();
        activations.push_back(std::move(z));
    }
    return activations;
}

Eigen::MatrixXd standardized_inputs(const Model& model, const TrainingDataset& dataset) {
    const auto n = static_cast<Eigen::Index>(dataset.rows.size());
    const auto m = static_cast<Eigen::Index>(model.layer_dims.front());
    Eigen::MatrixXd inputs(m, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        inputs.col(i) =
            (dataset.rows[i].features - model.feature_mean).cwiseQuotient(model.feature_std);
    }
    return inputs;
}

struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

// Backprop of a loss whose derivative w.r.t. the outputs is `output_grad`
// (1 x N). Activations come from forward_batch.
Gradients backward_batch(const Model& model, const std::vector<Eigen::MatrixXd>& activations,
                         const Eigen::MatrixXd& output_grad) {
    const auto layers = model.weights.size();
    Gradients grads;
    grads.weights.resize(layers);
    grads.biases.resize(layers);
    Eigen::MatrixXd delta = output_grad; // identity output activation
    for (std::size_t l = layers; l-- > 0;) {
        grads.weights[l] = delta * activations[l].transpose();
        grads.biases[l] = delta.rowwise().sum();
        if (l > 0) {
            delta = (model.weights[l].transpose() * delta).array() *
                    (1.0 - activations[l].array().square());
        }
    }
    return grads;
}

double batch_loss(const Eigen::MatrixXd& outputs, const Eigen::RowVectorXd& targets) {
    return (outputs.row(0) - targets).squaredNorm() / static_cast<double>(targets.size());
}

std::vector<double> parse_number_line(const std::string& line, std::size_t expected,
                                      const char* what) {
    std::vector<double> values;
    values.reserve(expected);
    const char* ptr = line.data();
    const char* end = ptr + line.size();
    while (ptr != end) {
        while (ptr != end && *ptr == ' ') ++ptr;
        if (ptr == end) break;
        double v = 0.0;
        const auto [next, ec] = std::from_chars(ptr, end, v);
        if (ec != std::errc{})
            throw CorruptionError(std::string("model file: bad number in ") + what);
        values.push_back(v);
        ptr = next;
    }
    if (values.size() != expected)
        throw CorruptionError(std::string("model file: ") + what + " has " +
                              std::to_string(values.size()) + " values, expected " +
                              std::to_string(expected));
    return values;
}

std::string getline_or_throw(std::istringstream& in, const char* what) {
    std::string line;
    if (!std::getline(in, line))
        throw CorruptionError(std::string("model file truncated: missing ") + what);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

} // namespace

void validate(const Hyperparams& hp) {
    if (hp.epochs < 1) throw ConfigError("epochs must be >= 1");
    if (!(hp.learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
    for (int d : hp.hidden_dims)
        if (d < 1) throw ConfigError("hidden layer widths must be >= 1");
}

void validate(const Model& model) {
    const auto layers = model.layer_dims.size();
    if (layers < 2) throw CorruptionError("model needs at least input and output layers");
    for (int d : model.layer_dims)
        if (d < 1) throw CorruptionError("layer widths must be >= 1");
    if (model.layer_dims.back() != 1) throw CorruptionError("output layer must have width 1");
    if (model.weights.size() != layers - 1 || model.biases.size() != layers - 1)
        throw CorruptionError("layer count does not match weight count");
    for (std::size_t l = 0; l + 1 < layers; ++l) {
        if (model.weights[l].rows() != model.layer_dims[l + 1] ||
            model.weights[l].cols() != model.layer_dims[l])
            throw CorruptionError("weight matrix shape mismatch at layer " + std::to_string(l));
        if (model.biases[l].size() != model.layer_dims[l + 1])
            throw CorruptionError("bias length mismatch at layer " + std::to_string(l));
    }
    if (model.feature_mean.size() != model.layer_dims.front() ||
        model.feature_std.size() != model.layer_dims.front())
        throw CorruptionError("normalization stats do not match the input width");
    if ((model.feature_std.array() <= 0.0).any())
        throw CorruptionError("normalization stds must be positive");
}

Model train(const TrainingDataset& dataset, const Hyperparams& hp, TrainTrace* trace) {
    validate(hp);
    if (dataset.rows.empty()) throw DataError("cannot train on an empty dataset");

    const auto n = static_cast<Eigen::Index>(dataset.rows.size());
    const auto m = static_cast<Eigen::Index>(feat::kCount);

    Model model;
    model.seed = hp.seed;
    model.layer_dims.push_back(static_cast<int>(m));
    for (int d : hp.hidden_dims) model.layer_dims.push_back(d);
    model.layer_dims.push_back(1);

    // Standardization stats; a constant feature keeps std 1 so it maps to 0.
    Eigen::MatrixXd raw(m, n);
    Eigen::RowVectorXd targets(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        raw.col(i) = dataset.rows[i].features;
        targets(i) = dataset.rows[i].target_dbm;
    }
    model.feature_mean = raw.rowwise().mean();
    model.feature_std.resize(m);
    for (Eigen::Index f = 0; f < m; ++f) {
        const double var =
            (raw.row(f).array() - model.feature_mean(f)).square().sum() / static_cast<double>(n);
        const double sd = std::sqrt(var);
        const double tiny = 1e-12 * std::max(1.0, std::abs(model.feature_mean(f)));
        model.feature_std(f) = sd < tiny ? 1.0 : sd;
    }

    // Seeded init: per layer all weights row-major, then the bias entries.
    // The output bias is then re-anchored at the target mean so the first
    // epochs need not spend steps closing a large DC offset.
    SeededRng rng(hp.seed);
    for (std::size_t l = 0; l + 1 < model.layer_dims.size(); ++l) {
        const int rows = model.layer_dims[l + 1];
        const int cols = model.layer_dims[l];
        const double limit = 1.0 / std::sqrt(static_cast<double>(cols));
        Eigen::MatrixXd w(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) w(r, c) = rng.uniform(-limit, limit);
        Eigen::VectorXd b(rows);
        for (int r = 0; r < rows; ++r) b(r) = rng.uniform(-limit, limit);
        model.weights.push_back(std::move(w));
        model.biases.push_back(std::move(b));
    }
    model.biases.back()(0) = targets.mean();

    const Eigen::MatrixXd inputs = standardized_inputs(model, dataset);

    auto loss_at = [&](const Model& candidate) {
        const auto activations = forward_batch(candidate, inputs);
        return batch_loss(activations.back(), targets);
    };

    double previous_loss = loss_at(model);
    if (!std::isfinite(previous_loss))
        throw DataError("training diverged at epoch 0: loss is not finite");
    if (trace) trace->epoch_loss.push_back(previous_loss);

    double lr = hp.learning_rate;
    for (int epoch = 1; epoch <= hp.epochs; ++epoch) {
        const auto activations = forward_batch(model, inputs);
        const Eigen::MatrixXd output_grad =
            2.0 * (activations.back().row(0) - targets) / static_cast<double>(n);
        const Gradients grads = backward_batch(model, activations, output_grad);

        // Step halving: retry the epoch at ever-smaller rates until the
        // loss stops increasing. lr underflowing to zero reproduces the
        // previous parameters, so the loop always terminates.
        Model stepped = model;
        double stepped_loss = 0.0;
        while (true) {
            if (lr == 0.0) {
                // Underflowed rate: keep the previous parameters. Bounds the
                // retry loop even when the gradients are non-finite.
                stepped.weights = model.weights;
                stepped.biases = model.biases;
                stepped_loss = previous_loss;
                break;
            }
            for (std::size_t l = 0; l < model.weights.size(); ++l) {
                stepped.weights[l] = model.weights[l] - lr * grads.weights[l];
                stepped.biases[l] = model.biases[l] - lr * grads.biases[l];
            }
            stepped_loss = loss_at(stepped);
            if (std::isnan(stepped_loss) || stepped_loss > previous_loss) {
                lr *= 0.5;
                continue;
            }
            break;
        }
        if (!std::isfinite(stepped_loss))
            throw DataError("training diverged at epoch " + std::to_string(epoch) +
                            ": loss is not finite");
        model.weights = stepped.weights;
        model.biases = stepped.biases;
        previous_loss = stepped_loss;
        if (trace) trace->epoch_loss.push_back(stepped_loss);
    }
    return model;
}

double predict_point(const Model& model, const Eigen::VectorXd& features) {
    if (features.size() != model.layer_dims.front())
        throw DimensionError("feature length " + std::to_string(features.size()) +
                             " does not match model input width " +
                             std::to_string(model.layer_dims.front()));
    Eigen::VectorXd a = (features - model.feature_mean).cwiseQuotient(model.feature_std);
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        a = model.weights[l] * a + model.biases[l];
        if (l + 1 < model.weights.size()) a = a.array().tanh().matrix();
    }
    return a(0);
}

CoverageMap predict_map(const Model& model, const SiteConfiguration& config,
                        const Scenario& scenario) {
    if (config.grid != scenario.grid)
        throw DimensionError("configuration grid does not match scenario grid");
    CoverageMap map;
    map.grid = scenario.grid;
    map.values_dbm.resize(scenario.grid.point_count());
    for (int i = 0; i < scenario.grid.point_count(); ++i)
        map.values_dbm[i] = predict_point(model, build_feature_vector(i, config, scenario));
    return map;
}

double mse_loss(const Model& model, const TrainingDataset& dataset) {
    if (dataset.rows.empty()) throw DataError("cannot evaluate loss on an empty dataset");
    double sum = 0.0;
    for (const TrainingRow& row : dataset.rows) {
        const double r = predict_point(model, row.features) - row.target_dbm;
        sum += r * r;
    }
    return sum / static_cast<double>(dataset.rows.size());
}

double gradient_check(const Model& model, const Eigen::VectorXd& features, double target,
                      double epsilon) {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    if (features.size() != model.layer_dims.front())
        throw DimensionError("feature length does not match model input width");

    // Analytic gradient of the squared error (f(x) - y)^2 on this sample.
    Eigen::MatrixXd input = (features - model.feature_mean).cwiseQuotient(model.feature_std);
    const auto activations = forward_batch(model, input);
    Eigen::MatrixXd output_grad(1, 1);
    output_grad(0, 0) = 2.0 * (activations.back()(0, 0) - target);
    const Gradients analytic = backward_batch(model, activations, output_grad);

    Model probe = model;
    auto loss_at = [&](const Model& candidate) {
        const double r = predict_point(candidate, features) - target;
        return r * r;
    };
    double max_rel = 0.0;
    auto compare = [&](double analytic_value, double* parameter) {
        const double saved = *parameter;
        *parameter = saved + epsilon;
        const double plus = loss_at(probe);
        *parameter = saved - epsilon;
        const double minus = loss_at(probe);
        *parameter = saved;
        const double numeric = (plus - minus) / (2.0 * epsilon);
        const double rel = std::abs(analytic_value - numeric) /
                           std::max(std::abs(analytic_value) + std::abs(numeric), 1e-8);
        max_rel = std::max(max_rel, rel);
    };
    for (std::size_t l = 0; l < probe.weights.size(); ++l) {
        for (Eigen::Index r = 0; r < probe.weights[l].rows(); ++r)
            for (Eigen::Index c = 0; c < probe.weights[l].cols(); ++c)
                compare(analytic.weights[l](r, c), &probe.weights[l](r, c));
        for (Eigen::Index r = 0; r < probe.biases[l].size(); ++r)
            compare(analytic.biases[l](r), &probe.biases[l](r));
    }
    return max_rel;
}

std::string serialize_model(const Model& model) {
    validate(model);
    std::ostringstream out;
    out << "CPMODEL 1\n";
    for (std::size_t i = 0; i < model.layer_dims.size(); ++i)
        out << (i ? " " : "") << model.layer_dims[i];
    out << '\n';
    auto put_row = [&out](const double* values, Eigen::Index count) {
        for (Eigen::Index i = 0; i < count; ++i)
            out << (i ? " " : "") << format_double(values[i]);
        out << '\n';
    };
    put_row(model.feature_mean.data(), model.feature_mean.size());
    put_row(model.feature_std.data(), model.feature_std.size());
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        // Eigen stores column-major; emit row-major explicitly.
        const Eigen::MatrixXd& w = model.weights[l];
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c)
                out << (r + c ? " " : "") << format_double(w(r, c));
        }
        out << '\n';
        put_row(model.biases[l].data(), model.biases[l].size());
    }
    return out.str();
}

void save_model(const Model& model, const std::string& path) {
    write_text_file(path, serialize_model(model));
}

Model parse_model(const std::string& text) {
    std::istringstream in(text);
    std::string magic;
    if (!std::getline(in, magic) || magic != "CPMODEL 1")
        throw FormatError("not a CPMODEL 1 file (got '" + magic + "')");

    Model model;
    {
        std::istringstream dims(getline_or_throw(in, "layer dims"));
        int d = 0;
        while (dims >> d) model.layer_dims.push_back(d);
        if (model.layer_dims.size() < 2)
            throw CorruptionError("model file: fewer than two layer dims");
        for (int dim : model.layer_dims)
            if (dim < 1) throw CorruptionError("model file: non-positive layer dim");
    }
    const auto m = static_cast<std::size_t>(model.layer_dims.front());
    const auto means = parse_number_line(getline_or_throw(in, "feature means"), m, "means line");
    const auto stds = parse_number_line(getline_or_throw(in, "feature stds"), m, "stds line");
    model.feature_mean =
        Eigen::Map<const Eigen::VectorXd>(means.data(), static_cast<Eigen::Index>(m));
    model.feature_std =
        Eigen::Map<const Eigen::VectorXd>(stds.data(), static_cast<Eigen::Index>(m));

    for (std::size_t l = 0; l + 1 < model.layer_dims.size(); ++l) {
        const auto rows = static_cast<std::size_t>(model.layer_dims[l + 1]);
        const auto cols = static_cast<std::size_t>(model.layer_dims[l]);
        const auto flat =
            parse_number_line(getline_or_throw(in, "weights line"), rows * cols, "weights line");
        Eigen::MatrixXd w(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    flat[r * cols + c];
        const auto b = parse_number_line(getline_or_throw(in, "biases line"), rows, "biases line");
        model.weights.push_back(std::move(w));
        model.biases.push_back(
            Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(rows)));
    }
    validate(model);
    return model;
}

Model load_model(const std::string& path) { return parse_model(read_text_file(path)); }

} // namespace towerplan
