#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "barrenlab/modcore.hpp"
#include "barrenlab/rng.hpp"

namespace barrenlab::nn {

using modcore::PrimeField;
using modcore::u64;

enum class Activation { ReLU, Sigmoid, Identity };
enum class Loss { Mse, Logistic };

/// Dense architecture: layer_sizes = [input, hidden..., output], one
/// activation per non-input layer.
struct MlpSpec {
    std::vector<int> layer_sizes;
    std::vector<Activation> activations;

    std::size_t layer_count() const { return activations.size(); }
};

MlpSpec dense_spec(std::vector<int> sizes, Activation hidden,
                   Activation output);

/// Dense network over a flat parameter vector: per layer a (d_out x d_in)
/// row-major weight block followed by the bias block.
class MlpModel {
public:
    explicit MlpModel(MlpSpec spec);

    /// Per-layer uniform init on [-1/sqrt(d_in), 1/sqrt(d_in)], weights
    /// before biases, drawn in layer order.
    static MlpModel random_init(const MlpSpec& spec, CounterRng& rng);

    const MlpSpec& spec() const { return spec_; }
    std::size_t param_count() const { return params_.size(); }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    std::size_t weight_offset(std::size_t layer) const;
    std::size_t bias_offset(std::size_t layer) const;

    std::vector<double> forward(double x) const;

private:
    MlpSpec spec_;
    std::vector<double> params_;
    std::vector<std::size_t> weight_offsets_, bias_offsets_;
};

struct GradientVector {
    std::vector<double> values;
};

/// Mean loss over the batch and its exact reverse-mode gradient.
/// Requires a scalar output head.
std::pair<double, GradientVector> loss_and_grad(
    const MlpModel& model,
    const std::vector<std::pair<double, double>>& batch, Loss loss);

struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    long step = 0;
    std::vector<double> m, v;
};

AdamState make_adam_state(const MlpModel& model);
void adam_step(AdamState& state, MlpModel& model, const GradientVector& grad,
               double lr);

/// One initialization's gradient-concentration statistics for the modular
/// r-th-bit class under the logistic loss:
///   v = E_A |grad L_A - E_A' grad L_A'|^2 over full-batch gradients,
///   g = E_X |d eta / d w (X)|^2, both expectations over Z_p^*.
struct ProbeSample {
    double v;
    double g;
};

/// Exact v via the pair-kernel form of the same finite sum: for
/// u_x = alpha(x) grad_w eta(x),
///   v = (1/(p-1)^2) sum_{x,x'} <u_x,u_x'> f~((x'/x) mod p),
/// where f~ is the Gram statistic of the centered bit target. Layer-factored
/// inner products make this O(p^2 * width) instead of O(p^2 * s).
ProbeSample probe_sample_kernel(const PrimeField& field, unsigned r,
                                const MlpModel& model);

/// Definitional two-pass v (mean gradient, then mean squared deviation) and
/// the moment-identity variant E|grad|^2 - |E grad|^2. O(p^2 s): test scale.
struct ProbeReference {
    double v_two_pass;
    double v_moment_identity;
    double g;
};

ProbeReference probe_sample_reference(const PrimeField& field, unsigned r,
                                      const MlpModel& model);

struct ProbeReport {
    u64 p = 0;
    unsigned r = 1;
    double v = 0.0;          // mean over inits
    double g = 0.0;          // mean over inits
    double ratio_sqrt = 0.0;  // E_i[(v_i/g_i)] * sqrt(p)
    double ratio_lin = 0.0;   // E_i[(v_i/g_i)] * p
    std::vector<u64> seeds;   // per-init stream ids
};

ProbeReport probe_variance(const PrimeField& field, unsigned r,
                           const MlpSpec& arch, int n_inits, u64 seed,
                           u64 p_cap = 3001);

enum class Task { WaveRegression, BitClassification };

struct TrainConfig {
    // wave regression
    u64 wave_a_max = 1ull << 20;  // frequency bound A

    // bit classification
    u64 p = 0;
    unsigned r = 1;

    std::size_t sample_count = 0;  // 0 = task default
    int epochs = 0;                // 0 = task default
    std::size_t batch_size = 0;    // 0 = task default
    double lr = 1e-3;
    double train_fraction = 0.7;
    std::vector<int> hidden;  // empty = task default
    u64 seed = 1;
};

struct TrainTrace {
    std::vector<double> epoch_loss;      // mean minibatch train loss
    std::vector<double> epoch_test_acc;  // classification only
    double final_loss = 0.0;
    double final_test_acc = 0.0;
    u64 drawn_parameter = 0;  // the sampled frequency / multiplier a
};

TrainTrace train(Task task, const TrainConfig& config);

}  // namespace barrenlab::nn
