#include "barrenlab/nn.hpp"

#include <algorithm>
#include <cmath>

#include "barrenlab/gram.hpp"
#include "barrenlab/kahan.hpp"
#include "barrenlab/parallel.hpp"
#include "barrenlab/spectral.hpp"

namespace barrenlab::nn {

namespace {

double activate(Activation act, double z) {
    switch (act) {
        case Activation::ReLU:
            return z > 0.0 ? z : 0.0;
        case Activation::Sigmoid:
            return 1.0 / (1.0 + std::exp(-z));
        case Activation::Identity:
            return z;
    }
    return z;
}

/// Derivative expressed through the activation value a = act(z).
double activate_derivative(Activation act, double z, double a) {
    switch (act) {
        case Activation::ReLU:
            return z > 0.0 ? 1.0 : 0.0;
        case Activation::Sigmoid:
            return a * (1.0 - a);
        case Activation::Identity:
            return 1.0;
    }
    return 1.0;
}

/// log(1 + exp(-z)) without overflow.
double logistic_loss(double z) {
    if (z >= 0.0) return std::log1p(std::exp(-z));
    return -z + std::log1p(std::exp(z));
}

/// d/dz log(1 + exp(-z)) = -1/(1 + exp(z)).
double logistic_loss_derivative(double z) {
    if (z >= 0.0) {
        const double e = std::exp(-z);
        return -e / (1.0 + e);
    }
    return -1.0 / (1.0 + std::exp(z));
}

/// Forward/backward scratch reused across samples.
struct Workspace {
    std::vector<std::vector<double>> acts;    // acts[l]: input to layer l
    std::vector<std::vector<double>> zs;      // zs[l]: pre-activation of layer l
    std::vector<std::vector<double>> deltas;  // deltas[l]

    explicit Workspace(const MlpSpec& spec) {
        const std::size_t layers = spec.layer_count();
        acts.resize(layers + 1);
        zs.resize(layers);
        deltas.resize(layers);
        for (std::size_t l = 0; l <= layers; ++l)
            acts[l].assign(spec.layer_sizes[l], 0.0);
        for (std::size_t l = 0; l < layers; ++l) {
            zs[l].assign(spec.layer_sizes[l + 1], 0.0);
            deltas[l].assign(spec.layer_sizes[l + 1], 0.0);
        }
    }
};

void forward_pass(const MlpModel& model, double x, Workspace& ws) {
    const MlpSpec& spec = model.spec();
    const auto& w = model.params();
    ws.acts[0][0] = x;
    for (std::size_t l = 0; l < spec.layer_count(); ++l) {
        const int d_in = spec.layer_sizes[l];
        const int d_out = spec.layer_sizes[l + 1];
        const double* weights = w.data() + model.weight_offset(l);
        const double* bias = w.data() + model.bias_offset(l);
        const double* in = ws.acts[l].data();
        for (int row = 0; row < d_out; ++row) {
            const double* wr = weights + static_cast<std::size_t>(row) * d_in;
            double z = bias[row];
            for (int c = 0; c < d_in; ++c) z += wr[c] * in[c];
            ws.zs[l][row] = z;
            ws.acts[l + 1][row] = activate(spec.activations[l], z);
        }
    }
}

/// Backpropagates an output-side gradient into the per-layer deltas.
void backward_pass(const MlpModel& model, Workspace& ws,
                   const std::vector<double>& output_grad) {
    const MlpSpec& spec = model.spec();
    const auto& w = model.params();
    const std::size_t last = spec.layer_count() - 1;
    for (std::size_t row = 0; row < output_grad.size(); ++row)
        ws.deltas[last][row] =
            output_grad[row] * activate_derivative(spec.activations[last],
                                                   ws.zs[last][row],
                                                   ws.acts[last + 1][row]);
    for (std::size_t l = last; l-- > 0;) {
        const int d_in = spec.layer_sizes[l + 1];
        const int d_out = spec.layer_sizes[l + 2];
        const double* weights = w.data() + model.weight_offset(l + 1);
        for (int c = 0; c < d_in; ++c) {
            double sum = 0.0;
            for (int row = 0; row < d_out; ++row)
                sum += weights[static_cast<std::size_t>(row) * d_in + c] *
                       ws.deltas[l + 1][row];
            ws.deltas[l][c] = sum * activate_derivative(spec.activations[l],
                                                        ws.zs[l][c],
                                                        ws.acts[l + 1][c]);
        }
    }
}

void accumulate_gradient(const MlpModel& model, const Workspace& ws,
                         double scale, std::vector<double>& grad) {
    const MlpSpec& spec = model.spec();
    for (std::size_t l = 0; l < spec.layer_count(); ++l) {
        const int d_in = spec.layer_sizes[l];
        const int d_out = spec.layer_sizes[l + 1];
        double* gw = grad.data() + model.weight_offset(l);
        double* gb = grad.data() + model.bias_offset(l);
        const double* in = ws.acts[l].data();
        for (int row = 0; row < d_out; ++row) {
            const double d = ws.deltas[l][row] * scale;
            double* gr = gw + static_cast<std::size_t>(row) * d_in;
            for (int c = 0; c < d_in; ++c) gr[c] += d * in[c];
            gb[row] += d;
        }
    }
}

}  // namespace

MlpSpec dense_spec(std::vector<int> sizes, Activation hidden,
                   Activation output) {
    if (sizes.size() < 2) throw ConfigError("dense_spec: need >= 2 layers");
    for (int d : sizes)
        if (d < 1) throw ConfigError("dense_spec: layer sizes must be >= 1");
    MlpSpec spec;
    spec.layer_sizes = std::move(sizes);
    spec.activations.assign(spec.layer_sizes.size() - 1, hidden);
    spec.activations.back() = output;
    return spec;
}

MlpModel::MlpModel(MlpSpec spec) : spec_(std::move(spec)) {
    if (spec_.layer_sizes.size() < 2 ||
        spec_.activations.size() != spec_.layer_sizes.size() - 1)
        throw ConfigError("MlpModel: inconsistent layer shape");
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < spec_.layer_sizes.size(); ++l) {
        weight_offsets_.push_back(total);
        total += static_cast<std::size_t>(spec_.layer_sizes[l]) *
                 spec_.layer_sizes[l + 1];
        bias_offsets_.push_back(total);
        total += spec_.layer_sizes[l + 1];
    }
    params_.assign(total, 0.0);
}

MlpModel MlpModel::random_init(const MlpSpec& spec, CounterRng& rng) {
    MlpModel model(spec);
    for (std::size_t l = 0; l < model.spec_.layer_count(); ++l) {
        const double bound =
            1.0 / std::sqrt(static_cast<double>(model.spec_.layer_sizes[l]));
        const std::size_t w_count =
            static_cast<std::size_t>(model.spec_.layer_sizes[l]) *
            model.spec_.layer_sizes[l + 1];
        double* w = model.params_.data() + model.weight_offsets_[l];
        for (std::size_t i = 0; i < w_count; ++i)
            w[i] = rng.uniform(-bound, bound);
        double* b = model.params_.data() + model.bias_offsets_[l];
        for (int i = 0; i < model.spec_.layer_sizes[l + 1]; ++i)
            b[i] = rng.uniform(-bound, bound);
    }
    return model;
}

std::size_t MlpModel::weight_offset(std::size_t layer) const {
    return weight_offsets_[layer];
}

std::size_t MlpModel::bias_offset(std::size_t layer) const {
    return bias_offsets_[layer];
}

std::vector<double> MlpModel::forward(double x) const {
    Workspace ws(spec_);
    forward_pass(*this, x, ws);
    return ws.acts.back();
}

std::pair<double, GradientVector> loss_and_grad(
    const MlpModel& model,
    const std::vector<std::pair<double, double>>& batch, Loss loss) {
    if (batch.empty()) throw ConfigError("loss_and_grad: empty batch");
    if (model.spec().layer_sizes.back() != 1)
        throw ConfigError("loss_and_grad: scalar output head required");

    Workspace ws(model.spec());
    GradientVector grad;
    grad.values.assign(model.param_count(), 0.0);
    KahanSum total;
    const double inv_m = 1.0 / static_cast<double>(batch.size());
    std::vector<double> out_grad(1);

    for (const auto& [x, y] : batch) {
        forward_pass(model, x, ws);
        const double eta = ws.acts.back()[0];
        if (loss == Loss::Mse) {
            const double diff = eta - y;
            total.add(diff * diff);
            out_grad[0] = 2.0 * diff;
        } else {
            const double z = y * eta;
            total.add(logistic_loss(z));
            out_grad[0] = y * logistic_loss_derivative(z);
        }
        backward_pass(model, ws, out_grad);
        accumulate_gradient(model, ws, inv_m, grad.values);
    }
    return {total.value() * inv_m, std::move(grad)};
}

AdamState make_adam_state(const MlpModel& model) {
    AdamState state;
    state.m.assign(model.param_count(), 0.0);
    state.v.assign(model.param_count(), 0.0);
    return state;
}

void adam_step(AdamState& state, MlpModel& model, const GradientVector& grad,
               double lr) {
    if (grad.values.size() != model.param_count())
        throw ConfigError("adam_step: gradient length mismatch");
    ++state.step;
    const double c1 = 1.0 - std::pow(state.beta1, state.step);
    const double c2 = 1.0 - std::pow(state.beta2, state.step);
    auto& w = model.params();
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double g = grad.values[i];
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
        const double m_hat = state.m[i] / c1;
        const double v_hat = state.v[i] / c2;
        w[i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
}

namespace {

/// Per-sample features the pair kernel needs: layer inputs, deltas for the
/// plain network output, the logistic symmetric factor, and the diagonal
/// kernel value.
struct ProbeFeatures {
    std::vector<std::vector<double>> layer_inputs;  // acts[0..L-1]
    std::vector<std::vector<double>> deltas;        // deltas[0..L-1]
    double alpha = 0.0;
    double k_diag = 0.0;
};

ProbeFeatures extract_features(const MlpModel& model, double x,
                               Workspace& ws) {
    forward_pass(model, x, ws);
    backward_pass(model, ws, {1.0});
    ProbeFeatures f;
    f.layer_inputs.assign(ws.acts.begin(), ws.acts.end() - 1);
    f.deltas = ws.deltas;
    const double eta = ws.acts.back()[0];
    f.alpha = 0.5 * (logistic_loss_derivative(eta) +
                     logistic_loss_derivative(-eta));
    double k = 0.0;
    for (std::size_t l = 0; l < f.deltas.size(); ++l) {
        double dd = 0.0, aa = 0.0;
        for (double d : f.deltas[l]) dd += d * d;
        for (double a : f.layer_inputs[l]) aa += a * a;
        k += dd * (aa + 1.0);
    }
    f.k_diag = k;
    return f;
}

/// <grad eta(x), grad eta(x')> factored over layers:
/// sum_l <delta_l, delta_l'> (<a_(l-1), a_(l-1)'> + 1).
double pair_kernel(const ProbeFeatures& fx, const ProbeFeatures& fy) {
    double k = 0.0;
    for (std::size_t l = 0; l < fx.deltas.size(); ++l) {
        const auto& dx = fx.deltas[l];
        const auto& dy = fy.deltas[l];
        double dd = 0.0;
        for (std::size_t i = 0; i < dx.size(); ++i) dd += dx[i] * dy[i];
        const auto& ax = fx.layer_inputs[l];
        const auto& ay = fy.layer_inputs[l];
        double aa = 0.0;
        for (std::size_t i = 0; i < ax.size(); ++i) aa += ax[i] * ay[i];
        k += dd * (aa + 1.0);
    }
    return k;
}

std::vector<double> centered_bit_gram_values(const PrimeField& field,
                                             unsigned r) {
    const auto table =
        spectral::make_target(field, spectral::TargetKind::CenteredBitR, r);
    return gram::gram_f(table).f_values;
}

}  // namespace

ProbeSample probe_sample_kernel(const PrimeField& field, unsigned r,
                                const MlpModel& model) {
    modcore::check_bit_index(field, r);
    const u64 p = field.p();
    const std::size_t n = p - 1;
    const std::vector<double> f_tilde = centered_bit_gram_values(field, r);

    std::vector<ProbeFeatures> features(n);
    parallel_for_chunks(n, 64, [&](std::size_t, std::size_t lo,
                                   std::size_t hi) {
        Workspace ws(model.spec());
        for (std::size_t i = lo; i < hi; ++i)
            features[i] =
                extract_features(model, static_cast<double>(i + 1), ws);
    });

    KahanSum g_sum;
    for (const auto& f : features) g_sum.add(f.k_diag);
    const double g = g_sum.value() / static_cast<double>(n);

    std::vector<u64> inverse(p, 0);
    for (u64 x = 1; x < p; ++x) inverse[x] = field.inv(x);

    // v = (1/n^2) sum_{x,x'} alpha(x) alpha(x') K(x,x') f~(x'/x); the matrix
    // is symmetric (f~(y) = f~(1/y)), so rows sweep x' >= x.
    std::vector<double> row_sums(n, 0.0);
    parallel_for_chunks(n, 16, [&](std::size_t, std::size_t lo,
                                   std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const u64 x = i + 1;
            const u64 step = inverse[x];
            KahanSum row;
            row.add(features[i].alpha * features[i].alpha *
                    features[i].k_diag * f_tilde[0]);
            u64 m = step * (x + 1) % p;  // (x')/x for x' = x+1, then advance
            for (std::size_t j = i + 1; j < n; ++j) {
                const double k = pair_kernel(features[i], features[j]);
                row.add(2.0 * features[i].alpha * features[j].alpha * k *
                        f_tilde[m - 1]);
                m += step;
                if (m >= p) m -= p;
            }
            row_sums[i] = row.value();
        }
    });

    KahanSum v_sum;
    for (double s : row_sums) v_sum.add(s);
    const double inv_n = 1.0 / static_cast<double>(n);
    return ProbeSample{v_sum.value() * inv_n * inv_n, g};
}

ProbeReference probe_sample_reference(const PrimeField& field, unsigned r,
                                      const MlpModel& model) {
    modcore::check_bit_index(field, r);
    const u64 p = field.p();
    const std::size_t n = p - 1;
    const std::size_t s = model.param_count();

    // Full-batch loss gradient for every multiplier a, in chunked blocks so
    // the reduction order is fixed.
    std::vector<std::vector<double>> grads(n);
    Workspace ws(model.spec());
    for (u64 a = 1; a < p; ++a) {
        std::vector<std::pair<double, double>> batch;
        batch.reserve(n);
        u64 m = a;
        for (u64 x = 1; x < p; ++x) {
            batch.emplace_back(static_cast<double>(x),
                               modcore::bit_r(m, r) ? -1.0 : 1.0);
            m += a;
            if (m >= p) m -= p;
        }
        grads[a - 1] = loss_and_grad(model, batch, Loss::Logistic).second.values;
    }

    const double inv_n = 1.0 / static_cast<double>(n);
    constexpr std::size_t kChunk = 1024;

    // Chunked tree reduction of the mean gradient.
    std::vector<double> mean(s, 0.0);
    for (std::size_t base = 0; base < n; base += kChunk) {
        std::vector<double> partial(s, 0.0);
        for (std::size_t a = base; a < std::min(n, base + kChunk); ++a)
            for (std::size_t i = 0; i < s; ++i) partial[i] += grads[a][i];
        for (std::size_t i = 0; i < s; ++i) mean[i] += partial[i];
    }
    for (double& v : mean) v *= inv_n;

    KahanSum deviation, raw_second;
    for (std::size_t a = 0; a < n; ++a) {
        KahanSum dev_a, raw_a;
        for (std::size_t i = 0; i < s; ++i) {
            const double d = grads[a][i] - mean[i];
            dev_a.add(d * d);
            raw_a.add(grads[a][i] * grads[a][i]);
        }
        deviation.add(dev_a.value());
        raw_second.add(raw_a.value());
    }
    KahanSum mean_norm;
    for (double v : mean) mean_norm.add(v * v);

    KahanSum g_sum;
    for (u64 x = 1; x < p; ++x) {
        forward_pass(model, static_cast<double>(x), ws);
        backward_pass(model, ws, {1.0});
        ProbeFeatures f;
        f.layer_inputs.assign(ws.acts.begin(), ws.acts.end() - 1);
        f.deltas = ws.deltas;
        double k = 0.0;
        for (std::size_t l = 0; l < f.deltas.size(); ++l) {
            double dd = 0.0, aa = 0.0;
            for (double d : f.deltas[l]) dd += d * d;
            for (double a : f.layer_inputs[l]) aa += a * a;
            k += dd * (aa + 1.0);
        }
        g_sum.add(k);
    }

    return ProbeReference{deviation.value() * inv_n,
                          raw_second.value() * inv_n - mean_norm.value(),
                          g_sum.value() * inv_n};
}

ProbeReport probe_variance(const PrimeField& field, unsigned r,
                           const MlpSpec& arch, int n_inits, u64 seed,
                           u64 p_cap) {
    if (field.p() > p_cap)
        throw SizeLimitError("probe_variance: p exceeds the configured cap");
    if (n_inits < 1) throw ConfigError("probe_variance: need >= 1 inits");
    if (arch.layer_sizes.front() != 1 || arch.layer_sizes.back() != 1)
        throw ConfigError("probe_variance: architecture must be 1 -> ... -> 1");

    ProbeReport report;
    report.p = field.p();
    report.r = r;

    KahanSum v_mean, g_mean, ratio_mean;
    for (int i = 0; i < n_inits; ++i) {
        const u64 stream = static_cast<u64>(i);
        report.seeds.push_back(CounterRng::mix(seed ^ CounterRng::mix(stream)));
        CounterRng rng(seed, stream);
        const MlpModel model = MlpModel::random_init(arch, rng);
        const ProbeSample sample = probe_sample_kernel(field, r, model);
        v_mean.add(sample.v);
        g_mean.add(sample.g);
        ratio_mean.add(sample.v / sample.g);
    }
    const double inv = 1.0 / static_cast<double>(n_inits);
    report.v = v_mean.value() * inv;
    report.g = g_mean.value() * inv;
    const double ratio = ratio_mean.value() * inv;
    const double p = static_cast<double>(field.p());
    report.ratio_sqrt = ratio * std::sqrt(p);
    report.ratio_lin = ratio * p;
    return report;
}

namespace {

double fractional_part(double u) { return u - std::floor(u); }

struct Dataset {
    std::vector<std::pair<double, double>> train;
    std::vector<std::pair<double, double>> test;
    u64 drawn = 0;
};

Dataset make_wave_data(const TrainConfig& config, std::size_t m) {
    if (config.wave_a_max < 1)
        throw ConfigError("train: wave frequency bound must be >= 1");
    Dataset data;
    CounterRng rng(config.seed, 0x57615645);  // data stream
    data.drawn = rng.below(config.wave_a_max);
    const double a = static_cast<double>(data.drawn);
    data.train.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double x = rng.uniform(-100.0, 100.0);
        data.train.emplace_back(x, fractional_part(a * x));
    }
    return data;
}

Dataset make_bit_data(const TrainConfig& config, std::size_t m) {
    const PrimeField field(config.p);
    modcore::check_bit_index(field, config.r);
    if (config.train_fraction <= 0.0 || config.train_fraction >= 1.0)
        throw ConfigError("train: split fraction must be in (0,1)");
    Dataset data;
    CounterRng rng(config.seed, 0x42495453);  // data stream
    const u64 a = rng.below(field.p() - 1) + 1;
    data.drawn = a;
    std::vector<std::pair<double, double>> all;
    all.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const u64 x = rng.below(field.p() - 1) + 1;
        const int bit = modcore::bit_r(field.mul(a, x), config.r);
        all.emplace_back(static_cast<double>(x), bit ? -1.0 : 1.0);
    }
    const std::size_t n_train =
        static_cast<std::size_t>(config.train_fraction * m);
    data.train.assign(all.begin(), all.begin() + n_train);
    data.test.assign(all.begin() + n_train, all.end());
    return data;
}

double test_accuracy(const MlpModel& model,
                     const std::vector<std::pair<double, double>>& test,
                     Workspace& ws) {
    if (test.empty()) return 0.0;
    std::size_t hits = 0;
    for (const auto& [x, y] : test) {
        forward_pass(model, x, ws);
        const double pred = ws.acts.back()[0] >= 0.0 ? 1.0 : -1.0;
        if (pred == y) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(test.size());
}

}  // namespace

TrainTrace train(Task task, const TrainConfig& config) {
    const bool wave = task == Task::WaveRegression;
    const std::size_t m =
        config.sample_count ? config.sample_count : (wave ? 1000 : 5000);
    const int epochs = config.epochs ? config.epochs : (wave ? 100 : 2000);
    const std::size_t batch =
        config.batch_size ? config.batch_size : (wave ? 1000 : 100);
    if (batch < 1) throw ConfigError("train: batch size must be >= 1");

    std::vector<int> sizes{1};
    if (!config.hidden.empty())
        sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
    else if (wave)
        sizes.insert(sizes.end(), {64, 128});
    else
        sizes.insert(sizes.end(), {128, 128});
    sizes.push_back(1);
    const MlpSpec spec =
        dense_spec(sizes, wave ? Activation::ReLU : Activation::Sigmoid,
                   Activation::Identity);
    const Loss loss = wave ? Loss::Mse : Loss::Logistic;

    Dataset data = wave ? make_wave_data(config, m) : make_bit_data(config, m);
    if (data.train.size() < batch)
        throw ConfigError("train: batch larger than the training split");

    CounterRng init_rng(config.seed, 0x494E4954);
    MlpModel model = MlpModel::random_init(spec, init_rng);
    AdamState adam = make_adam_state(model);
    Workspace ws(spec);
    CounterRng shuffle_rng(config.seed, 0x53485546);

    TrainTrace trace;
    trace.drawn_parameter = data.drawn;
    std::vector<std::size_t> order(data.train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<std::pair<double, double>> minibatch(batch);

    for (int epoch = 0; epoch < epochs; ++epoch) {
        // Fisher-Yates with the run's own stream.
        for (std::size_t i = order.size(); i > 1; --i) {
            const std::size_t j = shuffle_rng.below(i);
            std::swap(order[i - 1], order[j]);
        }
        KahanSum epoch_loss;
        std::size_t n_batches = 0;
        for (std::size_t base = 0; base + batch <= order.size();
             base += batch) {
            for (std::size_t k = 0; k < batch; ++k)
                minibatch[k] = data.train[order[base + k]];
            auto [value, grad] = loss_and_grad(model, minibatch, loss);
            adam_step(adam, model, grad, config.lr);
            epoch_loss.add(value);
            ++n_batches;
        }
        trace.epoch_loss.push_back(epoch_loss.value() /
                                   static_cast<double>(n_batches));
        if (!wave)
            trace.epoch_test_acc.push_back(
                test_accuracy(model, data.test, ws));
    }
    trace.final_loss = trace.epoch_loss.back();
    trace.final_test_acc =
        trace.epoch_test_acc.empty() ? 0.0 : trace.epoch_test_acc.back();
    return trace;
}

}  // namespace barrenlab::nn
