#include "tsgc/cnn.hpp"

#include "tsgc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace tsgc {

LayerDims derive_dims(const ModelSpec& spec) {
    if (spec.input_len < 1 || spec.in_channels < 1 || spec.factor < 1 ||
        spec.kernel1 < 1 || spec.kernel2 < 1 || spec.pool1 < 1 || spec.pool2 < 1) {
        throw std::invalid_argument("model spec: all fields must be positive");
    }
    LayerDims d;
    d.c1 = spec.in_channels * spec.factor;
    d.c2 = d.c1 * spec.factor;
    d.l1 = spec.input_len - spec.kernel1 + 1;
    if (d.l1 < 1) {
        throw std::invalid_argument("architecture infeasible at conv1: length " +
                                    std::to_string(d.l1));
    }
    d.p1 = d.l1 / spec.pool1;
    if (d.p1 < 1) {
        throw std::invalid_argument("architecture infeasible at pool1: length " +
                                    std::to_string(d.p1));
    }
    d.l2 = d.p1 - spec.kernel2 + 1;
    if (d.l2 < 1) {
        throw std::invalid_argument("architecture infeasible at conv2: length " +
                                    std::to_string(d.l2));
    }
    d.p2 = d.l2 / spec.pool2;
    if (d.p2 < 1) {
        throw std::invalid_argument("architecture infeasible at pool2: length " +
                                    std::to_string(d.p2));
    }
    d.flat = d.c2 * d.p2;
    return d;
}

TrainedModel build(const ModelSpec& spec, std::uint64_t seed) {
    const LayerDims d = derive_dims(spec);
    TrainedModel m;
    m.spec = spec;
    Rng rng(seed);
    const auto fill = [&](std::vector<double>& w, std::size_t count, int fan_in) {
        const double bound = std::sqrt(1.0 / static_cast<double>(fan_in));
        w.resize(count);
        for (double& v : w) {
            v = rng.uniform(-bound, bound);
        }
    };
    fill(m.w1, static_cast<std::size_t>(d.c1) * spec.in_channels * spec.kernel1,
         spec.in_channels * spec.kernel1);
    fill(m.b1, d.c1, spec.in_channels * spec.kernel1);
    fill(m.w2, static_cast<std::size_t>(d.c2) * d.c1 * spec.kernel2, d.c1 * spec.kernel2);
    fill(m.b2, d.c2, d.c1 * spec.kernel2);
    fill(m.wf, d.flat, d.flat);
    const double bound = std::sqrt(1.0 / static_cast<double>(d.flat));
    m.bf = rng.uniform(-bound, bound);
    return m;
}

namespace {

// out (count, oc, out_len) = valid cross-correlation of in (count, ic, in_len)
void conv1d(std::span<const double> in, int count, int in_ch, int in_len,
            std::span<const double> w, std::span<const double> b, int out_ch, int kernel,
            std::vector<double>& out) {
    const int out_len = in_len - kernel + 1;
    out.assign(static_cast<std::size_t>(count) * out_ch * out_len, 0.0);
    for (int s = 0; s < count; ++s) {
        for (int oc = 0; oc < out_ch; ++oc) {
            double* o = &out[(static_cast<std::size_t>(s) * out_ch + oc) * out_len];
            for (int t = 0; t < out_len; ++t) {
                o[t] = b[oc];
            }
            for (int ic = 0; ic < in_ch; ++ic) {
                const double* x = &in[(static_cast<std::size_t>(s) * in_ch + ic) * in_len];
                const double* wk = &w[(static_cast<std::size_t>(oc) * in_ch + ic) * kernel];
                for (int k = 0; k < kernel; ++k) {
                    const double wv = wk[k];
                    for (int t = 0; t < out_len; ++t) {
                        o[t] += wv * x[t + k];
                    }
                }
            }
        }
    }
}

void relu(const std::vector<double>& z, std::vector<double>& a) {
    a.resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        a[i] = z[i] > 0.0 ? z[i] : 0.0;
    }
}

// non-overlapping max pooling, remainder dropped; argmax takes the lowest
// index on ties
void maxpool(const std::vector<double>& in, int rows, int in_len, int pool,
             std::vector<double>& out, std::vector<int>& amax) {
    const int out_len = in_len / pool;
    out.assign(static_cast<std::size_t>(rows) * out_len, 0.0);
    amax.assign(static_cast<std::size_t>(rows) * out_len, 0);
    for (int r = 0; r < rows; ++r) {
        const double* x = &in[static_cast<std::size_t>(r) * in_len];
        for (int t = 0; t < out_len; ++t) {
            int best = t * pool;
            double best_v = x[best];
            for (int u = t * pool + 1; u < (t + 1) * pool; ++u) {
                if (x[u] > best_v) {
                    best_v = x[u];
                    best = u;
                }
            }
            out[static_cast<std::size_t>(r) * out_len + t] = best_v;
            amax[static_cast<std::size_t>(r) * out_len + t] = best;
        }
    }
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

constexpr double kProbClamp = 1e-7;

} // namespace

std::vector<double> forward(const TrainedModel& model, const Batch& batch,
                            ForwardCache* cache) {
    const ModelSpec& spec = model.spec;
    const LayerDims d = derive_dims(spec);
    if (batch.channels != spec.in_channels || batch.len != spec.input_len ||
        batch.x.size() != static_cast<std::size_t>(batch.count) * batch.channels * batch.len) {
        throw std::invalid_argument("forward: batch shape does not match the model spec");
    }
    ForwardCache local;
    ForwardCache& c = cache ? *cache : local;
    c.count = batch.count;

    conv1d(batch.x, batch.count, spec.in_channels, spec.input_len, model.w1, model.b1,
           d.c1, spec.kernel1, c.z1);
    relu(c.z1, c.a1);
    maxpool(c.a1, batch.count * d.c1, d.l1, spec.pool1, c.pool1, c.amax1);
    conv1d(c.pool1, batch.count, d.c1, d.p1, model.w2, model.b2, d.c2, spec.kernel2, c.z2);
    relu(c.z2, c.a2);
    maxpool(c.a2, batch.count * d.c2, d.l2, spec.pool2, c.pool2, c.amax2);

    c.logits.resize(batch.count);
    c.probs.resize(batch.count);
    for (int s = 0; s < batch.count; ++s) {
        const double* f = &c.pool2[static_cast<std::size_t>(s) * d.flat];
        double z = model.bf;
        for (int i = 0; i < d.flat; ++i) {
            z += model.wf[i] * f[i];
        }
        c.logits[s] = z;
        c.probs[s] = sigmoid(z);
    }
    if (cache) {
        cache->x = batch.x;
    }
    return c.probs;
}

double bce_loss(std::span<const double> probs, std::span<const double> labels) {
    if (probs.size() != labels.size() || probs.empty()) {
        throw std::invalid_argument("bce_loss: mismatched or empty inputs");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double p = std::clamp(probs[i], kProbClamp, 1.0 - kProbClamp);
        total += -(labels[i] * std::log(p) + (1.0 - labels[i]) * std::log(1.0 - p));
    }
    return total / static_cast<double>(probs.size());
}

Gradients backward(const TrainedModel& model, const ForwardCache& cache,
                   std::span<const double> labels) {
    const ModelSpec& spec = model.spec;
    const LayerDims d = derive_dims(spec);
    const int count = cache.count;
    if (labels.size() != static_cast<std::size_t>(count)) {
        throw std::invalid_argument("backward: label count does not match the cache");
    }

    Gradients g;
    g.w1.assign(model.w1.size(), 0.0);
    g.b1.assign(model.b1.size(), 0.0);
    g.w2.assign(model.w2.size(), 0.0);
    g.b2.assign(model.b2.size(), 0.0);
    g.wf.assign(model.wf.size(), 0.0);

    // d(mean BCE)/d(logit) = (p - y) / count
    std::vector<double> dlogit(count);
    for (int s = 0; s < count; ++s) {
        dlogit[s] = (cache.probs[s] - labels[s]) / static_cast<double>(count);
    }

    std::vector<double> dpool2(static_cast<std::size_t>(count) * d.flat, 0.0);
    for (int s = 0; s < count; ++s) {
        const double* f = &cache.pool2[static_cast<std::size_t>(s) * d.flat];
        for (int i = 0; i < d.flat; ++i) {
            g.wf[i] += dlogit[s] * f[i];
            dpool2[static_cast<std::size_t>(s) * d.flat + i] = dlogit[s] * model.wf[i];
        }
        g.bf += dlogit[s];
    }

    // pool2 -> relu2 -> z2
    std::vector<double> dz2(cache.z2.size(), 0.0);
    for (std::size_t rt = 0; rt < dpool2.size(); ++rt) {
        const std::size_t row = rt / d.p2; // (s, c2) row
        const std::size_t idx = row * d.l2 + cache.amax2[rt];
        if (cache.z2[idx] > 0.0) {
            dz2[idx] += dpool2[rt];
        }
    }

    // conv2 parameter and input gradients
    std::vector<double> dpool1(static_cast<std::size_t>(count) * d.c1 * d.p1, 0.0);
    for (int s = 0; s < count; ++s) {
        for (int oc = 0; oc < d.c2; ++oc) {
            const double* dz = &dz2[(static_cast<std::size_t>(s) * d.c2 + oc) * d.l2];
            double bacc = 0.0;
            for (int t = 0; t < d.l2; ++t) {
                bacc += dz[t];
            }
            g.b2[oc] += bacc;
            for (int ic = 0; ic < d.c1; ++ic) {
                const double* x = &cache.pool1[(static_cast<std::size_t>(s) * d.c1 + ic) * d.p1];
                double* dx = &dpool1[(static_cast<std::size_t>(s) * d.c1 + ic) * d.p1];
                double* gw = &g.w2[(static_cast<std::size_t>(oc) * d.c1 + ic) * spec.kernel2];
                const double* w = &model.w2[(static_cast<std::size_t>(oc) * d.c1 + ic) * spec.kernel2];
                for (int k = 0; k < spec.kernel2; ++k) {
                    double acc = 0.0;
                    for (int t = 0; t < d.l2; ++t) {
                        acc += dz[t] * x[t + k];
                        dx[t + k] += dz[t] * w[k];
                    }
                    gw[k] += acc;
                }
            }
        }
    }

    // pool1 -> relu1 -> z1
    std::vector<double> dz1(cache.z1.size(), 0.0);
    for (std::size_t rt = 0; rt < dpool1.size(); ++rt) {
        const std::size_t row = rt / d.p1;
        const std::size_t idx = row * d.l1 + cache.amax1[rt];
        if (cache.z1[idx] > 0.0) {
            dz1[idx] += dpool1[rt];
        }
    }

    // conv1 parameter gradients
    for (int s = 0; s < count; ++s) {
        for (int oc = 0; oc < d.c1; ++oc) {
            const double* dz = &dz1[(static_cast<std::size_t>(s) * d.c1 + oc) * d.l1];
            double bacc = 0.0;
            for (int t = 0; t < d.l1; ++t) {
                bacc += dz[t];
            }
            g.b1[oc] += bacc;
            for (int ic = 0; ic < spec.in_channels; ++ic) {
                const double* x =
                    &cache.x[(static_cast<std::size_t>(s) * spec.in_channels + ic) * spec.input_len];
                double* gw = &g.w1[(static_cast<std::size_t>(oc) * spec.in_channels + ic) * spec.kernel1];
                for (int k = 0; k < spec.kernel1; ++k) {
                    double acc = 0.0;
                    for (int t = 0; t < d.l1; ++t) {
                        acc += dz[t] * x[t + k];
                    }
                    gw[k] += acc;
                }
            }
        }
    }
    return g;
}

namespace {

struct AdamState {
    std::vector<double> m, v;
    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

void adam_step(std::vector<double>& w, const std::vector<double>& grad, AdamState& st,
               const AdamParams& p, double bias1, double bias2) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        st.m[i] = p.beta1 * st.m[i] + (1.0 - p.beta1) * grad[i];
        st.v[i] = p.beta2 * st.v[i] + (1.0 - p.beta2) * grad[i] * grad[i];
        const double mhat = st.m[i] / bias1;
        const double vhat = st.v[i] / bias2;
        w[i] -= p.lr * mhat / (std::sqrt(vhat) + p.eps);
    }
}

Batch gather(const Dataset& data, std::span<const int> idx) {
    Batch b;
    b.count = static_cast<int>(idx.size());
    b.channels = data.channels;
    b.len = data.len;
    b.x.reserve(static_cast<std::size_t>(b.count) * data.channels * data.len);
    b.y.reserve(idx.size());
    for (int i : idx) {
        b.x.insert(b.x.end(), data.xs[i].begin(), data.xs[i].end());
        b.y.push_back(static_cast<double>(data.labels[i]));
    }
    return b;
}

} // namespace

TrainResult train(TrainedModel model, const Dataset& data, int epochs,
                  const AdamParams& params, std::uint64_t seed) {
    if (data.size() == 0) {
        throw std::invalid_argument("train: empty dataset");
    }
    for (int y : data.labels) {
        if (y != 0 && y != 1) {
            throw std::invalid_argument("train: labels must be binary");
        }
    }

    AdamState s_w1(model.w1.size()), s_b1(model.b1.size());
    AdamState s_w2(model.w2.size()), s_b2(model.b2.size());
    AdamState s_wf(model.wf.size()), s_bf(1);
    long step = 0;

    Rng rng(seed);
    std::vector<int> order(data.size());
    std::iota(order.begin(), order.end(), 0);

    TrainResult result;
    result.epoch_loss.reserve(epochs);

    for (int epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order);
        double loss_sum = 0.0;
        int batch_no = 0;
        for (int start = 0; start < data.size(); start += params.batch_size, ++batch_no) {
            const int stop = std::min(start + params.batch_size, data.size());
            const Batch batch = gather(data, std::span<const int>(order).subspan(start, stop - start));
            ForwardCache cache;
            forward(model, batch, &cache);
            const double loss = bce_loss(cache.probs, batch.y);
            if (!std::isfinite(loss)) {
                throw std::runtime_error("train: loss diverged at epoch " +
                                         std::to_string(epoch) + ", batch " +
                                         std::to_string(batch_no));
            }
            loss_sum += loss * batch.count;
            const Gradients g = backward(model, cache, batch.y);

            ++step;
            const double bias1 = 1.0 - std::pow(params.beta1, static_cast<double>(step));
            const double bias2 = 1.0 - std::pow(params.beta2, static_cast<double>(step));
            adam_step(model.w1, g.w1, s_w1, params, bias1, bias2);
            adam_step(model.b1, g.b1, s_b1, params, bias1, bias2);
            adam_step(model.w2, g.w2, s_w2, params, bias1, bias2);
            adam_step(model.b2, g.b2, s_b2, params, bias1, bias2);
            adam_step(model.wf, g.wf, s_wf, params, bias1, bias2);
            std::vector<double> bfv{model.bf}, gbf{g.bf};
            adam_step(bfv, gbf, s_bf, params, bias1, bias2);
            model.bf = bfv[0];
        }
        result.epoch_loss.push_back(loss_sum / data.size());
    }
    result.model = std::move(model);
    return result;
}

double evaluate(const TrainedModel& model, const Dataset& data) {
    if (data.size() == 0) {
        throw std::invalid_argument("evaluate: undefined metric on empty dataset");
    }
    int correct = 0;
    constexpr int kEvalBatch = 64;
    std::vector<int> idx;
    for (int start = 0; start < data.size(); start += kEvalBatch) {
        const int stop = std::min(start + kEvalBatch, data.size());
        idx.resize(stop - start);
        std::iota(idx.begin(), idx.end(), start);
        const Batch batch = gather(data, idx);
        const std::vector<double> probs = forward(model, batch);
        for (int s = 0; s < batch.count; ++s) {
            const int predicted = probs[s] >= 0.5 ? 1 : 0; // tie counts as class 1
            if (predicted == data.labels[start + s]) {
                ++correct;
            }
        }
    }
    return static_cast<double>(correct) / data.size();
}

// ---------------------------------------------------------------------------
// checkpoint io

namespace {

constexpr char kMagic[4] = {'T', 'S', 'G', 'C'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::ifstream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

void write_tensor(std::ofstream& out, const std::vector<double>& t) {
    out.write(reinterpret_cast<const char*>(t.data()),
              static_cast<std::streamsize>(t.size() * sizeof(double)));
}

void read_tensor(std::ifstream& in, std::vector<double>& t, std::size_t count) {
    t.resize(count);
    in.read(reinterpret_cast<char*>(t.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
}

} // namespace

void save_checkpoint(const TrainedModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write checkpoint: " + path);
    }
    out.write(kMagic, 4);
    write_u32(out, kVersion);
    const ModelSpec& s = model.spec;
    for (int field : {s.input_len, s.in_channels, s.factor, s.kernel1, s.kernel2, s.pool1, s.pool2}) {
        write_u32(out, static_cast<std::uint32_t>(field));
    }
    write_tensor(out, model.w1);
    write_tensor(out, model.b1);
    write_tensor(out, model.w2);
    write_tensor(out, model.b2);
    write_tensor(out, model.wf);
    out.write(reinterpret_cast<const char*>(&model.bf), sizeof(double));
    if (!out) {
        throw std::runtime_error("short write on checkpoint: " + path);
    }
}

TrainedModel load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read checkpoint: " + path);
    }
    char magic[4] = {};
    in.read(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error("not a model checkpoint: " + path);
    }
    const std::uint32_t version = read_u32(in);
    if (version != kVersion) {
        throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
    }
    TrainedModel m;
    m.spec.input_len = static_cast<int>(read_u32(in));
    m.spec.in_channels = static_cast<int>(read_u32(in));
    m.spec.factor = static_cast<int>(read_u32(in));
    m.spec.kernel1 = static_cast<int>(read_u32(in));
    m.spec.kernel2 = static_cast<int>(read_u32(in));
    m.spec.pool1 = static_cast<int>(read_u32(in));
    m.spec.pool2 = static_cast<int>(read_u32(in));
    const LayerDims d = derive_dims(m.spec);
    read_tensor(in, m.w1, static_cast<std::size_t>(d.c1) * m.spec.in_channels * m.spec.kernel1);
    read_tensor(in, m.b1, d.c1);
    read_tensor(in, m.w2, static_cast<std::size_t>(d.c2) * d.c1 * m.spec.kernel2);
    read_tensor(in, m.b2, d.c2);
    read_tensor(in, m.wf, d.flat);
    in.read(reinterpret_cast<char*>(&m.bf), sizeof(double));
    if (!in) {
        throw std::runtime_error("truncated checkpoint: " + path);
    }
    return m;
}

// ---------------------------------------------------------------------------
// finite-difference gradient check

double gradcheck_max_rel_error(std::uint64_t seed, bool corrupt) {
    // small two-block net; pools 3/3 keep every layer length >= 1
    ModelSpec spec;
    spec.input_len = 20;
    spec.in_channels = 2;
    spec.factor = 2;
    spec.kernel1 = 3;
    spec.kernel2 = 2;
    spec.pool1 = 3;
    spec.pool2 = 3;

    TrainedModel model = build(spec, hash64(seed, "gradcheck-model"));
    Rng rng(hash64(seed, "gradcheck-data"));
    Batch batch;
    batch.count = 8;
    batch.channels = spec.in_channels;
    batch.len = spec.input_len;
    batch.x.resize(static_cast<std::size_t>(batch.count) * batch.channels * batch.len);
    for (double& v : batch.x) {
        v = rng.normal();
    }
    batch.y.resize(batch.count);
    for (double& y : batch.y) {
        y = rng.uniform() < 0.5 ? 0.0 : 1.0;
    }

    ForwardCache cache;
    forward(model, batch, &cache);
    Gradients g = backward(model, cache, batch.y);
    if (corrupt) {
        g.b1[0] += 0.05; // negative-control hook
    }

    const double h = 1e-4;
    const auto loss_at = [&]() {
        const std::vector<double> probs = forward(model, batch);
        return bce_loss(probs, batch.y);
    };
    double max_rel = 0.0;
    const auto check_group = [&](std::vector<double>& w, const std::vector<double>& grad) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double keep = w[i];
            w[i] = keep + h;
            const double up = loss_at();
            w[i] = keep - h;
            const double down = loss_at();
            w[i] = keep;
            const double numeric = (up - down) / (2.0 * h);
            // 0.01 scale floor so near-zero gradients are judged absolutely
            const double rel = std::abs(grad[i] - numeric) /
                               std::max({std::abs(grad[i]), std::abs(numeric), 0.01});
            max_rel = std::max(max_rel, rel);
        }
    };
    check_group(model.w1, g.w1);
    check_group(model.b1, g.b1);
    check_group(model.w2, g.w2);
    check_group(model.b2, g.b2);
    check_group(model.wf, g.wf);
    std::vector<double> bf{model.bf}, gbf{g.bf};
    model.bf = bf[0] + h;
    const double up = loss_at();
    model.bf = bf[0] - h;
    const double down = loss_at();
    model.bf = bf[0];
    const double numeric = (up - down) / (2.0 * h);
    max_rel = std::max(max_rel, std::abs(gbf[0] - numeric) /
                                    std::max({std::abs(gbf[0]), std::abs(numeric), 0.01}));
    return max_rel;
}

} // namespace tsgc
