#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "mme/errors.hpp"
#include "mme/kernels.hpp"
#include "mme/rng.hpp"
#include "mme/tensor.hpp"

// Conv-Attention pre-fusion. Three token-aligned modality streams (audio,
// global visual, temporal visual) are standardized to a common width by
// per-modality affine maps, then fused by two parallel branches:
//   - an attention branch that mean-pools the concatenated structure,
//     derives one softmax weight per modality and takes the weighted sum
//     of modality slices;
//   - a convolution branch that starts from the modality mean, applies a
//     stem 1-D convolution over the token axis and N residual blocks
//     x + swish(conv(x)).
// The branch outputs are added element-wise. Forward and the exact
// reverse-mode backward are templated on the scalar type so the gradient
// contract can be checked in double precision while training runs in
// float through the same code.

namespace mme::fusion {

struct PreFusionConfig {
    int64_t dim = 64;     // standardized channel width d
    int64_t tokens = 64;  // tokens per stream T
    int64_t blocks = 3;   // residual conv blocks N
    int64_t kernel_size = 3;
    static constexpr int64_t kModalities = 3;

    void validate() const {
        if (dim < 1 || tokens < 1 || blocks < 1) throw ConfigError("prefusion dims must be >= 1");
        if (kernel_size < 1 || kernel_size % 2 == 0)
            throw ConfigError("prefusion kernel_size must be odd and >= 1");
    }
};

template <typename T>
struct AffineT {
    TensorT<T> w;  // [out x in]
    TensorT<T> b;  // [out]

    int64_t in() const { return w.dim(1); }
    int64_t out() const { return w.dim(0); }
};

template <typename T>
struct Conv1dT {
    TensorT<T> w;  // [out_ch x in_ch x k]
    TensorT<T> b;  // [out_ch]

    int64_t out_ch() const { return w.dim(0); }
    int64_t in_ch() const { return w.dim(1); }
    int64_t k() const { return w.dim(2); }

    // Centered delta kernel: the convolution becomes an exact passthrough.
    void set_identity() {
        std::fill(w.data.begin(), w.data.end(), T(0));
        std::fill(b.data.begin(), b.data.end(), T(0));
        const int64_t c = k() / 2;
        for (int64_t o = 0; o < out_ch(); ++o) w.data[(o * in_ch() + o) * k() + c] = T(1);
    }
};

template <typename T>
struct PreFusionParamsT {
    std::array<AffineT<T>, 3> modality_mlps;  // audio, global, temporal -> d
    AffineT<T> attn_hidden;                   // d -> d, tanh
    AffineT<T> attn_out;                      // d -> M, softmax
    Conv1dT<T> conv_stem;
    std::vector<Conv1dT<T>> conv_blocks;
};

using PreFusionParams = PreFusionParamsT<float>;

// Token-axis concat F_d and modality-axis stack F_s share rows; one buffer
// holds both views. Slice m of F_s is rows m*T..(m+1)*T-1 of F_d.
template <typename T>
struct HybridStructuresT {
    TensorT<T> stacked;  // [B x M x T x d]
    int64_t batch = 0, tokens = 0, dim = 0;

    const T* slice(int64_t b, int64_t m) const {
        return stacked.data.data() + ((b * 3 + m) * tokens) * dim;
    }
    T* slice(int64_t b, int64_t m) { return stacked.data.data() + ((b * 3 + m) * tokens) * dim; }
    // F_d view for batch b: [M*T x d] row-major
    const T* concat(int64_t b) const { return stacked.data.data() + b * 3 * tokens * dim; }
};

template <typename T>
struct FusionOutputT {
    TensorT<T> f_attn;   // [B x T x d]
    TensorT<T> f_conv;   // [B x T x d]
    TensorT<T> u_f;      // [B x T x d]
    TensorT<T> weights;  // [B x M] softmax modality weights
};

using FusionOutput = FusionOutputT<float>;

// Forward activations retained for the backward pass.
template <typename T>
struct FusionCacheT {
    HybridStructuresT<T> hybrid;
    TensorT<T> pooled;      // [B x d] token mean of F_d
    TensorT<T> hidden;      // [B x d] tanh outputs
    TensorT<T> weights;     // [B x M]
    TensorT<T> f0;          // [B x T x d] modality mean
    TensorT<T> stem_out;    // [B x T x d]
    std::vector<TensorT<T>> block_pre;  // conv outputs z_k before swish
    std::vector<TensorT<T>> block_in;   // block inputs G_{k-1}
    std::array<TensorT<T>, 3> inputs;   // standardize inputs (for dW)
};

template <typename T>
struct PreFusionGradsT {
    PreFusionParamsT<T> params;             // same shapes, gradient values
    std::array<TensorT<T>, 3> inputs;       // d(loss)/d(stream)
};

namespace detail {

template <typename T>
inline T sigmoid(T x) {
    return T(1) / (T(1) + std::exp(-x));
}

// y[t][o] = b[o] + sum_{i,kk} w[o][i][kk] * x[t + kk - k/2][i], zero padded.
template <typename T>
void conv1d_forward(const Conv1dT<T>& conv, const T* x, T* y, int64_t tokens) {
    const int64_t oc = conv.out_ch(), ic = conv.in_ch(), k = conv.k(), c = k / 2;
    for (int64_t t = 0; t < tokens; ++t) {
        for (int64_t o = 0; o < oc; ++o) {
            T acc = conv.b.data[o];
            const T* wrow = conv.w.data.data() + o * ic * k;
            for (int64_t kk = 0; kk < k; ++kk) {
                const int64_t src = t + kk - c;
                if (src < 0 || src >= tokens) continue;
                const T* xrow = x + src * ic;
                const T* wk = wrow + kk;
                for (int64_t i = 0; i < ic; ++i) acc += wk[i * k] * xrow[i];
            }
            y[t * oc + o] = acc;
        }
    }
}

template <typename T>
void conv1d_backward(const Conv1dT<T>& conv, const T* x, const T* dy, T* dx,
                     Conv1dT<T>& grad, int64_t tokens) {
    const int64_t oc = conv.out_ch(), ic = conv.in_ch(), k = conv.k(), c = k / 2;
    for (int64_t t = 0; t < tokens; ++t) {
        const T* dyrow = dy + t * oc;
        for (int64_t o = 0; o < oc; ++o) {
            const T g = dyrow[o];
            grad.b.data[o] += g;
            T* wgrow = grad.w.data.data() + o * ic * k;
            const T* wrow = conv.w.data.data() + o * ic * k;
            for (int64_t kk = 0; kk < k; ++kk) {
                const int64_t src = t + kk - c;
                if (src < 0 || src >= tokens) continue;
                const T* xrow = x + src * ic;
                T* dxrow = dx + src * ic;
                for (int64_t i = 0; i < ic; ++i) {
                    wgrow[i * k + kk] += g * xrow[i];
                    dxrow[i] += g * wrow[i * k + kk];
                }
            }
        }
    }
}

}  // namespace detail

// Uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) for weights and biases; the
// attention output layer starts at zero so training begins with uniform
// modality weights.
template <typename T>
PreFusionParamsT<T> init_params(const PreFusionConfig& cfg,
                                const std::array<int64_t, 3>& input_dims, Rng& rng) {
    cfg.validate();
    PreFusionParamsT<T> p;
    auto init_affine = [&](int64_t out, int64_t in, bool zero) {
        AffineT<T> a;
        a.w = TensorT<T>({out, in});
        a.b = TensorT<T>({out});
        if (!zero) {
            const double bound = 1.0 / std::sqrt(static_cast<double>(in));
            for (auto& v : a.w.data) v = static_cast<T>(rng.uniform(-bound, bound));
            for (auto& v : a.b.data) v = static_cast<T>(rng.uniform(-bound, bound));
        }
        return a;
    };
    auto init_conv = [&](int64_t ch, int64_t k) {
        Conv1dT<T> c;
        c.w = TensorT<T>({ch, ch, k});
        c.b = TensorT<T>({ch});
        const double bound = 1.0 / std::sqrt(static_cast<double>(ch * k));
        for (auto& v : c.w.data) v = static_cast<T>(rng.uniform(-bound, bound));
        for (auto& v : c.b.data) v = static_cast<T>(rng.uniform(-bound, bound));
        return c;
    };
    for (int m = 0; m < 3; ++m) p.modality_mlps[m] = init_affine(cfg.dim, input_dims[m], false);
    p.attn_hidden = init_affine(cfg.dim, cfg.dim, false);
    p.attn_out = init_affine(PreFusionConfig::kModalities, cfg.dim, true);
    p.conv_stem = init_conv(cfg.dim, cfg.kernel_size);
    p.conv_blocks.clear();
    for (int64_t k = 0; k < cfg.blocks; ++k) p.conv_blocks.push_back(init_conv(cfg.dim, cfg.kernel_size));
    return p;
}

template <typename T>
PreFusionParamsT<T> zero_grads_like(const PreFusionParamsT<T>& p) {
    PreFusionParamsT<T> g;
    for (int m = 0; m < 3; ++m) {
        g.modality_mlps[m].w = zeros_like(p.modality_mlps[m].w);
        g.modality_mlps[m].b = zeros_like(p.modality_mlps[m].b);
    }
    g.attn_hidden.w = zeros_like(p.attn_hidden.w);
    g.attn_hidden.b = zeros_like(p.attn_hidden.b);
    g.attn_out.w = zeros_like(p.attn_out.w);
    g.attn_out.b = zeros_like(p.attn_out.b);
    g.conv_stem.w = zeros_like(p.conv_stem.w);
    g.conv_stem.b = zeros_like(p.conv_stem.b);
    for (const auto& c : p.conv_blocks) {
        Conv1dT<T> gc;
        gc.w = zeros_like(c.w);
        gc.b = zeros_like(c.b);
        g.conv_blocks.push_back(std::move(gc));
    }
    return g;
}

// Per-modality affine standardization into the shared [B x M x T x d]
// structure; modality order is (audio, global, temporal).
template <typename T>
HybridStructuresT<T> standardize(const TensorT<T>& u_a, const TensorT<T>& u_glo,
                                 const TensorT<T>& u_temp, const PreFusionParamsT<T>& params) {
    const TensorT<T>* streams[3] = {&u_a, &u_glo, &u_temp};
    int64_t batch = 1;
    int64_t tokens = -1;
    for (int m = 0; m < 3; ++m) {
        const auto& s = *streams[m];
        if (s.ndim() != 2 && s.ndim() != 3)
            throw ShapeError("standardize expects [T x d] or [B x T x d], got " + s.shape_str());
        const int64_t b = s.ndim() == 3 ? s.dim(0) : 1;
        const int64_t t = s.ndim() == 3 ? s.dim(1) : s.dim(0);
        if (m == 0) {
            batch = b;
            tokens = t;
        } else if (b != batch || t != tokens) {
            throw ShapeError("unaligned streams");
        }
        const int64_t in = s.ndim() == 3 ? s.dim(2) : s.dim(1);
        if (in != params.modality_mlps[static_cast<size_t>(m)].in())
            throw ShapeError("unaligned streams");
    }
    const int64_t d = params.modality_mlps[0].out();

    HybridStructuresT<T> h;
    h.batch = batch;
    h.tokens = tokens;
    h.dim = d;
    h.stacked = TensorT<T>({batch, 3, tokens, d});
    for (int m = 0; m < 3; ++m) {
        const auto& aff = params.modality_mlps[static_cast<size_t>(m)];
        const auto& s = *streams[m];
        const int64_t in = aff.in();
        for (int64_t b = 0; b < batch; ++b) {
            const T* x = s.data.data() + b * tokens * in;
            T* y = h.slice(b, m);
            kern::matmul_nt(x, in, aff.w.data.data(), in, y, d, tokens, in, d, false);
            for (int64_t t = 0; t < tokens; ++t)
                for (int64_t e = 0; e < d; ++e) y[t * d + e] += aff.b.data[e];
        }
    }
    return h;
}

// Weighted sum of modality slices; shared by the attention branch and the
// conv-branch base so that uniform attention weights and the modality mean
// are bit-identical.
template <typename T>
void combine_modalities(const HybridStructuresT<T>& h, const T* weights_bm, TensorT<T>& out) {
    const int64_t n = h.tokens * h.dim;
    for (int64_t b = 0; b < h.batch; ++b) {
        const T* s0 = h.slice(b, 0);
        const T* s1 = h.slice(b, 1);
        const T* s2 = h.slice(b, 2);
        const T w0 = weights_bm[b * 3 + 0], w1 = weights_bm[b * 3 + 1], w2 = weights_bm[b * 3 + 2];
        T* o = out.data.data() + b * n;
        for (int64_t i = 0; i < n; ++i) {
            T acc = w0 * s0[i];
            acc += w1 * s1[i];
            acc += w2 * s2[i];
            o[i] = acc;
        }
    }
}

// Attention branch: softmax(attn_mlp(token mean of F_d)) gives one weight
// per modality; the [1 x M] x [M x T*d] product collapses the stack.
template <typename T>
void attention_branch(const HybridStructuresT<T>& h, const PreFusionParamsT<T>& params,
                      FusionCacheT<T>& cache, TensorT<T>& f_attn) {
    const int64_t B = h.batch, d = h.dim;
    cache.pooled = TensorT<T>({B, d});
    cache.hidden = TensorT<T>({B, d});
    cache.weights = TensorT<T>({B, 3});
    const T inv = T(1) / static_cast<T>(3 * h.tokens);
    for (int64_t b = 0; b < B; ++b) {
        const T* f_d = h.concat(b);
        T* pool = cache.pooled.row(b);
        for (int64_t e = 0; e < d; ++e) pool[e] = T(0);
        for (int64_t r = 0; r < 3 * h.tokens; ++r) {
            const T* row = f_d + r * d;
            for (int64_t e = 0; e < d; ++e) pool[e] += row[e];
        }
        for (int64_t e = 0; e < d; ++e) pool[e] *= inv;

        T* hid = cache.hidden.row(b);
        kern::matmul_nt(pool, d, params.attn_hidden.w.data.data(), d, hid, d, 1, d, d, false);
        for (int64_t e = 0; e < d; ++e) hid[e] = std::tanh(hid[e] + params.attn_hidden.b.data[e]);

        T logits[3];
        kern::matmul_nt(hid, d, params.attn_out.w.data.data(), d, logits, 3, 1, d, 3, false);
        T mx = logits[0] + params.attn_out.b.data[0];
        T shifted[3];
        for (int m = 0; m < 3; ++m) {
            shifted[m] = logits[m] + params.attn_out.b.data[m];
            if (shifted[m] > mx) mx = shifted[m];
        }
        T sum = T(0);
        T* w = cache.weights.row(b);
        for (int m = 0; m < 3; ++m) {
            w[m] = std::exp(shifted[m] - mx);
            sum += w[m];
        }
        for (int m = 0; m < 3; ++m) {
            w[m] /= sum;
            if (!std::isfinite(static_cast<double>(w[m]))) throw ShapeError("attention overflow");
        }
    }
    f_attn = TensorT<T>({B, h.tokens, d});
    combine_modalities(h, cache.weights.data.data(), f_attn);
}

// Convolution branch: modality mean, stem conv, N residual swish blocks.
template <typename T>
void conv_branch(const HybridStructuresT<T>& h, const PreFusionParamsT<T>& params,
                 FusionCacheT<T>& cache, TensorT<T>& f_conv) {
    const int64_t B = h.batch, tokens = h.tokens, d = h.dim;
    const int64_t n = tokens * d;
    cache.f0 = TensorT<T>({B, tokens, d});
    std::vector<T> uniform(static_cast<size_t>(B * 3), T(1) / T(3));
    combine_modalities(h, uniform.data(), cache.f0);

    cache.stem_out = TensorT<T>({B, tokens, d});
    for (int64_t b = 0; b < B; ++b)
        detail::conv1d_forward(params.conv_stem, cache.f0.data.data() + b * n,
                               cache.stem_out.data.data() + b * n, tokens);

    const size_t nblocks = params.conv_blocks.size();
    cache.block_in.assign(nblocks, TensorT<T>());
    cache.block_pre.assign(nblocks, TensorT<T>());
    TensorT<T> cur = cache.stem_out;
    for (size_t k = 0; k < nblocks; ++k) {
        cache.block_in[k] = cur;
        cache.block_pre[k] = TensorT<T>({B, tokens, d});
        for (int64_t b = 0; b < B; ++b)
            detail::conv1d_forward(params.conv_blocks[k], cur.data.data() + b * n,
                                   cache.block_pre[k].data.data() + b * n, tokens);
        for (int64_t i = 0; i < B * n; ++i) {
            const T z = cache.block_pre[k].data[i];
            cur.data[i] += z * detail::sigmoid(z);
        }
    }
    f_conv = std::move(cur);
}

// Full pre-fusion forward. Deterministic for fixed parameters.
template <typename T>
FusionOutputT<T> fuse(const TensorT<T>& u_a, const TensorT<T>& u_glo, const TensorT<T>& u_temp,
                      const PreFusionParamsT<T>& params, FusionCacheT<T>* cache_out = nullptr) {
    FusionCacheT<T> cache;
    cache.hybrid = standardize(u_a, u_glo, u_temp, params);
    cache.inputs = {u_a, u_glo, u_temp};

    FusionOutputT<T> out;
    attention_branch(cache.hybrid, params, cache, out.f_attn);
    conv_branch(cache.hybrid, params, cache, out.f_conv);
    out.weights = cache.weights;

    out.u_f = TensorT<T>(out.f_attn.dims);
    for (int64_t i = 0; i < out.u_f.numel(); ++i)
        out.u_f.data[i] = out.f_conv.data[i] + out.f_attn.data[i];
    if (cache_out) *cache_out = std::move(cache);
    return out;
}

// Exact reverse-mode gradients of <upstream, u_f> w.r.t. every parameter
// and every input stream.
template <typename T>
PreFusionGradsT<T> fuse_backward(const PreFusionParamsT<T>& params, const FusionCacheT<T>& cache,
                                 const TensorT<T>& upstream) {
    const auto& h = cache.hybrid;
    const int64_t B = h.batch, tokens = h.tokens, d = h.dim;
    const int64_t n = tokens * d;
    if (upstream.numel() != B * n) throw ShapeError("upstream gradient shape mismatch");

    PreFusionGradsT<T> g;
    g.params = zero_grads_like(params);
    TensorT<T> d_stacked({B, 3, tokens, d});

    // ---- conv branch backward: dF_conv = upstream
    TensorT<T> d_cur = upstream;  // dG_N
    const size_t nblocks = params.conv_blocks.size();
    for (size_t k = nblocks; k-- > 0;) {
        TensorT<T> dz({B, tokens, d});
        for (int64_t i = 0; i < B * n; ++i) {
            const T z = cache.block_pre[k].data[i];
            const T s = detail::sigmoid(z);
            dz.data[i] = d_cur.data[i] * (s * (T(1) + z * (T(1) - s)));
        }
        // residual: dG_{k-1} = dG_k + conv^T(dz)
        for (int64_t b = 0; b < B; ++b)
            detail::conv1d_backward(params.conv_blocks[k], cache.block_in[k].data.data() + b * n,
                                    dz.data.data() + b * n, d_cur.data.data() + b * n,
                                    g.params.conv_blocks[k], tokens);
    }
    TensorT<T> d_f0({B, tokens, d});
    for (int64_t b = 0; b < B; ++b)
        detail::conv1d_backward(params.conv_stem, cache.f0.data.data() + b * n,
                                d_cur.data.data() + b * n, d_f0.data.data() + b * n,
                                g.params.conv_stem, tokens);
    const T third = T(1) / T(3);
    for (int64_t b = 0; b < B; ++b)
        for (int m = 0; m < 3; ++m) {
            T* ds = d_stacked.data.data() + ((b * 3 + m) * tokens) * d;
            const T* df = d_f0.data.data() + b * n;
            for (int64_t i = 0; i < n; ++i) ds[i] += third * df[i];
        }

    // ---- attention branch backward: dF_attn = upstream
    TensorT<T> d_pooled({B, d});
    for (int64_t b = 0; b < B; ++b) {
        const T* du = upstream.data.data() + b * n;
        T dw[3];
        for (int m = 0; m < 3; ++m) {
            const T* s = h.slice(b, m);
            T acc = T(0);
            for (int64_t i = 0; i < n; ++i) acc += du[i] * s[i];
            dw[m] = acc;
            const T wm = cache.weights.at(b, m);
            T* ds = d_stacked.data.data() + ((b * 3 + m) * tokens) * d;
            for (int64_t i = 0; i < n; ++i) ds[i] += wm * du[i];
        }
        // softmax backward
        const T* w = cache.weights.row(b);
        T dot = T(0);
        for (int m = 0; m < 3; ++m) dot += dw[m] * w[m];
        T dlogits[3];
        for (int m = 0; m < 3; ++m) dlogits[m] = (dw[m] - dot) * w[m];

        // attn_out: logits = W_o * hidden + b_o
        const T* hid = cache.hidden.row(b);
        std::vector<T> dhid(static_cast<size_t>(d), T(0));
        for (int m = 0; m < 3; ++m) {
            g.params.attn_out.b.data[m] += dlogits[m];
            T* wrow = g.params.attn_out.w.data.data() + m * d;
            const T* worow = params.attn_out.w.data.data() + m * d;
            for (int64_t e = 0; e < d; ++e) {
                wrow[e] += dlogits[m] * hid[e];
                dhid[e] += dlogits[m] * worow[e];
            }
        }
        // tanh
        for (int64_t e = 0; e < d; ++e) dhid[e] *= (T(1) - hid[e] * hid[e]);
        // attn_hidden: pre = W_h * pooled + b_h
        const T* pool = cache.pooled.row(b);
        T* dpool = d_pooled.row(b);
        for (int64_t e = 0; e < d; ++e) {
            g.params.attn_hidden.b.data[e] += dhid[e];
            T* wrow = g.params.attn_hidden.w.data.data() + e * d;
            const T* whrow = params.attn_hidden.w.data.data() + e * d;
            for (int64_t i = 0; i < d; ++i) {
                wrow[i] += dhid[e] * pool[i];
                dpool[i] += dhid[e] * whrow[i];
            }
        }
        // token mean of F_d
        const T inv = T(1) / static_cast<T>(3 * tokens);
        for (int m = 0; m < 3; ++m) {
            T* ds = d_stacked.data.data() + ((b * 3 + m) * tokens) * d;
            for (int64_t t = 0; t < tokens; ++t)
                for (int64_t e = 0; e < d; ++e) ds[t * d + e] += dpool[e] * inv;
        }
    }

    // ---- standardize backward
    for (int m = 0; m < 3; ++m) {
        const auto& aff = params.modality_mlps[static_cast<size_t>(m)];
        const auto& x = cache.inputs[static_cast<size_t>(m)];
        const int64_t in = aff.in();
        g.inputs[static_cast<size_t>(m)] = TensorT<T>(x.dims);
        for (int64_t b = 0; b < B; ++b) {
            const T* dy = d_stacked.data.data() + ((b * 3 + m) * tokens) * d;
            const T* xb = x.data.data() + b * tokens * in;
            T* dxb = g.inputs[static_cast<size_t>(m)].data.data() + b * tokens * in;
            // dW += dY^T X ; db += column sums ; dX = dY W
            kern::matmul_tn(dy, d, xb, in, g.params.modality_mlps[static_cast<size_t>(m)].w.data.data(), in,
                            tokens, d, in, true);
            for (int64_t t = 0; t < tokens; ++t)
                for (int64_t e = 0; e < d; ++e)
                    g.params.modality_mlps[static_cast<size_t>(m)].b.data[e] += dy[t * d + e];
            kern::matmul_nn(dy, d, aff.w.data.data(), in, dxb, in, tokens, d, in, false);
        }
    }
    return g;
}

// Flat views over parameters, used by the optimizer and the serializer.
template <typename T, typename Fn>
void for_each_param(PreFusionParamsT<T>& p, Fn&& fn) {
    const char* mod_names[3] = {"mlp_audio", "mlp_global", "mlp_temporal"};
    for (int m = 0; m < 3; ++m) {
        fn(std::string("prefusion.") + mod_names[m] + ".w", p.modality_mlps[m].w);
        fn(std::string("prefusion.") + mod_names[m] + ".b", p.modality_mlps[m].b);
    }
    fn(std::string("prefusion.attn_hidden.w"), p.attn_hidden.w);
    fn(std::string("prefusion.attn_hidden.b"), p.attn_hidden.b);
    fn(std::string("prefusion.attn_out.w"), p.attn_out.w);
    fn(std::string("prefusion.attn_out.b"), p.attn_out.b);
    fn(std::string("prefusion.stem.w"), p.conv_stem.w);
    fn(std::string("prefusion.stem.b"), p.conv_stem.b);
    for (size_t k = 0; k < p.conv_blocks.size(); ++k) {
        fn("prefusion.block" + std::to_string(k) + ".w", p.conv_blocks[k].w);
        fn("prefusion.block" + std::to_string(k) + ".b", p.conv_blocks[k].b);
    }
}

}  // namespace mme::fusion
