#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "mme/prefusion.hpp"
#include "mme/rng.hpp"

using namespace mme;
using namespace mme::fusion;

namespace {

template <typename T>
TensorT<T> random_stream(int64_t tokens, int64_t dim, Rng& rng) {
    TensorT<T> t({tokens, dim});
    for (auto& v : t.data) v = static_cast<T>(rng.uniform(-1.0, 1.0));
    return t;
}

// Collect pointers to every scalar parameter for the FD sweep.
template <typename T>
std::vector<T*> flatten(PreFusionParamsT<T>& p) {
    std::vector<T*> out;
    for_each_param(p, [&](const std::string&, TensorT<T>& t) {
        for (auto& v : t.data) out.push_back(&v);
    });
    return out;
}

double loss_of(const TensorT<double>& u_f, const TensorT<double>& g) {
    double acc = 0;
    for (int64_t i = 0; i < u_f.numel(); ++i) acc += u_f.data[i] * g.data[i];
    return acc;
}

}  // namespace

TEST_CASE("standardize builds aligned hybrid structures") {
    PreFusionConfig cfg;
    cfg.dim = 2;
    cfg.tokens = 2;
    cfg.blocks = 1;
    Rng rng(1);
    auto params = init_params<float>(cfg, {2, 2, 2}, rng);

    // identity maps, equal inputs -> F_d stacks X three times
    for (int m = 0; m < 3; ++m) {
        std::fill(params.modality_mlps[m].w.data.begin(), params.modality_mlps[m].w.data.end(), 0.f);
        params.modality_mlps[m].w.at(0, 0) = 1.f;
        params.modality_mlps[m].w.at(1, 1) = 1.f;
        std::fill(params.modality_mlps[m].b.data.begin(), params.modality_mlps[m].b.data.end(), 0.f);
    }
    Tensor x({2, 2}, {1, 2, 3, 4});
    auto h = standardize(x, x, x, params);
    for (int m = 0; m < 3; ++m)
        for (int64_t i = 0; i < 4; ++i) CHECK(h.slice(0, m)[i] == x.data[i]);

    // F_d rows m*T..(m+1)*T-1 equal F_s slice m by construction
    for (int m = 0; m < 3; ++m)
        CHECK(std::memcmp(h.concat(0) + m * 2 * 2, h.slice(0, m), sizeof(float) * 4) == 0);

    // zero maps -> all zeros
    for (int m = 0; m < 3; ++m)
        std::fill(params.modality_mlps[m].w.data.begin(), params.modality_mlps[m].w.data.end(), 0.f);
    auto hz = standardize(x, x, x, params);
    for (float v : hz.stacked.data) CHECK(v == 0.0f);

    // random instance matches a hand affine oracle
    Rng rng2(2);
    auto p2 = init_params<float>(cfg, {3, 3, 3}, rng2);
    Tensor a = random_stream<float>(2, 3, rng2);
    Tensor b = random_stream<float>(2, 3, rng2);
    Tensor c = random_stream<float>(2, 3, rng2);
    auto h2 = standardize(a, b, c, p2);
    const Tensor* ins[3] = {&a, &b, &c};
    for (int m = 0; m < 3; ++m)
        for (int64_t t = 0; t < 2; ++t)
            for (int64_t e = 0; e < 2; ++e) {
                float want = p2.modality_mlps[m].b.data[e];
                for (int64_t i = 0; i < 3; ++i)
                    want += p2.modality_mlps[m].w.at(e, i) * ins[m]->at(t, i);
                CHECK(h2.slice(0, m)[t * 2 + e] == doctest::Approx(want).epsilon(1e-6));
            }

    Tensor mis({3, 3});
    CHECK_THROWS_WITH_AS(standardize(x, x, mis, params), "unaligned streams", ShapeError);
}

TEST_CASE("attention branch: uniform softmax, selector weights, hand dot product") {
    PreFusionConfig cfg;
    cfg.dim = 2;
    cfg.tokens = 2;
    Rng rng(3);
    auto params = init_params<float>(cfg, {2, 2, 2}, rng);  // attn_out zero => uniform weights

    Tensor a = random_stream<float>(2, 2, rng);
    Tensor b = random_stream<float>(2, 2, rng);
    Tensor c = random_stream<float>(2, 2, rng);
    FusionCacheT<float> cache;
    auto out = fuse(a, b, c, params, &cache);

    // weights sum to one, strictly positive
    for (int64_t i = 0; i < 3; ++i) CHECK(out.weights.data[i] > 0.0f);
    CHECK(std::fabs(out.weights.data[0] + out.weights.data[1] + out.weights.data[2] - 1.0f) <=
          1e-6f);

    // uniform logits -> arithmetic mean of modality slices
    const auto& h = cache.hybrid;
    for (int64_t i = 0; i < 4; ++i) {
        const float mean = (h.slice(0, 0)[i] + h.slice(0, 1)[i] + h.slice(0, 2)[i]) / 3.0f;
        CHECK(out.f_attn.data[i] == doctest::Approx(mean).epsilon(1e-6));
    }

    // selector weights pick out one slice exactly
    HybridStructuresT<float> hs = cache.hybrid;
    TensorT<float> sel({1, 2, 2});
    const float onehot[3] = {1.f, 0.f, 0.f};
    combine_modalities(hs, onehot, sel);
    for (int64_t i = 0; i < 4; ++i) CHECK(sel.data[i] == hs.slice(0, 0)[i]);

    // M=3, T=1, d=1, values (1,2,3), weights (.2,.3,.5) -> 2.3
    HybridStructuresT<float> tiny;
    tiny.batch = 1;
    tiny.tokens = 1;
    tiny.dim = 1;
    tiny.stacked = TensorT<float>({1, 3, 1, 1}, {1.f, 2.f, 3.f});
    TensorT<float> r({1, 1, 1});
    const float w[3] = {0.2f, 0.3f, 0.5f};
    combine_modalities(tiny, w, r);
    CHECK(r.data[0] == doctest::Approx(2.3f).epsilon(1e-6));

    // convex combination stays inside the per-element modality envelope
    for (int64_t i = 0; i < 4; ++i) {
        float lo = h.slice(0, 0)[i], hi = lo;
        for (int m = 1; m < 3; ++m) {
            lo = std::min(lo, h.slice(0, m)[i]);
            hi = std::max(hi, h.slice(0, m)[i]);
        }
        CHECK(out.f_attn.data[i] >= lo - 1e-6f);
        CHECK(out.f_attn.data[i] <= hi + 1e-6f);
    }
}

TEST_CASE("conv branch: residual identity, swish oracle, zero propagation") {
    PreFusionConfig cfg;
    cfg.dim = 3;
    cfg.tokens = 4;
    cfg.blocks = 2;
    Rng rng(4);
    auto params = init_params<float>(cfg, {3, 3, 3}, rng);

    // zero conv blocks + identity stem => F_conv == modality mean bitwise
    params.conv_stem.set_identity();
    for (auto& blk : params.conv_blocks) {
        std::fill(blk.w.data.begin(), blk.w.data.end(), 0.f);
        std::fill(blk.b.data.begin(), blk.b.data.end(), 0.f);
    }
    Tensor a = random_stream<float>(4, 3, rng);
    Tensor b = random_stream<float>(4, 3, rng);
    Tensor c = random_stream<float>(4, 3, rng);
    FusionCacheT<float> cache;
    auto out = fuse(a, b, c, params, &cache);
    for (int64_t i = 0; i < out.f_conv.numel(); ++i) CHECK(out.f_conv.data[i] == cache.f0.data[i]);

    // u_f = F_attn + F_conv exactly
    for (int64_t i = 0; i < out.u_f.numel(); ++i)
        CHECK(out.u_f.data[i] == out.f_attn.data[i] + out.f_conv.data[i]);

    // one identity block on all-ones input: 1 + swish(1) per element
    PreFusionConfig cfg1;
    cfg1.dim = 2;
    cfg1.tokens = 3;
    cfg1.blocks = 1;
    Rng rng1(5);
    auto p1 = init_params<float>(cfg1, {2, 2, 2}, rng1);
    p1.conv_stem.set_identity();
    p1.conv_blocks[0].set_identity();
    HybridStructuresT<float> ones;
    ones.batch = 1;
    ones.tokens = 3;
    ones.dim = 2;
    ones.stacked = TensorT<float>({1, 3, 3, 2});
    for (auto& v : ones.stacked.data) v = 1.0f;
    FusionCacheT<float> c1;
    TensorT<float> f_conv;
    conv_branch(ones, p1, c1, f_conv);
    const float swish1 = 1.0f / (1.0f + std::exp(-1.0f));
    for (float v : f_conv.data) CHECK(v == doctest::Approx(1.0f + swish1).epsilon(1e-6));
    CHECK(f_conv.data[0] == doctest::Approx(1.731059f).epsilon(1e-5));

    // zero input propagates zeros through zero-bias parameters
    std::fill(p1.conv_stem.b.data.begin(), p1.conv_stem.b.data.end(), 0.f);
    std::fill(p1.conv_blocks[0].b.data.begin(), p1.conv_blocks[0].b.data.end(), 0.f);
    for (auto& v : ones.stacked.data) v = 0.0f;
    FusionCacheT<float> c2;
    TensorT<float> f_zero;
    conv_branch(ones, p1, c2, f_zero);
    for (float v : f_zero.data) CHECK(v == 0.0f);
}

TEST_CASE("fuse scale equivariance with frozen uniform attention") {
    PreFusionConfig cfg;
    cfg.dim = 2;
    cfg.tokens = 2;
    cfg.blocks = 1;
    Rng rng(6);
    auto params = init_params<float>(cfg, {2, 2, 2}, rng);  // attn_out zero-init
    for (int m = 0; m < 3; ++m) {
        std::fill(params.modality_mlps[m].w.data.begin(), params.modality_mlps[m].w.data.end(), 0.f);
        params.modality_mlps[m].w.at(0, 0) = 1.f;
        params.modality_mlps[m].w.at(1, 1) = 1.f;
        std::fill(params.modality_mlps[m].b.data.begin(), params.modality_mlps[m].b.data.end(), 0.f);
    }
    Tensor a = random_stream<float>(2, 2, rng);
    Tensor b = random_stream<float>(2, 2, rng);
    Tensor c = random_stream<float>(2, 2, rng);
    auto out1 = fuse(a, b, c, params);
    Tensor a2 = a, b2 = b, c2 = c;
    for (auto* t : {&a2, &b2, &c2})
        for (auto& v : t->data) v *= 2.0f;
    auto out2 = fuse(a2, b2, c2, params);
    for (int64_t i = 0; i < out1.f_attn.numel(); ++i)
        CHECK(out2.f_attn.data[i] == doctest::Approx(2.0f * out1.f_attn.data[i]).epsilon(1e-6));
}

TEST_CASE("fuse_backward matches central finite differences") {
    Rng rng(42);
    int instances = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 6; ++trial) {
        PreFusionConfig cfg;
        cfg.dim = 4 + static_cast<int64_t>(rng.below(5));     // 4..8
        cfg.tokens = 4 + static_cast<int64_t>(rng.below(5));  // 4..8
        cfg.blocks = 1 + static_cast<int64_t>(rng.below(2));
        const std::array<int64_t, 3> ins = {3 + static_cast<int64_t>(rng.below(3)),
                                            3 + static_cast<int64_t>(rng.below(3)),
                                            3 + static_cast<int64_t>(rng.below(3))};
        auto params = init_params<double>(cfg, ins, rng);
        // move attention off the uniform point so softmax gradients are live
        for (auto& v : params.attn_out.w.data) v = rng.uniform(-0.5, 0.5);
        for (auto& v : params.attn_out.b.data) v = rng.uniform(-0.5, 0.5);

        TensorT<double> a = random_stream<double>(cfg.tokens, ins[0], rng);
        TensorT<double> b = random_stream<double>(cfg.tokens, ins[1], rng);
        TensorT<double> c = random_stream<double>(cfg.tokens, ins[2], rng);
        TensorT<double> g({1, cfg.tokens, cfg.dim});
        for (auto& v : g.data) v = rng.uniform(-1.0, 1.0);

        FusionCacheT<double> cache;
        fuse(a, b, c, params, &cache);
        auto grads = fuse_backward(params, cache, g);

        auto check_coord = [&](double* param, double analytic) {
            const double h = 1e-4;
            const double save = *param;
            *param = save + h;
            const double jp = loss_of(fuse(a, b, c, params).u_f, g);
            *param = save - h;
            const double jm = loss_of(fuse(a, b, c, params).u_f, g);
            *param = save;
            const double fd = (jp - jm) / (2 * h);
            const double rel = std::fabs(analytic - fd) /
                               std::max({1.0, std::fabs(analytic), std::fabs(fd)});
            worst = std::max(worst, rel);
            CHECK(rel <= 1e-4);
        };

        auto pptrs = flatten(params);
        auto gptrs = flatten(grads.params);
        REQUIRE(pptrs.size() == gptrs.size());
        for (size_t i = 0; i < pptrs.size(); ++i) check_coord(pptrs[i], *gptrs[i]);

        TensorT<double>* streams[3] = {&a, &b, &c};
        for (int m = 0; m < 3; ++m)
            for (int64_t i = 0; i < streams[m]->numel(); ++i)
                check_coord(&streams[m]->data[i], grads.inputs[m].data[i]);
        ++instances;
    }
    CHECK(instances == 6);
    MESSAGE("worst relative error: " << worst);
}

TEST_CASE("fuse_backward zero upstream and linear-map transpose") {
    PreFusionConfig cfg;
    cfg.dim = 3;
    cfg.tokens = 4;
    cfg.blocks = 1;
    Rng rng(9);
    auto params = init_params<double>(cfg, {3, 3, 3}, rng);

    TensorT<double> a = random_stream<double>(4, 3, rng);
    TensorT<double> b = random_stream<double>(4, 3, rng);
    TensorT<double> c = random_stream<double>(4, 3, rng);

    FusionCacheT<double> cache;
    fuse(a, b, c, params, &cache);
    TensorT<double> zero({1, 4, 3});
    auto g0 = fuse_backward(params, cache, zero);
    for_each_param(g0.params, [](const std::string&, TensorT<double>& t) {
        for (double v : t.data) CHECK(v == 0.0);
    });
    for (int m = 0; m < 3; ++m)
        for (double v : g0.inputs[m].data) CHECK(v == 0.0);

    // linear configuration: identity stem, zero blocks, constant uniform
    // attention (zero-init attn_out) => dx_m = (2/3) * du * W_m
    params.conv_stem.set_identity();
    for (auto& blk : params.conv_blocks) {
        std::fill(blk.w.data.begin(), blk.w.data.end(), 0.0);
        std::fill(blk.b.data.begin(), blk.b.data.end(), 0.0);
    }
    std::fill(params.attn_out.w.data.begin(), params.attn_out.w.data.end(), 0.0);
    std::fill(params.attn_out.b.data.begin(), params.attn_out.b.data.end(), 0.0);

    TensorT<double> du({1, 4, 3});
    for (auto& v : du.data) v = rng.uniform(-1.0, 1.0);
    FusionCacheT<double> cache2;
    fuse(a, b, c, params, &cache2);
    auto g = fuse_backward(params, cache2, du);
    for (int m = 0; m < 3; ++m) {
        const auto& w = params.modality_mlps[m].w;  // [d x in]
        for (int64_t t = 0; t < 4; ++t)
            for (int64_t i = 0; i < 3; ++i) {
                double want = 0;
                for (int64_t e = 0; e < 3; ++e) want += (2.0 / 3.0) * du.at(t, e) * w.at(e, i);
                CHECK(g.inputs[m].data[t * 3 + i] == doctest::Approx(want).epsilon(1e-9));
            }
    }
}
