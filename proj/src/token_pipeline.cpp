#include "mme/token_pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "mme/errors.hpp"

namespace mme::pipeline {

void PipelineConfig::validate() const {
    if (audio_tokens < 1 || video_frames < 1 || spatial_grid < 1 || global_tokens < 1)
        throw ConfigError("pipeline config fields must be >= 1");
}

Tensor adaptive_pool_1d(const Tensor& seq, int64_t target) {
    if (seq.data.empty()) throw ShapeError("empty sequence");
    if (seq.ndim() != 2) throw ShapeError("adaptive_pool_1d expects [L x d], got " + seq.shape_str());
    if (target < 1) throw ShapeError("pool target must be >= 1");
    const int64_t L = seq.rows();
    const int64_t d = seq.cols();

    Tensor out({target, d});
    if (L < target) {
        // zero-padding branch: input rows verbatim, then zero rows
        for (int64_t i = 0; i < L; ++i)
            for (int64_t c = 0; c < d; ++c) out.at(i, c) = seq.at(i, c);
        return out;
    }
    for (int64_t i = 0; i < target; ++i) {
        const int64_t lo = i * L / target;
        const int64_t hi = ((i + 1) * L + target - 1) / target;  // ceil
        const float inv = 1.0f / static_cast<float>(hi - lo);
        for (int64_t c = 0; c < d; ++c) {
            float acc = 0.0f;
            for (int64_t r = lo; r < hi; ++r) acc += seq.at(r, c);
            out.at(i, c) = acc * inv;
        }
    }
    return out;
}

std::vector<int64_t> sample_frames(int64_t n, int64_t k) {
    if (n < 1 || k < 1) throw ShapeError("sample_frames requires n >= 1 and k >= 1");
    std::vector<int64_t> idx(static_cast<size_t>(k));
    if (n >= k) {
        if (k == 1) {
            idx[0] = 0;
        } else {
            for (int64_t j = 0; j < k; ++j)
                idx[static_cast<size_t>(j)] = static_cast<int64_t>(
                    std::llround(static_cast<double>(j) * static_cast<double>(n - 1) /
                                 static_cast<double>(k - 1)));
        }
    } else {
        // degenerate short clips: walk every frame once, hold the last
        for (int64_t j = 0; j < k; ++j) idx[static_cast<size_t>(j)] = std::min(j, n - 1);
    }
    return idx;
}

Tensor spatial_pool(const Tensor& frame, int64_t grid) {
    if (frame.ndim() != 3)
        throw ShapeError("spatial_pool expects [H x W x d], got " + frame.shape_str());
    const int64_t H = frame.dim(0);
    const int64_t W = frame.dim(1);
    const int64_t d = frame.dim(2);
    if (H < grid || W < grid) throw ShapeError("grid exceeds frame");

    Tensor out({grid * grid, d});
    for (int64_t r = 0; r < grid; ++r) {
        const int64_t rlo = r * H / grid;
        const int64_t rhi = ((r + 1) * H + grid - 1) / grid;
        for (int64_t cdx = 0; cdx < grid; ++cdx) {
            const int64_t clo = cdx * W / grid;
            const int64_t chi = ((cdx + 1) * W + grid - 1) / grid;
            const float inv = 1.0f / static_cast<float>((rhi - rlo) * (chi - clo));
            float* cell = out.row(r * grid + cdx);
            for (int64_t ch = 0; ch < d; ++ch) {
                float acc = 0.0f;
                for (int64_t y = rlo; y < rhi; ++y)
                    for (int64_t x = clo; x < chi; ++x)
                        acc += frame.data[(y * W + x) * d + ch];
                cell[ch] = acc * inv;
            }
        }
    }
    return out;
}

int64_t middle_frame(int64_t n) {
    if (n < 1) throw ShapeError("middle_frame requires n >= 1");
    return n / 2;
}

Tensor broadcast_global(const Tensor& cls, int64_t T) {
    if (cls.ndim() != 2 || cls.rows() != 1) throw ShapeError("expected single token");
    if (T < 1) throw ShapeError("broadcast target must be >= 1");
    const int64_t d = cls.cols();
    Tensor out({T, d});
    for (int64_t i = 0; i < T; ++i)
        for (int64_t c = 0; c < d; ++c) out.at(i, c) = cls.at(0, c);
    return out;
}

Tensor video_tokens(const Tensor& stream, int64_t frames, int64_t grid) {
    if (stream.ndim() != 4)
        throw ShapeError("video stream expects [n x H x W x d], got " + stream.shape_str());
    const int64_t n = stream.dim(0);
    const int64_t H = stream.dim(1);
    const int64_t W = stream.dim(2);
    const int64_t d = stream.dim(3);
    const auto idx = sample_frames(n, frames);
    Tensor out({frames * grid * grid, d});
    const int64_t frame_elems = H * W * d;
    for (int64_t f = 0; f < frames; ++f) {
        Tensor frame({H, W, d});
        const float* src = stream.data.data() + idx[static_cast<size_t>(f)] * frame_elems;
        std::copy(src, src + frame_elems, frame.data.begin());
        const Tensor cells = spatial_pool(frame, grid);
        std::copy(cells.data.begin(), cells.data.end(),
                  out.data.begin() + f * grid * grid * d);
    }
    return out;
}

}  // namespace mme::pipeline
