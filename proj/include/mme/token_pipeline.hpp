#pragma once

#include <cstdint>
#include <vector>

#include "mme/tensor.hpp"

// Normalizes raw per-modality feature streams into fixed-shape token
// sequences: variable-length audio -> T_a tokens, video -> K frames of
// g x g pooled cells, a global frame vector -> broadcast tokens.
// All operations are deterministic pure functions.

namespace mme::pipeline {

struct PipelineConfig {
    int64_t audio_tokens = 64;  // T_a
    int64_t video_frames = 16;  // K
    int64_t spatial_grid = 2;   // g cells per side
    int64_t global_tokens = 16; // G image tokens in the prompt

    void validate() const;
};

// 1-D adaptive average pooling with zero padding. L >= T pools with the
// window [floor(i*L/T), ceil((i+1)*L/T)); L < T appends T-L zero rows.
Tensor adaptive_pool_1d(const Tensor& seq, int64_t target);

// Uniform frame sampling. n >= k places k indices at round(j*(n-1)/(k-1));
// n < k walks 0..n-1 once and repeats the final index. Output is
// non-decreasing and bounded by n-1.
std::vector<int64_t> sample_frames(int64_t n, int64_t k);

// Pools an H x W x d frame into a g x g grid of cell means (row-major
// cells), using the adaptive window rule independently per axis.
Tensor spatial_pool(const Tensor& frame, int64_t grid);

// Representative frame index: floor(n/2).
int64_t middle_frame(int64_t n);

// Replicates a single token row T times.
Tensor broadcast_global(const Tensor& cls, int64_t T);

// Full video stream normalization: sample `frames` frames from a
// [n x H x W x d] stream and spatially pool each, yielding
// [frames * g * g, d] tokens in frame-major order.
Tensor video_tokens(const Tensor& stream, int64_t frames, int64_t grid);

}  // namespace mme::pipeline
