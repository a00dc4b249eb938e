#if defined(__x86_64__) || defined(_M_X64)

#include "mme/kernels.hpp"

#include <immintrin.h>

// AVX2 + FMA lane. Row partitioning happens in the dispatcher; these see a
// contiguous block of output rows. Horizontal reduction order inside a dot
// is fixed, so repeated runs are bit-identical.

namespace mme::kern::avx2 {

namespace {

inline float hsum8(__m256 v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    lo = _mm_add_ps(lo, hi);
    __m128 sh = _mm_movehl_ps(lo, lo);
    lo = _mm_add_ps(lo, sh);
    sh = _mm_shuffle_ps(lo, lo, 0x1);
    lo = _mm_add_ss(lo, sh);
    return _mm_cvtss_f32(lo);
}

}  // namespace

void matmul_nt(const float* a, int64_t lda, const float* b, int64_t ldb, float* c, int64_t ldc,
               int64_t M, int64_t K, int64_t N, bool accumulate) {
    const int64_t K8 = K & ~int64_t(7);
    for (int64_t m = 0; m < M; ++m) {
        const float* arow = a + m * lda;
        float* crow = c + m * ldc;
        int64_t n = 0;
        for (; n + 4 <= N; n += 4) {
            const float* b0 = b + n * ldb;
            const float* b1 = b0 + ldb;
            const float* b2 = b1 + ldb;
            const float* b3 = b2 + ldb;
            __m256 acc0 = _mm256_setzero_ps();
            __m256 acc1 = _mm256_setzero_ps();
            __m256 acc2 = _mm256_setzero_ps();
            __m256 acc3 = _mm256_setzero_ps();
            for (int64_t k = 0; k < K8; k += 8) {
                const __m256 av = _mm256_loadu_ps(arow + k);
                acc0 = _mm256_fmadd_ps(av, _mm256_loadu_ps(b0 + k), acc0);
                acc1 = _mm256_fmadd_ps(av, _mm256_loadu_ps(b1 + k), acc1);
                acc2 = _mm256_fmadd_ps(av, _mm256_loadu_ps(b2 + k), acc2);
                acc3 = _mm256_fmadd_ps(av, _mm256_loadu_ps(b3 + k), acc3);
            }
            float s0 = hsum8(acc0), s1 = hsum8(acc1), s2 = hsum8(acc2), s3 = hsum8(acc3);
            for (int64_t k = K8; k < K; ++k) {
                const float av = arow[k];
                s0 += av * b0[k];
                s1 += av * b1[k];
                s2 += av * b2[k];
                s3 += av * b3[k];
            }
            if (accumulate) {
                crow[n] += s0;
                crow[n + 1] += s1;
                crow[n + 2] += s2;
                crow[n + 3] += s3;
            } else {
                crow[n] = s0;
                crow[n + 1] = s1;
                crow[n + 2] = s2;
                crow[n + 3] = s3;
            }
        }
        for (; n < N; ++n) {
            const float* brow = b + n * ldb;
            __m256 acc = _mm256_setzero_ps();
            for (int64_t k = 0; k < K8; k += 8)
                acc = _mm256_fmadd_ps(_mm256_loadu_ps(arow + k), _mm256_loadu_ps(brow + k), acc);
            float s = hsum8(acc);
            for (int64_t k = K8; k < K; ++k) s += arow[k] * brow[k];
            crow[n] = accumulate ? crow[n] + s : s;
        }
    }
}

void matmul_nn(const float* a, int64_t lda, const float* b, int64_t ldb, float* c, int64_t ldc,
               int64_t M, int64_t K, int64_t N, bool accumulate) {
    const int64_t N8 = N & ~int64_t(7);
    for (int64_t m = 0; m < M; ++m) {
        float* crow = c + m * ldc;
        if (!accumulate)
            for (int64_t n = 0; n < N; ++n) crow[n] = 0.0f;
        const float* arow = a + m * lda;
        int64_t k = 0;
        for (; k + 2 <= K; k += 2) {
            const __m256 a0 = _mm256_set1_ps(arow[k]);
            const __m256 a1 = _mm256_set1_ps(arow[k + 1]);
            const float* b0 = b + k * ldb;
            const float* b1 = b0 + ldb;
            for (int64_t n = 0; n < N8; n += 8) {
                __m256 cv = _mm256_loadu_ps(crow + n);
                cv = _mm256_fmadd_ps(a0, _mm256_loadu_ps(b0 + n), cv);
                cv = _mm256_fmadd_ps(a1, _mm256_loadu_ps(b1 + n), cv);
                _mm256_storeu_ps(crow + n, cv);
            }
            for (int64_t n = N8; n < N; ++n) crow[n] += arow[k] * b0[n] + arow[k + 1] * b1[n];
        }
        for (; k < K; ++k) {
            const __m256 av = _mm256_set1_ps(arow[k]);
            const float* brow = b + k * ldb;
            for (int64_t n = 0; n < N8; n += 8) {
                __m256 cv = _mm256_loadu_ps(crow + n);
                _mm256_storeu_ps(crow + n, _mm256_fmadd_ps(av, _mm256_loadu_ps(brow + n), cv));
            }
            for (int64_t n = N8; n < N; ++n) crow[n] += arow[k] * brow[n];
        }
    }
}

void matmul_tn(const float* a, int64_t lda, const float* b, int64_t ldb, float* c, int64_t ldc,
               int64_t M, int64_t K, int64_t N, bool accumulate) {
    const int64_t N8 = N & ~int64_t(7);
    if (!accumulate)
        for (int64_t k = 0; k < K; ++k)
            for (int64_t n = 0; n < N; ++n) c[k * ldc + n] = 0.0f;
    for (int64_t m = 0; m < M; ++m) {
        const float* arow = a + m * lda;
        const float* brow = b + m * ldb;
        for (int64_t k = 0; k < K; ++k) {
            const __m256 av = _mm256_set1_ps(arow[k]);
            float* crow = c + k * ldc;
            for (int64_t n = 0; n < N8; n += 8) {
                __m256 cv = _mm256_loadu_ps(crow + n);
                _mm256_storeu_ps(crow + n, _mm256_fmadd_ps(av, _mm256_loadu_ps(brow + n), cv));
            }
            for (int64_t n = N8; n < N; ++n) crow[n] += arow[k] * brow[n];
        }
    }
}

void axpy(int64_t n, float alpha, const float* x, float* y) {
    const __m256 av = _mm256_set1_ps(alpha);
    const int64_t n8 = n & ~int64_t(7);
    for (int64_t i = 0; i < n8; i += 8) {
        __m256 yv = _mm256_loadu_ps(y + i);
        _mm256_storeu_ps(y + i, _mm256_fmadd_ps(av, _mm256_loadu_ps(x + i), yv));
    }
    for (int64_t i = n8; i < n; ++i) y[i] += alpha * x[i];
}

void add(int64_t n, const float* x, float* y) {
    const int64_t n8 = n & ~int64_t(7);
    for (int64_t i = 0; i < n8; i += 8)
        _mm256_storeu_ps(y + i, _mm256_add_ps(_mm256_loadu_ps(y + i), _mm256_loadu_ps(x + i)));
    for (int64_t i = n8; i < n; ++i) y[i] += x[i];
}

void scale(int64_t n, float alpha, float* x) {
    const __m256 av = _mm256_set1_ps(alpha);
    const int64_t n8 = n & ~int64_t(7);
    for (int64_t i = 0; i < n8; i += 8)
        _mm256_storeu_ps(x + i, _mm256_mul_ps(av, _mm256_loadu_ps(x + i)));
    for (int64_t i = n8; i < n; ++i) x[i] *= alpha;
}

float dot(int64_t n, const float* x, const float* y) {
    __m256 acc = _mm256_setzero_ps();
    const int64_t n8 = n & ~int64_t(7);
    for (int64_t i = 0; i < n8; i += 8)
        acc = _mm256_fmadd_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i), acc);
    float s = hsum8(acc);
    for (int64_t i = n8; i < n; ++i) s += x[i] * y[i];
    return s;
}

}  // namespace mme::kern::avx2

#endif
