#pragma once

#include <cstdint>

// Data-parallel inner loops used by the fusion module, the adapters and the
// toy LM. Scalar reference implementations live in mme::kern::ref; an AVX2
// lane is selected at runtime when the CPU supports it. Both lanes share the
// same contracts and are equivalence-tested against each other.
//
// Matrix conventions (all row-major):
//   matmul_nn: C[MxN] (+)= A[MxK] * B[KxN]
//   matmul_nt: C[MxN] (+)= A[MxK] * B[NxK]^T
//   matmul_tn: C[KxN] (+)= A[MxK]^T * B[MxN]
// Leading dimensions (lda/ldb/ldc) are element strides between rows.
// Per-element reduction order is fixed (ascending k / ascending m), so any
// row partitioning across threads leaves results bit-identical.

namespace mme::kern {

bool avx2_available();

// Test hook: force the scalar lane regardless of CPU support.
void set_force_scalar(bool force);
bool force_scalar();

// Worker threads used by the matmul row partitioning. 1 = no pool.
void set_threads(int n);
int threads();

namespace ref {

template <typename T>
void matmul_nn(const T* a, int64_t lda, const T* b, int64_t ldb, T* c, int64_t ldc,
               int64_t M, int64_t K, int64_t N, bool accumulate);
template <typename T>
void matmul_nt(const T* a, int64_t lda, const T* b, int64_t ldb, T* c, int64_t ldc,
               int64_t M, int64_t K, int64_t N, bool accumulate);
template <typename T>
void matmul_tn(const T* a, int64_t lda, const T* b, int64_t ldb, T* c, int64_t ldc,
               int64_t M, int64_t K, int64_t N, bool accumulate);

void axpy(int64_t n, float alpha, const float* x, float* y);
void add(int64_t n, const float* x, float* y);
void scale(int64_t n, float alpha, float* x);
float dot(int64_t n, const float* x, const float* y);

}  // namespace ref

namespace avx2 {

// Compiled with -mavx2 -mfma in a dedicated translation unit; only called
// after a runtime CPU check.
void matmul_nn(const float* a, int64_t lda, const float* b, int64_t ldb, float* c, int64_t ldc,
               int64_t M, int64_t K, int64_t N, bool accumulate);
void matmul_nt(const float* a, int64_t lda, const float* b, int64_t ldb, float* c, int64_t ldc,
               int64_t M, int64_t K, int64_t N, bool accumulate);
void matmul_tn(const float* a, int64_t lda, const float* b, int64_t ldb, float* c, int64_t ldc,
               int64_t M, int64_t K, int64_t N, bool accumulate);

void axpy(int64_t n, float alpha, const float* x, float* y);
void add(int64_t n, const float* x, float* y);
void scale(int64_t n, float alpha, float* x);
float dot(int64_t n, const float* x, const float* y);

}  // namespace avx2

// Dispatching entry points. Float goes through the selected lane and the
// thread pool; other scalar types (double, used by gradient checks) always
// take the reference lane single-threaded.
void matmul_nn(const float* a, int64_t lda, const float* b, int64_t ldb, float* c, int64_t ldc,
               int64_t M, int64_t K, int64_t N, bool accumulate = false);
void matmul_nt(const float* a, int64_t lda, const float* b, int64_t ldb, float* c, int64_t ldc,
               int64_t M, int64_t K, int64_t N, bool accumulate = false);
void matmul_tn(const float* a, int64_t lda, const float* b, int64_t ldb, float* c, int64_t ldc,
               int64_t M, int64_t K, int64_t N, bool accumulate = false);

inline void matmul_nn(const double* a, int64_t lda, const double* b, int64_t ldb, double* c,
                      int64_t ldc, int64_t M, int64_t K, int64_t N, bool accumulate = false) {
    ref::matmul_nn(a, lda, b, ldb, c, ldc, M, K, N, accumulate);
}
inline void matmul_nt(const double* a, int64_t lda, const double* b, int64_t ldb, double* c,
                      int64_t ldc, int64_t M, int64_t K, int64_t N, bool accumulate = false) {
    ref::matmul_nt(a, lda, b, ldb, c, ldc, M, K, N, accumulate);
}
inline void matmul_tn(const double* a, int64_t lda, const double* b, int64_t ldb, double* c,
                      int64_t ldc, int64_t M, int64_t K, int64_t N, bool accumulate = false) {
    ref::matmul_tn(a, lda, b, ldb, c, ldc, M, K, N, accumulate);
}

void axpy(int64_t n, float alpha, const float* x, float* y);
void add(int64_t n, const float* x, float* y);
void scale(int64_t n, float alpha, float* x);
float dot(int64_t n, const float* x, const float* y);

// Runs fn(begin, end) over [0, n) split into contiguous chunks across the
// worker pool. Partitioning is a pure function of (n, threads), never of
// timing, so parallel runs stay deterministic.
void parallel_for(int64_t n, void (*fn)(int64_t, int64_t, void*), void* ctx);

template <typename F>
void parallel_chunks(int64_t n, F&& f) {
    struct Ctx {
        F* f;
    } ctx{&f};
    parallel_for(
        n, [](int64_t b, int64_t e, void* c) { (*static_cast<Ctx*>(c)->f)(b, e); }, &ctx);
}

}  // namespace mme::kern
