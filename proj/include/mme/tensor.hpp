#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace mme {

// Dense row-major tensor. Carries all modality features and module outputs.
template <typename T>
struct TensorT {
    std::vector<int64_t> dims;
    std::vector<T> data;

    TensorT() = default;
    explicit TensorT(std::vector<int64_t> d) : dims(std::move(d)) {
        data.assign(static_cast<size_t>(numel_of(dims)), T(0));
    }
    TensorT(std::vector<int64_t> d, std::vector<T> v) : dims(std::move(d)), data(std::move(v)) {
        if (static_cast<int64_t>(data.size()) != numel_of(dims))
            throw std::invalid_argument("tensor data length does not match dims");
    }

    static int64_t numel_of(const std::vector<int64_t>& d) {
        int64_t n = 1;
        for (int64_t x : d) {
            if (x <= 0) throw std::invalid_argument("tensor dims must be positive");
            n *= x;
        }
        return n;
    }

    int64_t numel() const { return static_cast<int64_t>(data.size()); }
    int ndim() const { return static_cast<int>(dims.size()); }
    int64_t dim(int i) const { return dims.at(static_cast<size_t>(i)); }

    // 2-D accessors; most module contracts are [rows x cols]
    int64_t rows() const { return dims.at(0); }
    int64_t cols() const {
        int64_t c = 1;
        for (size_t i = 1; i < dims.size(); ++i) c *= dims[i];
        return c;
    }
    T* row(int64_t r) { return data.data() + r * cols(); }
    const T* row(int64_t r) const { return data.data() + r * cols(); }
    T& at(int64_t r, int64_t c) { return data[r * cols() + c]; }
    const T& at(int64_t r, int64_t c) const { return data[r * cols() + c]; }

    bool all_finite() const {
        for (T v : data)
            if (!std::isfinite(static_cast<double>(v))) return false;
        return true;
    }

    bool same_shape(const TensorT& o) const { return dims == o.dims; }

    std::string shape_str() const {
        std::string s = "[";
        for (size_t i = 0; i < dims.size(); ++i) {
            if (i) s += "x";
            s += std::to_string(dims[i]);
        }
        return s + "]";
    }
};

using Tensor = TensorT<float>;

template <typename T>
TensorT<T> zeros_like(const TensorT<T>& t) {
    return TensorT<T>(t.dims);
}

}  // namespace mme
