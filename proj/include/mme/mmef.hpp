#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mme/tensor.hpp"

// MMEF tensor files, bit-exact:
//   magic 0x4D 0x4D 0x45 0x46 ("MMEF"), then little-endian:
//   u32 version = 1, u32 ndim, ndim x u32 dims, product(dims) x f32
//   values row-major.
// Container variant: u32 tensor count, then per tensor a length-prefixed
// (u32) UTF-8 name followed by a tensor block in the exact layout above.

namespace mme::mmef {

inline constexpr uint32_t kMagic = 0x46454D4Du;  // "MMEF" little-endian
inline constexpr uint32_t kVersion = 1;

void write_tensor(std::ostream& os, const Tensor& t);
Tensor read_tensor(std::istream& is);

void save_tensor(const std::string& path, const Tensor& t);
Tensor load_tensor(const std::string& path);

using NamedTensors = std::vector<std::pair<std::string, Tensor>>;

void save_container(const std::string& path, const NamedTensors& tensors);
NamedTensors load_container(const std::string& path);

}  // namespace mme::mmef
