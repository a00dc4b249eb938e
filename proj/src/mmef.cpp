#include "mme/mmef.hpp"

#include <cstring>
#include <fstream>
#include <limits>

#include "mme/errors.hpp"

namespace mme::mmef {

namespace {

// The format is little-endian by definition; these assume a little-endian
// host, which covers every target this project builds for.
void put_u32(std::ostream& os, uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), 4);
}

uint32_t get_u32(std::istream& is) {
    uint32_t v = 0;
    if (!is.read(reinterpret_cast<char*>(&v), 4)) throw IoError("truncated MMEF stream");
    return v;
}

}  // namespace

void write_tensor(std::ostream& os, const Tensor& t) {
    put_u32(os, kMagic);
    put_u32(os, kVersion);
    put_u32(os, static_cast<uint32_t>(t.dims.size()));
    for (int64_t d : t.dims) put_u32(os, static_cast<uint32_t>(d));
    os.write(reinterpret_cast<const char*>(t.data.data()),
             static_cast<std::streamsize>(t.data.size() * sizeof(float)));
    if (!os) throw IoError("failed writing MMEF tensor");
}

Tensor read_tensor(std::istream& is) {
    if (get_u32(is) != kMagic) throw IoError("bad MMEF magic");
    const uint32_t version = get_u32(is);
    if (version != kVersion) throw IoError("unsupported MMEF version " + std::to_string(version));
    const uint32_t ndim = get_u32(is);
    if (ndim == 0 || ndim > 8) throw IoError("bad MMEF ndim " + std::to_string(ndim));
    std::vector<int64_t> dims(ndim);
    uint64_t numel = 1;
    for (auto& d : dims) {
        const uint32_t v = get_u32(is);
        if (v == 0) throw IoError("zero MMEF dim");
        d = v;
        numel *= v;
        if (numel > (1ull << 31)) throw IoError("MMEF tensor too large");
    }
    std::vector<float> data(numel);
    if (!is.read(reinterpret_cast<char*>(data.data()),
                 static_cast<std::streamsize>(numel * sizeof(float))))
        throw IoError("truncated MMEF data");
    return Tensor(std::move(dims), std::move(data));
}

void save_tensor(const std::string& path, const Tensor& t) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open for write: " + path);
    write_tensor(os, t);
    if (!os.flush()) throw IoError("failed writing: " + path);
}

Tensor load_tensor(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path);
    return read_tensor(is);
}

void save_container(const std::string& path, const NamedTensors& tensors) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open for write: " + path);
    put_u32(os, static_cast<uint32_t>(tensors.size()));
    for (const auto& [name, t] : tensors) {
        put_u32(os, static_cast<uint32_t>(name.size()));
        os.write(name.data(), static_cast<std::streamsize>(name.size()));
        write_tensor(os, t);
    }
    if (!os.flush()) throw IoError("failed writing: " + path);
}

NamedTensors load_container(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path);
    const uint32_t count = get_u32(is);
    if (count > 100000) throw IoError("implausible container tensor count");
    NamedTensors out;
    out.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        const uint32_t len = get_u32(is);
        if (len > 4096) throw IoError("implausible tensor name length");
        std::string name(len, '\0');
        if (!is.read(name.data(), len)) throw IoError("truncated container name");
        out.emplace_back(std::move(name), read_tensor(is));
    }
    return out;
}

}  // namespace mme::mmef
