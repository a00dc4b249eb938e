#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mme/errors.hpp"
#include "mme/mmef.hpp"

using namespace mme;

TEST_CASE("MMEF single tensor golden bytes") {
    Tensor t({2, 2}, {1.0f, 2.0f, 3.0f, 4.0f});
    std::ostringstream os(std::ios::binary);
    mmef::write_tensor(os, t);
    const std::string bytes = os.str();

    // magic 'M','M','E','F', version 1, ndim 2, dims 2,2, then 4 f32
    const unsigned char expect_head[] = {0x4D, 0x4D, 0x45, 0x46, 1, 0, 0, 0,
                                         2,    0,    0,    0,    2, 0, 0, 0,
                                         2,    0,    0,    0};
    REQUIRE(bytes.size() == sizeof(expect_head) + 4 * sizeof(float));
    CHECK(std::memcmp(bytes.data(), expect_head, sizeof(expect_head)) == 0);
    float vals[4];
    std::memcpy(vals, bytes.data() + sizeof(expect_head), sizeof(vals));
    for (int i = 0; i < 4; ++i) CHECK(vals[i] == t.data[i]);

    std::istringstream is(bytes, std::ios::binary);
    Tensor back = mmef::read_tensor(is);
    CHECK(back.dims == t.dims);
    CHECK(back.data == t.data);
}

TEST_CASE("MMEF container round trip and corruption") {
    const auto dir = std::filesystem::temp_directory_path() / "mmef_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "c.mmefc").string();

    mmef::NamedTensors ts;
    ts.emplace_back("alpha", Tensor({3}, {1, 2, 3}));
    ts.emplace_back("beta.w", Tensor({2, 3}, {0, 1, 2, 3, 4, 5}));
    mmef::save_container(path, ts);

    auto back = mmef::load_container(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].first == "alpha");
    CHECK(back[1].first == "beta.w");
    CHECK(back[1].second.data == ts[1].second.data);

    // truncated file rejects cleanly
    std::ofstream trunc(path, std::ios::binary | std::ios::trunc);
    trunc.write("\x02\x00\x00\x00\x05", 5);
    trunc.close();
    CHECK_THROWS_AS(mmef::load_container(path), IoError);

    CHECK_THROWS_AS(mmef::load_tensor((dir / "missing.mmef").string()), IoError);
}
