#include <bgqed/config.hpp>

#include <gtest/gtest.h>

#include <string>

using namespace bgqed;

namespace {

std::string cfg(const std::string& name) { return std::string(BGQED_CONFIGS) + "/" + name; }

std::string error_of(const std::string& path) {
    try {
        load_config(path);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(Config, SampleConfigsLoad) {
    for (const char* f : {"device.json", "device_computed.json", "liu.json", "uniform.json", "emission.json",
                          "crossing.json", "fit/device.json"}) {
        auto c = load_config(cfg(f));
        EXPECT_NO_THROW(c.model().validate()) << f;
    }
}

TEST(Config, HoppingSources) {
    auto ref = load_config(cfg("device.json")).model();
    EXPECT_EQ(ref.hoppings.j, reference_hoppings().j);
    auto comp = load_config(cfg("device_computed.json")).model();
    EXPECT_NEAR(comp.hoppings.j[0], 9.328443, 1e-5);
}

TEST(Config, ErrorsNameTheField) {
    EXPECT_NE(error_of(cfg("invalid/missing_g.json")).find("qubits[0].g"), std::string::npos);
    EXPECT_NE(error_of(cfg("invalid/bad_site.json")).find("qubits[0].site"), std::string::npos);
    EXPECT_NE(error_of(cfg("invalid/unknown_field.json")).find("losses.kapa0"), std::string::npos);
    EXPECT_NE(error_of(cfg("invalid/wrong_type.json")).find("n_cells"), std::string::npos);
    EXPECT_NE(error_of(cfg("invalid/bad_sweep.json")).find("sweep"), std::string::npos);
    EXPECT_NE(error_of(cfg("invalid/syntax.json")).find("line 3"), std::string::npos);
    EXPECT_NE(error_of(cfg("does_not_exist.json")).find("does_not_exist.json"), std::string::npos);
}

TEST(Config, JsonRoundTrip) {
    for (const char* f : {"device.json", "emission.json", "liu.json"}) {
        auto c = load_config(cfg(f));
        auto j = to_json(c);
        auto back = config_from_json(j);
        EXPECT_EQ(to_json(back).dump(), j.dump()) << f;
    }
}

TEST(Config, DefaultsFilled) {
    auto c = parse_config(R"({"qubits": []})");
    EXPECT_EQ(c.n_cells, 16);
    EXPECT_EQ(c.band, 2);
    EXPECT_EQ(c.hopping_source, "computed");
    EXPECT_EQ(c.sweep.points, 1501);
}

TEST(Config, InlineValidation) {
    EXPECT_THROW(parse_config(R"({"n_cells": 0})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"hopping_source": "magic"})"), ConfigError);
    EXPECT_THROW(parse_config(R"([1, 2])"), ConfigError);
    EXPECT_THROW(parse_config(R"({"qubits": [{"site": 3, "omega01": 7, "g": 0.5, "delta": 0.3},
                                             {"site": 3, "omega01": 7.2, "g": 0.5, "delta": 0.3}]})"),
                 ConfigError);
}
