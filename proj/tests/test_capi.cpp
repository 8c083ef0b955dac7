// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "otsim_c.h"

namespace fs = std::filesystem;

namespace {

struct Config {
    ots_config* p = nullptr;
    Config() { REQUIRE(ots_config_create(&p) == OTS_OK); }
    ~Config() { ots_config_destroy(p); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const char* name) {
    const auto dir = fs::temp_directory_path() / "otsim_capi_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("status codes and last error", "[capi]") {
    Config cfg;
    CHECK(ots_config_set(cfg.p, "nope", "1") == OTS_ERR_INVALID_ARGUMENT);
    CHECK(std::string(ots_last_error()).find("nope") != std::string::npos);
    CHECK(ots_config_set(cfg.p, "ots.v_hold", "9") == OTS_ERR_INVALID_ARGUMENT);
    // A rejected value leaves the config untouched.
    ots_circuit* c = nullptr;
    CHECK(ots_circuit_gate(cfg.p, "and", &c) == OTS_OK);
    ots_circuit_destroy(c);
    CHECK(ots_config_create(nullptr) == OTS_ERR_INVALID_ARGUMENT);
    CHECK(std::string(ots_status_name(OTS_ERR_SINGULAR)) == "singular circuit");
    double v = 0.0;
    CHECK(ots_parse_si("4.7k", &v) == OTS_OK);
    CHECK(v == 4700.0);
    CHECK(ots_parse_si("4.7kk", &v) == OTS_ERR_PARSE);
}

TEST_CASE("circuit parse, simulate and read back", "[capi]") {
    Config cfg;
    ots_circuit* c = nullptr;
    REQUIRE(ots_circuit_parse(cfg.p, "V V1 in 0 dc 1\nR R1 in out 1k\nC C1 out 0 1n\n", &c) == OTS_OK);
    CHECK(ots_circuit_node_count(c) == 3);
    CHECK(ots_circuit_element_count(c) == 3);
    ots_trace* t = nullptr;
    REQUIRE(ots_transient(cfg.p, c, 2e-6, &t) == OTS_OK);
    CHECK(ots_trace_samples(t) == 201);
    CHECK(ots_trace_max_residual(t) < 1e-9);
    const double* data = nullptr;
    std::size_t n = 0;
    REQUIRE(ots_trace_voltage(t, "out", &data, &n) == OTS_OK);
    CHECK(n == 201);
    CHECK(std::abs(data[100] - (1.0 - std::exp(-1.0))) < 0.01);
    CHECK(ots_trace_voltage(t, "missing", &data, &n) == OTS_ERR_INVALID_ARGUMENT);
    ots_trace_destroy(t);
    ots_circuit_destroy(c);

    CHECK(ots_circuit_parse(cfg.p, "R R1 a 0 1k\nR R2 a 0 x\n", &c) == OTS_ERR_PARSE);
    CHECK(std::string(ots_last_error()).find("line 2") != std::string::npos);
}

TEST_CASE("singular circuits map to their status", "[capi]") {
    Config cfg;
    ots_circuit* c = nullptr;
    REQUIRE(ots_circuit_parse(cfg.p, "V V1 a 0 dc 1\nV V2 a 0 dc 2\n", &c) == OTS_OK);
    ots_trace* t = nullptr;
    CHECK(ots_transient(cfg.p, c, 1e-6, &t) == OTS_ERR_SINGULAR);
    ots_circuit_destroy(c);
}

TEST_CASE("gate commands", "[capi]") {
    Config cfg;
    char* json = nullptr;
    int ok = 0;
    REQUIRE(ots_cmd_gate_table(cfg.p, "xor", &json, &ok) == OTS_OK);
    CHECK(ok == 1);
    CHECK(std::string(json).find("\"kind\": \"xor\"") != std::string::npos);
    ots_string_free(json);

    const int in[] = {1, 0};
    const auto wave = scratch("xor_wave.csv");
    REQUIRE(ots_cmd_gate_eval(cfg.p, "xor", in, 2, wave.string().c_str(), &json, &ok) == OTS_OK);
    CHECK(ok == 1);
    ots_string_free(json);
    CHECK(slurp(wave).rfind("t,", 0) == 0);
    CHECK(ots_cmd_gate_table(cfg.p, "xnor", &json, &ok) == OTS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("energy command", "[capi]") {
    Config cfg;
    char* text = nullptr;
    char* json = nullptr;
    REQUIRE(ots_cmd_energy(cfg.p, 512, 512, 16e-9, &text, &json) == OTS_OK);
    CHECK(std::string(text).find("Xeon") != std::string::npos);
    CHECK(std::string(json).find("\"op_count\": 4718592") != std::string::npos);
    ots_string_free(text);
    ots_string_free(json);
}

TEST_CASE("iv and oscillate commands", "[capi]") {
    Config cfg;
    int snap = 0;
    const auto iv = scratch("iv.csv");
    REQUIRE(ots_cmd_iv(cfg.p, nullptr, 6.0, 20e-6, iv.string().c_str(), &snap) == OTS_OK);
    CHECK(snap == 1);
    CHECK(slurp(iv).rfind("v,i\n", 0) == 0);
    std::size_t spikes = 0;
    double rate = 0.0;
    REQUIRE(ots_cmd_oscillate(cfg.p, 10.0, 50e-6, nullptr, &spikes, &rate) == OTS_OK);
    CHECK(spikes >= 10);
    CHECK(rate > 0.0);
}

TEST_CASE("seed circuits writes every template", "[capi]") {
    Config cfg;
    const auto dir = fs::temp_directory_path() / "otsim_capi_seed";
    fs::remove_all(dir);
    REQUIRE(ots_seed_circuits(cfg.p, dir.string().c_str()) == OTS_OK);
    for (const char* name : {"and", "or", "nor", "nand", "xor", "half_adder", "full_adder", "dcaap", "oscillator"})
        CHECK(fs::exists(dir / (std::string(name) + ".net")));
    ots_circuit* c = nullptr;
    CHECK(ots_circuit_load(cfg.p, (dir / "nand.net").string().c_str(), &c) == OTS_OK);
    ots_circuit_destroy(c);
    CHECK(ots_circuit_load(cfg.p, (dir / "missing.net").string().c_str(), &c) == OTS_ERR_IO);
}
