// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#include <catch_amalgamated.hpp>

#include <random>

#include <json.hpp>

#include "otsim/edge.hpp"
#include "otsim/error.hpp"

using namespace otsim;
using Catch::Approx;

namespace {

const OtsParams kParams{};
const LogicEncoding kEnc{};

BinaryImage from_rows(const std::vector<std::string>& rows) {
    BinaryImage b{rows.front().size(), rows.size(), {}};
    for (const auto& r : rows)
        for (char c : r) b.bits.push_back(c == '1' ? 1 : 0);
    return b;
}

// Brute-force edge oracle written directly from neighbor comparisons.
BinaryImage brute_edges(const BinaryImage& img) {
    BinaryImage out = img;
    for (std::size_t y = 0; y < img.height; ++y)
        for (std::size_t x = 0; x < img.width; ++x) {
            const bool h = x > 0 && img.at(x, y) != img.at(x - 1, y);
            const bool v = y > 0 && img.at(x, y) != img.at(x, y - 1);
            out.at(x, y) = (h || v) ? 1 : 0;
        }
    return out;
}

BinaryImage random_image(std::size_t w, std::size_t h, unsigned seed) {
    std::mt19937 rng(seed);
    BinaryImage b{w, h, std::vector<std::uint8_t>(w * h)};
    for (auto& v : b.bits) v = rng() & 1U;
    return b;
}

}  // namespace

TEST_CASE("shift replicates the first column or row", "[edge]") {
    const auto row = from_rows({"01"});
    CHECK(shift(row, ShiftDir::Horizontal).bits == std::vector<std::uint8_t>{0, 0});
    CHECK_THROWS_AS(shift(row, ShiftDir::Vertical), Error);
    const auto uniform = from_rows({"111", "111"});
    CHECK(shift(uniform, ShiftDir::Horizontal) == uniform);
    CHECK(shift(uniform, ShiftDir::Vertical) == uniform);
}

TEST_CASE("vertical shift XOR marks row boundaries", "[edge]") {
    const auto img = from_rows({"1111", "1111", "0000", "1111"});
    const auto x = xor_images(img, shift(img, ShiftDir::Vertical));
    CHECK(x == from_rows({"0000", "0000", "1111", "1111"}));
}

TEST_CASE("reference_edges equals the brute-force oracle", "[edge][property]") {
    for (unsigned seed = 1; seed <= 20; ++seed) {
        const auto img = random_image(7 + seed % 5, 5 + seed % 4, seed);
        CHECK(reference_edges(img) == brute_edges(img));
    }
}

TEST_CASE("OR combination is commutative and idempotent", "[edge][property]") {
    const auto a = random_image(9, 6, 3);
    const auto b = random_image(9, 6, 4);
    CHECK(or_images(a, b) == or_images(b, a));
    CHECK(or_images(a, a) == a);
}

TEST_CASE("reference edges are translation covariant", "[edge][property]") {
    BinaryImage small = random_image(6, 6, 11);
    BinaryImage big{16, 16, std::vector<std::uint8_t>(256, 0)};
    BinaryImage moved = big;
    for (std::size_t y = 0; y < 6; ++y)
        for (std::size_t x = 0; x < 6; ++x) {
            big.at(x + 4, y + 4) = small.at(x, y);
            moved.at(x + 7, y + 5) = small.at(x, y);
        }
    const auto e1 = reference_edges(big);
    const auto e2 = reference_edges(moved);
    for (std::size_t y = 0; y < 16; ++y)
        for (std::size_t x = 0; x < 16; ++x)
            if (x + 3 < 16 && y + 1 < 16) CHECK(e1.at(x, y) == e2.at(x + 3, y + 1));
}

TEST_CASE("XOR stream through the circuit", "[edge]") {
    SECTION("equal bits never fire") {
        const auto r = xor_stream_circuit({0, 1, 1, 0}, {0, 1, 1, 0}, kEnc, kParams);
        CHECK(r.bits == std::vector<std::uint8_t>{0, 0, 0, 0});
    }
    SECTION("0110 xor 0101") {
        const auto r = xor_stream_circuit({0, 1, 1, 0}, {0, 1, 0, 1}, kEnc, kParams);
        CHECK(r.bits == std::vector<std::uint8_t>{0, 0, 1, 1});
        CHECK(r.max_residual < 1e-9);
    }
    SECTION("random 64-bit pair") {
        std::mt19937 rng(64);
        std::vector<std::uint8_t> a(64), b(64), x(64);
        for (std::size_t i = 0; i < 64; ++i) {
            a[i] = rng() & 1U;
            b[i] = rng() & 1U;
            x[i] = a[i] ^ b[i];
        }
        CHECK(xor_stream_circuit(a, b, kEnc, kParams).bits == x);
    }
    SECTION("length mismatch") {
        CHECK_THROWS_AS(xor_stream_circuit({0, 1}, {0}, kEnc, kParams), Error);
    }
}

TEST_CASE("segmentation and jobs do not change the stream", "[edge][property]") {
    std::mt19937 rng(5);
    std::vector<std::uint8_t> a(40), b(40);
    for (auto& v : a) v = rng() & 1U;
    for (auto& v : b) v = rng() & 1U;
    StreamSettings whole;
    StreamSettings split;
    split.segment_size = 7;
    split.jobs = 3;
    const auto r1 = xor_stream_circuit(a, b, kEnc, kParams, whole);
    const auto r2 = xor_stream_circuit(a, b, kEnc, kParams, split);
    CHECK(r1.bits == r2.bits);
    StreamSettings split1 = split;
    split1.jobs = 1;
    CHECK(xor_stream_circuit(a, b, kEnc, kParams, split1).spike_counts == r2.spike_counts);
}

TEST_CASE("circuit edge maps equal the reference", "[edge]") {
    SECTION("uniform image") {
        const BinaryImage img{6, 6, std::vector<std::uint8_t>(36, 1)};
        const auto r = detect_edges(img, kEnc, kParams);
        CHECK(r.edges.bits == std::vector<std::uint8_t>(36, 0));
    }
    SECTION("single dark column") {
        BinaryImage img{8, 8, std::vector<std::uint8_t>(64, 1)};
        for (std::size_t y = 0; y < 8; ++y) img.at(3, y) = 0;
        const auto r = detect_edges(img, kEnc, kParams);
        CHECK(r.edges == brute_edges(img));
        for (std::size_t y = 0; y < 8; ++y)
            for (std::size_t x = 0; x < 8; ++x) CHECK(r.edges.at(x, y) == ((x == 3 || x == 4) ? 1 : 0));
        CHECK(r.vertical.bits == std::vector<std::uint8_t>(64, 0));
    }
    SECTION("random image") {
        const auto img = random_image(10, 9, 42);
        CHECK(mismatches(detect_edges(img, kEnc, kParams).edges, reference_edges(img)).empty());
    }
}

TEST_CASE("mismatch report JSON", "[edge]") {
    const auto j = nlohmann::json::parse(mismatch_report_json({{1, 2}, {3, 0}}, 16));
    CHECK(j["total"] == 16);
    CHECK(j["mismatches"] == nlohmann::json::parse("[[1,2],[3,0]]"));
}

TEST_CASE("gradient rate", "[edge][gradient]") {
    CHECK(gradient_rate(100, 100, kEnc, kParams).rate == 0.0);
    CHECK(gradient_rate(40, 0, kEnc, kParams).rate == 0.0);
    const auto hi = gradient_rate(255, 0, kEnc, kParams);
    CHECK(hi.delta_c == 255.0);
    CHECK(hi.rate > 0.0);
    CHECK(gradient_rate(0, 255, kEnc, kParams).delta_c == 255.0);
    CHECK_THROWS_AS(gradient_rate(300, 0, kEnc, kParams), Error);
}

TEST_CASE("fit_linear", "[edge][gradient]") {
    std::vector<GradientSample> line;
    for (double c : {0.0, 5.0, 20.0, 40.0, 60.0}) line.push_back({c, c > 10.0 ? 2.0 * (c - 10.0) : 0.0});
    const auto f = fit_linear(line);
    CHECK(f.slope == Approx(2.0));
    CHECK(f.floor == Approx(10.0));
    CHECK(f.r2 == Approx(1.0));
    CHECK_THROWS_AS(fit_linear({{10.0, 0.0}, {20.0, 0.0}}), Error);
    CHECK_THROWS_AS(fit_linear({{10.0, 5.0}, {10.0, 6.0}, {10.0, 7.0}}), Error);
}
