// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace otsim {

struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> data;  // row-major

    [[nodiscard]] std::uint8_t at(std::size_t x, std::size_t y) const { return data[y * width + x]; }
};

struct ColorImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel
};

struct BinaryImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> bits;  // row-major {0,1}

    [[nodiscard]] std::uint8_t at(std::size_t x, std::size_t y) const { return bits[y * width + x]; }
    std::uint8_t& at(std::size_t x, std::size_t y) { return bits[y * width + x]; }
    bool operator==(const BinaryImage&) const = default;
};

// Binary netpbm. P5 yields `gray` only, P6 yields `color` only.
struct LoadedImage {
    bool is_color = false;
    GrayImage gray;
    ColorImage color;
};

LoadedImage parse_netpbm(const std::string& bytes);
LoadedImage load_image(const std::string& path);

std::uint8_t to_gray(std::uint8_t r, std::uint8_t g, std::uint8_t b);
GrayImage to_gray(const ColorImage& img);
GrayImage as_gray(const LoadedImage& img);

BinaryImage binarize(const GrayImage& img, int threshold);
int otsu_threshold(const GrayImage& img);

std::string encode_pgm(const GrayImage& img);
void save_pgm(const GrayImage& img, const std::string& path);
// {0,1} -> {0,255}
GrayImage to_pgm_levels(const BinaryImage& img);

}  // namespace otsim
