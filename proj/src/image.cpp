// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otsim Authors

#include "otsim/image.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "otsim/error.hpp"

namespace otsim {

namespace {

class HeaderReader {
public:
    explicit HeaderReader(const std::string& b) : b_(b) {}

    // Skips whitespace and '#' comments, then reads one unsigned field.
    std::size_t field(const char* what) {
        skip();
        std::size_t v = 0;
        std::size_t digits = 0;
        while (pos_ < b_.size() && std::isdigit(static_cast<unsigned char>(b_[pos_]))) {
            v = v * 10 + static_cast<std::size_t>(b_[pos_] - '0');
            if (v > (std::size_t{1} << 31)) fail(ErrorCode::ImageHeader, std::string(what) + " too large");
            ++pos_;
            ++digits;
        }
        if (digits == 0) fail(ErrorCode::ImageHeader, std::string("missing ") + what);
        return v;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    std::size_t raster_start() {
        if (pos_ >= b_.size() || !std::isspace(static_cast<unsigned char>(b_[pos_])))
            fail(ErrorCode::ImageHeader, "missing whitespace after maxval");
        return pos_ + 1;
    }

private:
    void skip() {
        while (pos_ < b_.size()) {
            const char c = b_[pos_];
            if (c == '#') {
                while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    const std::string& b_;
    std::size_t pos_ = 2;
};

}  // namespace

LoadedImage parse_netpbm(const std::string& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
        fail(ErrorCode::ImageHeader, "not a binary PGM (P5) or PPM (P6) file");
    const bool color = bytes[1] == '6';
    HeaderReader hr(bytes);
    const std::size_t w = hr.field("width");
    const std::size_t h = hr.field("height");
    const std::size_t maxval = hr.field("maxval");
    if (w == 0 || h == 0) fail(ErrorCode::ImageHeader, "image dimensions must be positive");
    if (maxval != 255) fail(ErrorCode::ImageMaxval, "maxval " + std::to_string(maxval) + " unsupported (need 255)");
    const std::size_t start = hr.raster_start();
    const std::size_t need = w * h * (color ? 3 : 1);
    const std::size_t have = bytes.size() > start ? bytes.size() - start : 0;
    if (have < need)
        fail(ErrorCode::ImageTruncated,
             "raster truncated: expected " + std::to_string(need) + " bytes, got " + std::to_string(have));
    LoadedImage out;
    out.is_color = color;
    const auto* p = reinterpret_cast<const std::uint8_t*>(bytes.data()) + start;
    if (color) out.color = ColorImage{w, h, std::vector<std::uint8_t>(p, p + need)};
    else out.gray = GrayImage{w, h, std::vector<std::uint8_t>(p, p + need)};
    return out;
}

LoadedImage load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_netpbm(ss.str());
}

std::uint8_t to_gray(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const double y = 0.299 * r + 0.587 * g + 0.114 * b;
    return static_cast<std::uint8_t>(std::clamp(std::lround(y), 0L, 255L));
}

GrayImage to_gray(const ColorImage& img) {
    GrayImage g{img.width, img.height, std::vector<std::uint8_t>(img.width * img.height)};
    for (std::size_t i = 0; i < g.data.size(); ++i)
        g.data[i] = to_gray(img.rgb[3 * i], img.rgb[3 * i + 1], img.rgb[3 * i + 2]);
    return g;
}

GrayImage as_gray(const LoadedImage& img) { return img.is_color ? to_gray(img.color) : img.gray; }

BinaryImage binarize(const GrayImage& img, int threshold) {
    BinaryImage b{img.width, img.height, std::vector<std::uint8_t>(img.data.size())};
    for (std::size_t i = 0; i < img.data.size(); ++i) b.bits[i] = img.data[i] >= threshold ? 1 : 0;
    return b;
}

int otsu_threshold(const GrayImage& img) {
    require(!img.data.empty(), "empty image");
    std::array<double, 256> hist{};
    for (auto v : img.data) hist[v] += 1.0;
    const double total = static_cast<double>(img.data.size());
    double sum_all = 0.0;
    for (int i = 0; i < 256; ++i) sum_all += i * hist[i];
    double w0 = 0.0, sum0 = 0.0, best = -1.0;
    int best_t = 0;
    // Threshold t splits {v < t} from {v >= t}, matching binarize().
    for (int t = 1; t < 256; ++t) {
        w0 += hist[t - 1];
        sum0 += (t - 1) * hist[t - 1];
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double m0 = sum0 / w0;
        const double m1 = (sum_all - sum0) / w1;
        const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
        if (between > best) {
            best = between;
            best_t = t;
        }
    }
    return best < 0.0 ? 128 : best_t;
}

std::string encode_pgm(const GrayImage& img) {
    require(img.data.size() == img.width * img.height, "image data size mismatch");
    std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.data.data()), img.data.size());
    return out;
}

void save_pgm(const GrayImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot write '" + path + "'");
    const std::string s = encode_pgm(img);
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
    if (!out) fail(ErrorCode::Io, "write failed for '" + path + "'");
}

GrayImage to_pgm_levels(const BinaryImage& img) {
    GrayImage g{img.width, img.height, std::vector<std::uint8_t>(img.bits.size())};
    for (std::size_t i = 0; i < img.bits.size(); ++i) g.data[i] = img.bits[i] ? 255 : 0;
    return g;
}

}  // namespace otsim
