#include "wavetwin/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <cctype>
#include <stdexcept>

namespace wavetwin {
namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    return f;
}

bool ends_with(const std::string& s, std::string_view suffix) {
    if (s.size() < suffix.size()) return false;
    return std::equal(suffix.rbegin(), suffix.rend(), s.rbegin(), [](char a, char b) {
        return std::tolower(static_cast<unsigned char>(a)) == b;
    });
}

std::uint8_t to_byte(double v) {
    if (!std::isfinite(v)) return 0;
    return static_cast<std::uint8_t>(std::clamp(std::lround(v * 255.0), 0L, 255L));
}

}  // namespace

MultiChannelMap read_png(const std::string& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str()))
        throw std::runtime_error("cannot read PNG '" + path + "': " + image.message);
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    const int channels = color ? 3 : 1;
    std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw std::runtime_error("cannot decode PNG '" + path + "': " + msg);
    }
    const int rows = static_cast<int>(image.height);
    const int cols = static_cast<int>(image.width);
    std::vector<FeatureMap> maps(channels, FeatureMap(rows, cols));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            for (int k = 0; k < channels; ++k)
                maps[k](r, c) = buffer[(static_cast<std::size_t>(r) * cols + c) * channels + k] / 255.0;
    return MultiChannelMap(std::move(maps));
}

MultiChannelMap read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    auto next_token = [&]() {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
        throw std::runtime_error("truncated PGM header in '" + path + "'");
    };
    const std::string magic = next_token();
    if (magic != "P2" && magic != "P5") throw std::runtime_error("'" + path + "' is not a P2/P5 PGM");
    const int cols = std::stoi(next_token());
    const int rows = std::stoi(next_token());
    const int maxval = std::stoi(next_token());
    if (cols <= 0 || rows <= 0 || maxval <= 0 || maxval > 65535)
        throw std::runtime_error("invalid PGM header in '" + path + "'");
    FeatureMap out(rows, cols);
    if (magic == "P2") {
        for (auto& v : out.data()) v = std::stod(next_token()) / maxval;
    } else {
        in.get();  // single whitespace after maxval
        const int bytes = maxval < 256 ? 1 : 2;
        std::vector<unsigned char> raw(static_cast<std::size_t>(rows) * cols * bytes);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (in.gcount() != static_cast<std::streamsize>(raw.size()))
            throw std::runtime_error("truncated PGM data in '" + path + "'");
        for (std::size_t i = 0; i < out.size(); ++i) {
            const int v = bytes == 1 ? raw[i] : (raw[2 * i] << 8) | raw[2 * i + 1];
            out.data()[i] = static_cast<double>(v) / maxval;
        }
    }
    return MultiChannelMap({out});
}

MultiChannelMap read_image(const std::string& path) {
    if (ends_with(path, ".png")) return read_png(path);
    if (ends_with(path, ".pgm")) return read_pgm(path);
    throw std::runtime_error("unsupported image format '" + path + "' (expected .png or .pgm)");
}

void write_png(const std::string& path, const FeatureMap& x, double lo, double hi) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(x.cols());
    image.height = static_cast<png_uint_32>(x.rows());
    image.format = PNG_FORMAT_GRAY;
    const double span = hi > lo ? hi - lo : 1.0;
    std::vector<png_byte> buffer(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) buffer[i] = to_byte((x.data()[i] - lo) / span);
    if (!png_image_write_to_file(&image, path.c_str(), 0, buffer.data(), 0, nullptr))
        throw std::runtime_error("cannot write PNG '" + path + "': " + image.message);
}

void write_png_signed(const std::string& path, const FeatureMap& x) {
    const double a = max_abs(x);
    write_png(path, x, a > 0 ? -a : -1.0, a > 0 ? a : 1.0);
}

void write_png_unsigned(const std::string& path, const FeatureMap& x) {
    const double a = max_abs(x);
    write_png(path, x, 0.0, a > 0 ? a : 1.0);
}

void write_pgm(const std::string& path, const FeatureMap& x) {
    auto f = open_file(path, "wb");
    std::fprintf(f.get(), "P5\n%d %d\n255\n", x.cols(), x.rows());
    std::vector<unsigned char> raw(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) raw[i] = to_byte(x.data()[i]);
    if (std::fwrite(raw.data(), 1, raw.size(), f.get()) != raw.size())
        throw std::runtime_error("short write to '" + path + "'");
}

std::string format_csv(const FeatureMap& x) {
    std::string out;
    char buf[40];
    for (int r = 0; r < x.rows(); ++r) {
        for (int c = 0; c < x.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", x(r, c));
            if (c) out += ',';
            out += buf;
        }
        out += "\r\n";
    }
    return out;
}

void write_csv(const std::string& path, const FeatureMap& x) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << format_csv(x);
}

}  // namespace wavetwin
