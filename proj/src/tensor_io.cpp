#include "lsm/tensor_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace lsm {

namespace {

void put_u32le(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32le(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw std::runtime_error("LFT1: truncated header");
    return static_cast<std::uint32_t>(b[0]) |
           (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f32le(std::ostream& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32le(out, bits);
}

float get_f32le(std::istream& in) {
    std::uint32_t bits = get_u32le(in);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

std::ifstream open_binary_in(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    return f;
}

std::ofstream open_binary_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    return f;
}

// Skips PNM whitespace and '#' comment lines, then reads one unsigned int.
int read_pnm_int(std::istream& in) {
    int ch = in.get();
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
        } else if (!std::isspace(ch)) {
            break;
        }
        ch = in.get();
    }
    if (ch == EOF || !std::isdigit(ch)) {
        throw std::runtime_error("PNM: malformed header");
    }
    int value = 0;
    while (ch != EOF && std::isdigit(ch)) {
        value = value * 10 + (ch - '0');
        ch = in.get();
    }
    return value;
}

unsigned char to_byte(float v) {
    float c = std::clamp(v, 0.0f, 255.0f);
    return static_cast<unsigned char>(std::lround(c));
}

} // namespace

void write_lft1(std::ostream& out, const Tensor& t) {
    out.write("LFT1", 4);
    put_u32le(out, static_cast<std::uint32_t>(t.channels()));
    put_u32le(out, static_cast<std::uint32_t>(t.height()));
    put_u32le(out, static_cast<std::uint32_t>(t.width()));
    for (float v : t.data()) put_f32le(out, v);
    if (!out) throw std::runtime_error("LFT1: write failed");
}

void write_lft1(const std::string& path, const Tensor& t) {
    auto f = open_binary_out(path);
    write_lft1(f, t);
}

Tensor read_lft1(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "LFT1", 4) != 0) {
        throw std::runtime_error("LFT1: bad magic");
    }
    std::uint32_t c = get_u32le(in);
    std::uint32_t h = get_u32le(in);
    std::uint32_t w = get_u32le(in);
    if (c == 0 || h == 0 || w == 0) {
        throw std::runtime_error("LFT1: zero dimension");
    }
    Tensor t(static_cast<int>(c), static_cast<int>(h), static_cast<int>(w));
    for (float& v : t.data()) {
        v = get_f32le(in);
        if (!in) throw std::runtime_error("LFT1: truncated data");
    }
    if (!t.all_finite()) throw std::runtime_error("LFT1: non-finite values");
    return t;
}

Tensor read_lft1(const std::string& path) {
    auto f = open_binary_in(path);
    return read_lft1(f);
}

Tensor read_image(const std::string& path) {
    auto f = open_binary_in(path);
    char magic[2];
    f.read(magic, 2);
    if (!f || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6')) {
        throw std::runtime_error("image: expected binary PGM (P5) or PPM (P6): " + path);
    }
    int channels = magic[1] == '5' ? 1 : 3;
    int width = read_pnm_int(f);
    int height = read_pnm_int(f);
    int maxval = read_pnm_int(f);
    if (width < 1 || height < 1 || maxval != 255) {
        throw std::runtime_error("image: unsupported PNM header in " + path);
    }
    std::vector<unsigned char> row(static_cast<std::size_t>(width) * channels);
    Tensor img(channels, height, width);
    for (int y = 0; y < height; ++y) {
        f.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size()));
        if (!f) throw std::runtime_error("image: truncated pixel data in " + path);
        for (int x = 0; x < width; ++x) {
            for (int c = 0; c < channels; ++c) {
                img.at(c, y, x) = static_cast<float>(row[static_cast<std::size_t>(x) * channels + c]);
            }
        }
    }
    return img;
}

void write_image(const std::string& path, const Tensor& img) {
    if (img.channels() != 1 && img.channels() != 3) {
        throw std::invalid_argument("write_image: needs 1 (PGM) or 3 (PPM) channels");
    }
    auto f = open_binary_out(path);
    f << (img.channels() == 1 ? "P5" : "P6") << "\n"
      << img.width() << " " << img.height() << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(img.width()) * img.channels());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            for (int c = 0; c < img.channels(); ++c) {
                row[static_cast<std::size_t>(x) * img.channels() + c] = to_byte(img.at(c, y, x));
            }
        }
        f.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    if (!f) throw std::runtime_error("image: write failed: " + path);
}

void write_mask_pgm(const std::string& path, const Mask& mask) {
    Tensor img(1, mask.height, mask.width);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            img.at(0, y, x) = mask.at(y, x) ? 255.0f : 0.0f;
        }
    }
    write_image(path, img);
}

} // namespace lsm
