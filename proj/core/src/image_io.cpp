#include "pgrestore/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

namespace pgr {

namespace {

bool ends_with(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

// Skips whitespace and '#' comment lines in a PGM header.
int next_header_int(std::istream& in, const std::string& path) {
    int c;
    while ((c = in.peek()) != EOF) {
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    long v;
    if (!(in >> v) || v < 0) throw IoError(path + ": malformed PGM header");
    if (v > (1L << 20)) throw IoError(path + ": PGM dimension overflow");
    return static_cast<int>(v);
}

}  // namespace

Image read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open for reading");
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (m0 != 'P' || m1 != '5') throw IoError(path + ": not a binary PGM (P5) file");
    int w = next_header_int(in, path);
    int h = next_header_int(in, path);
    int maxval = next_header_int(in, path);
    if (w < 1 || h < 1) throw IoError(path + ": empty PGM");
    if (maxval < 1 || maxval > 65535) throw IoError(path + ": bad PGM maxval");
    in.get();  // single whitespace after maxval

    Image img(w, h);
    const std::size_t n = img.size();
    if (maxval < 256) {
        std::vector<std::uint8_t> buf(n);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n));
        if (!in) throw IoError(path + ": truncated PGM data");
        for (std::size_t i = 0; i < n; ++i) img.data[i] = buf[i];
    } else {
        std::vector<std::uint8_t> buf(2 * n);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(2 * n));
        if (!in) throw IoError(path + ": truncated PGM data");
        for (std::size_t i = 0; i < n; ++i)
            img.data[i] = 256.0 * buf[2 * i] + buf[2 * i + 1];  // big-endian
    }
    return img;
}

void write_pgm(const std::string& path, const Image& img, int maxval) {
    if (maxval != 255 && maxval != 65535)
        throw std::invalid_argument("write_pgm: maxval must be 255 or 65535");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << "P5\n" << img.width << " " << img.height << "\n" << maxval << "\n";
    auto quant = [&](double v) {
        long q = std::lround(v);
        return std::clamp(q, 0L, static_cast<long>(maxval));
    };
    if (maxval == 255) {
        for (double v : img.data) {
            std::uint8_t b = static_cast<std::uint8_t>(quant(v));
            out.write(reinterpret_cast<const char*>(&b), 1);
        }
    } else {
        for (double v : img.data) {
            long q = quant(v);
            std::uint8_t b[2] = {static_cast<std::uint8_t>(q >> 8),
                                 static_cast<std::uint8_t>(q & 0xff)};
            out.write(reinterpret_cast<const char*>(b), 2);
        }
    }
    if (!out) throw IoError(path + ": write failure");
}

Image read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open for reading");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw IoError(path + ": malformed CSV value '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw IoError(path + ": ragged CSV rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty() || rows.front().empty()) throw IoError(path + ": empty CSV image");
    Image img(static_cast<int>(rows.front().size()), static_cast<int>(rows.size()));
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) img.at(x, y) = rows[y][x];
    return img;
}

void write_csv(const std::string& path, const Image& img) {
    std::ofstream out(path);
    if (!out) throw IoError(path + ": cannot open for writing");
    out.precision(std::numeric_limits<double>::max_digits10);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            if (x) out << ',';
            out << img.at(x, y);
        }
        out << '\n';
    }
    if (!out) throw IoError(path + ": write failure");
}

Image read_image(const std::string& path) {
    if (ends_with(path, ".pgm")) return read_pgm(path);
    if (ends_with(path, ".csv")) return read_csv(path);
    throw IoError(path + ": unsupported image format (expected .pgm or .csv)");
}

void write_image(const std::string& path, const Image& img) {
    if (ends_with(path, ".pgm")) {
        write_pgm(path, img);
    } else if (ends_with(path, ".csv")) {
        write_csv(path, img);
    } else {
        throw IoError(path + ": unsupported image format (expected .pgm or .csv)");
    }
}

}  // namespace pgr
