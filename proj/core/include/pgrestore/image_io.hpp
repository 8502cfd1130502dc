#ifndef PGRESTORE_IMAGE_IO_HPP
#define PGRESTORE_IMAGE_IO_HPP

#include <stdexcept>
#include <string>

#include "pgrestore/image.hpp"

namespace pgr {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Format is picked from the extension: .pgm (binary P5, 8- or 16-bit,
// promoted to double on read) or .csv (comma-separated rows of doubles,
// printed with enough digits for an exact round trip).
Image read_image(const std::string& path);
void write_image(const std::string& path, const Image& img);

Image read_pgm(const std::string& path);
// maxval 255 or 65535; values are clamped and rounded to the integer range.
void write_pgm(const std::string& path, const Image& img, int maxval = 65535);

Image read_csv(const std::string& path);
void write_csv(const std::string& path, const Image& img);

}  // namespace pgr

#endif
