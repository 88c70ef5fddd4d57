#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "diytab/raster.hpp"

namespace diytab {

class IoError : public Error {
public:
    using Error::Error;
};

/// 8-bit PNG, decoded to 1 channel for gray sources and 3 for color
/// (alpha and palettes are flattened by libpng).
Raster read_png(const std::string& path);
void write_png(const std::string& path, const Raster& image);
std::vector<std::uint8_t> encode_png(const Raster& image);

std::vector<std::uint8_t> encode_jpeg(const Raster& image, int quality = 80);

struct Y4mHeader {
    int width = 0;
    int height = 0;
    std::string frame_rate = "30:1";
    std::string colorspace = "420jpeg";
};

/// Reads the luma plane of each frame of a YUV4MPEG2 stream.
class Y4mReader {
public:
    explicit Y4mReader(const std::string& path);
    const Y4mHeader& header() const { return header_; }
    std::optional<Raster> next();

private:
    std::ifstream in_;
    Y4mHeader header_;
    std::size_t chroma_bytes_ = 0;
};

/// Writes gray frames as 4:2:0 with neutral chroma.
class Y4mWriter {
public:
    Y4mWriter(const std::string& path, int width, int height, const std::string& frame_rate = "30:1");
    void write(const Raster& gray);
    void close();

private:
    std::ofstream out_;
    int width_;
    int height_;
    std::vector<std::uint8_t> chroma_;
};

}  // namespace diytab
