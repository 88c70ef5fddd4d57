#include "diytab/image_io.hpp"

#include <png.h>
#include <stdio.h>  // jpeglib.h needs FILE
#include <jpeglib.h>

#include <cstring>
#include <sstream>

namespace diytab {

Raster read_png(const std::string& path) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str()))
        throw IoError("cannot read PNG " + path + ": " + image.message);
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    const int channels = color ? 3 : 1;
    if (image.width < 1 || image.height < 1) {
        png_image_free(&image);
        throw IoError("empty PNG " + path);
    }
    std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, data.data(), 0, nullptr))
        throw IoError("cannot decode PNG " + path + ": " + image.message);
    return Raster(static_cast<int>(image.width), static_cast<int>(image.height), channels, std::move(data));
}

std::vector<std::uint8_t> encode_png(const Raster& raster) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(raster.width());
    image.height = static_cast<png_uint_32>(raster.height());
    image.format = raster.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, raster.data().data(), 0, nullptr))
        throw IoError(std::string("PNG encode failed: ") + image.message);
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, raster.data().data(), 0, nullptr))
        throw IoError(std::string("PNG encode failed: ") + image.message);
    out.resize(size);
    return out;
}

void write_png(const std::string& path, const Raster& image) {
    const auto bytes = encode_png(image);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path);
}

std::vector<std::uint8_t> encode_jpeg(const Raster& image, int quality) {
    jpeg_compress_struct cinfo;
    jpeg_error_mgr jerr;
    cinfo.err = jpeg_std_error(&jerr);
    jpeg_create_compress(&cinfo);
    unsigned char* buffer = nullptr;
    unsigned long size = 0;
    jpeg_mem_dest(&cinfo, &buffer, &size);
    cinfo.image_width = static_cast<JDIMENSION>(image.width());
    cinfo.image_height = static_cast<JDIMENSION>(image.height());
    cinfo.input_components = image.channels();
    cinfo.in_color_space = image.channels() == 3 ? JCS_RGB : JCS_GRAYSCALE;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    while (cinfo.next_scanline < cinfo.image_height) {
        JSAMPROW row = const_cast<JSAMPROW>(image.row(static_cast<int>(cinfo.next_scanline)).data());
        jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
    std::vector<std::uint8_t> out(buffer, buffer + size);
    free(buffer);
    return out;
}

Y4mReader::Y4mReader(const std::string& path) : in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in_, line) || line.rfind("YUV4MPEG2", 0) != 0)
        throw IoError(path + " is not a YUV4MPEG2 stream");
    std::istringstream tokens(line.substr(9));
    std::string tok;
    while (tokens >> tok) {
        const char tag = tok[0];
        const std::string val = tok.substr(1);
        try {
            if (tag == 'W') header_.width = std::stoi(val);
            if (tag == 'H') header_.height = std::stoi(val);
        } catch (const std::exception&) {
            throw IoError("malformed Y4M header field " + tok);
        }
        if (tag == 'F') header_.frame_rate = val;
        if (tag == 'C') header_.colorspace = val;
    }
    if (header_.width < 1 || header_.height < 1) throw IoError("Y4M header lacks frame size");
    const std::size_t cw = (header_.width + 1) / 2;
    const std::size_t ch = (header_.height + 1) / 2;
    const std::string& cs = header_.colorspace;
    if (cs == "420" || cs == "420jpeg" || cs == "420mpeg2" || cs == "420paldv")
        chroma_bytes_ = 2 * cw * ch;
    else if (cs == "422")
        chroma_bytes_ = 2 * cw * header_.height;
    else if (cs == "444")
        chroma_bytes_ = 2 * static_cast<std::size_t>(header_.width) * header_.height;
    else if (cs == "mono")
        chroma_bytes_ = 0;
    else
        throw IoError("unsupported Y4M colorspace C" + cs);
}

std::optional<Raster> Y4mReader::next() {
    std::string line;
    if (!std::getline(in_, line)) return std::nullopt;
    if (line.rfind("FRAME", 0) != 0) throw IoError("malformed Y4M frame marker");
    std::vector<std::uint8_t> luma(static_cast<std::size_t>(header_.width) * header_.height);
    in_.read(reinterpret_cast<char*>(luma.data()), static_cast<std::streamsize>(luma.size()));
    if (!in_) throw IoError("truncated Y4M frame");
    in_.ignore(static_cast<std::streamsize>(chroma_bytes_));
    if (static_cast<std::size_t>(in_.gcount()) != chroma_bytes_) throw IoError("truncated Y4M chroma");
    return Raster(header_.width, header_.height, 1, std::move(luma));
}

Y4mWriter::Y4mWriter(const std::string& path, int width, int height, const std::string& frame_rate)
    : out_(path, std::ios::binary), width_(width), height_(height) {
    if (!out_) throw IoError("cannot open " + path + " for writing");
    out_ << "YUV4MPEG2 W" << width << " H" << height << " F" << frame_rate << " Ip A1:1 C420jpeg\n";
    chroma_.assign(2 * static_cast<std::size_t>((width + 1) / 2) * ((height + 1) / 2), 128);
}

void Y4mWriter::write(const Raster& gray) {
    if (gray.channels() != 1 || gray.width() != width_ || gray.height() != height_)
        throw DimensionMismatch("Y4M frame does not match stream geometry");
    out_ << "FRAME\n";
    out_.write(reinterpret_cast<const char*>(gray.data().data()), static_cast<std::streamsize>(gray.data().size()));
    out_.write(reinterpret_cast<const char*>(chroma_.data()), static_cast<std::streamsize>(chroma_.size()));
    if (!out_) throw IoError("Y4M write failed");
}

void Y4mWriter::close() {
    out_.flush();
    out_.close();
}

}  // namespace diytab
