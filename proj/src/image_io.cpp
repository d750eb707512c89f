#include "stainbary/image_io.hpp"

#include <cstdio>
#include <csetjmp>
#include <memory>

#include <jpeglib.h>
#include <png.h>

#include "stainbary/errors.hpp"

namespace stainbary {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const
    {
        if (f)
            std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr openFile(const std::string& path, const char* mode)
{
    FilePtr file(std::fopen(path.c_str(), mode));
    if (!file)
        throw IoError("cannot open '" + path + "'");
    return file;
}

Image loadPng(std::FILE* fp, const std::string& path)
{
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("libpng initialization failed");
    }

    Image image;
    std::vector<png_bytep> rowPointers;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("corrupt PNG '" + path + "'");
    }

    png_init_io(png, fp);
    png_read_info(png, info);

    // Normalize everything to 8-bit RGB.
    png_set_expand(png);
    if (png_get_bit_depth(png, info) == 16)
        png_set_strip_16(png);
    png_set_strip_alpha(png);
    const png_byte colorType = png_get_color_type(png, info);
    if (colorType == PNG_COLOR_TYPE_GRAY || colorType == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    png_read_update_info(png, info);

    image.width = int(png_get_image_width(png, info));
    image.height = int(png_get_image_height(png, info));
    image.pixels.resize(image.pixelCount() * 3);

    rowPointers.resize(std::size_t(image.height));
    for (int y = 0; y < image.height; ++y)
        rowPointers[std::size_t(y)] = image.pixels.data() + 3 * std::size_t(y) * std::size_t(image.width);
    png_read_image(png, rowPointers.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return image;
}

struct JpegErrorHandler {
    jpeg_error_mgr mgr;
    std::jmp_buf jump;
};

void jpegErrorExit(j_common_ptr cinfo)
{
    auto* handler = reinterpret_cast<JpegErrorHandler*>(cinfo->err);
    std::longjmp(handler->jump, 1);
}

Image loadJpeg(std::FILE* fp, const std::string& path)
{
    jpeg_decompress_struct cinfo;
    JpegErrorHandler err;
    cinfo.err = jpeg_std_error(&err.mgr);
    err.mgr.error_exit = jpegErrorExit;

    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw IoError("corrupt JPEG '" + path + "'");
    }

    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, fp);
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    Image image;
    image.width = int(cinfo.output_width);
    image.height = int(cinfo.output_height);
    image.pixels.resize(image.pixelCount() * 3);

    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = image.pixels.data() +
                       3 * std::size_t(cinfo.output_scanline) * std::size_t(image.width);
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return image;
}

} // namespace

Image Image::filled(int width, int height, RgbPixel color)
{
    Image image;
    image.width = width;
    image.height = height;
    image.pixels.resize(image.pixelCount() * 3);
    for (std::size_t p = 0; p < image.pixelCount(); ++p) {
        image.pixels[3 * p] = color.r;
        image.pixels[3 * p + 1] = color.g;
        image.pixels[3 * p + 2] = color.b;
    }
    return image;
}

Image load_image(const std::string& path)
{
    FilePtr file = openFile(path, "rb");

    unsigned char magic[8] = {};
    const std::size_t got = std::fread(magic, 1, sizeof(magic), file.get());
    std::rewind(file.get());

    if (got >= 8 && png_sig_cmp(magic, 0, 8) == 0)
        return loadPng(file.get(), path);
    if (got >= 2 && magic[0] == 0xFF && magic[1] == 0xD8)
        return loadJpeg(file.get(), path);
    throw IoError("'" + path + "' is neither PNG nor JPEG");
}

void save_png(const Image& image, const std::string& path)
{
    if (image.empty() || image.pixels.size() != image.pixelCount() * 3)
        throw InvalidArgument("save_png: malformed image");

    FilePtr file = openFile(path, "wb");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG write failed for '" + path + "'");
    }

    png_init_io(png, file.get());
    png_set_IHDR(png, info, png_uint_32(image.width), png_uint_32(image.height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 6);
    png_write_info(png, info);

    for (int y = 0; y < image.height; ++y) {
        png_write_row(png, const_cast<png_bytep>(
            image.pixels.data() + 3 * std::size_t(y) * std::size_t(image.width)));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

} // namespace stainbary
