// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/imaging/raster.hpp"

#include <png.h>

#include <cstring>
#include <fstream>

#include "pyrorisk/common/error.hpp"

namespace pyrorisk::imaging {

void RasterImage::validate() const {
    if (width == 0 || height == 0) throw DomainError("image", "width and height must be >= 1");
    if (pixels.size() != std::size_t{width} * height * kChannels) throw DomainError("image", "pixel buffer size differs from W*H*3");
}

cnn::Tensor3 to_tensor(const RasterImage& image) {
    image.validate();
    std::vector<float> values(image.pixels.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<float>(image.pixels[i]) / 255.0f;
    return cnn::Tensor3({image.height, image.width, RasterImage::kChannels}, std::move(values));
}

RasterImage read_png(const std::string& path) {
    png_image img;
    std::memset(&img, 0, sizeof img);
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&img, path.c_str())) {
        throw DomainError(path, std::string("cannot decode PNG: ") + img.message);
    }
    // Grayscale is promoted by channel replication; alpha is composited on black.
    img.format = PNG_FORMAT_RGB;
    RasterImage out(img.width, img.height);
    png_color black{0, 0, 0};
    if (!png_image_finish_read(&img, &black, out.pixels.data(), 0, nullptr)) {
        const std::string msg = img.message;
        png_image_free(&img);
        throw DomainError(path, "cannot decode PNG: " + msg);
    }
    return out;
}

std::vector<std::uint8_t> encode_png(const RasterImage& image) {
    image.validate();
    png_image img;
    std::memset(&img, 0, sizeof img);
    img.version = PNG_IMAGE_VERSION;
    img.width = image.width;
    img.height = image.height;
    img.format = PNG_FORMAT_RGB;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&img, nullptr, &size, 0, image.pixels.data(), 0, nullptr)) {
        throw DomainError("png", std::string("cannot size PNG: ") + img.message);
    }
    std::vector<std::uint8_t> bytes(size);
    if (!png_image_write_to_memory(&img, bytes.data(), &size, 0, image.pixels.data(), 0, nullptr)) {
        throw DomainError("png", std::string("cannot encode PNG: ") + img.message);
    }
    bytes.resize(size);
    return bytes;
}

void write_png(const std::string& path, const RasterImage& image) {
    const auto bytes = encode_png(image);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError(path, "cannot write file");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace pyrorisk::imaging
