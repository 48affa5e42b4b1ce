#pragma once

#include "pmef/image.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmef {

enum class ImageFormat { png8, ppm, radiance_hdr, pfm };

/// A file did not parse under its format. offset() is the byte position in
/// the input at which parsing stopped.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& format, std::size_t offset, const std::string& what);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Guesses the format from the extension (.png, .ppm, .hdr/.pic/.rgbe, .pfm).
ImageFormat format_from_path(const std::filesystem::path& path);
const char* format_name(ImageFormat format);
bool is_hdr_format(ImageFormat format);

/// 8-bit formats map to [0,1] by value/255 with no gamma linearization.
/// HDR formats return raw floating-point radiance.
Image load_image(const std::filesystem::path& path, ImageFormat format);
Image load_image(const std::filesystem::path& path);

/// 8-bit formats clamp to [0,1] and store round(v*255). PFM and Radiance
/// store unclamped floating-point values.
void save_image(const Image& img, const std::filesystem::path& path, ImageFormat format);
void save_image(const Image& img, const std::filesystem::path& path);

/// Writes a single-channel map as a grayscale PFM ("Pf").
void save_luminance_pfm(const Luminance& map, const std::filesystem::path& path);

// In-memory codecs. The file functions above are thin wrappers over these.
Image decode_ppm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_ppm(const Image& img);

Image decode_png(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const Image& img);

Image decode_radiance(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_radiance(const Image& img);

Image decode_pfm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pfm(const Image& img);

/// RGBE pixel decode: channel = mantissa * 2^(exponent - 136), zero when the
/// exponent byte is zero.
std::array<float, 3> rgbe_to_float(std::uint8_t r, std::uint8_t g, std::uint8_t b, std::uint8_t e);
std::array<std::uint8_t, 4> float_to_rgbe(float r, float g, float b);

/// clamp(v, 0, 1) then round(v * 255).
std::uint8_t encode_8bit(double v);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace pmef
