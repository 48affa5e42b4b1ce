#include "pmef/image_io.hpp"

#include <png.h>

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <string_view>

namespace pmef {

FormatError::FormatError(const std::string& format, std::size_t offset, const std::string& what)
    : std::runtime_error(fmt::format("{}: {} (at byte offset {})", format, what, offset)),
      offset_(offset) {}

namespace {

std::string lower_ext(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

void require_dims(long long width, long long height, const char* format) {
    if (width < 1 || height < 1)
        throw InvalidImage(fmt::format("{}: image has zero width or height ({}x{})", format, width, height));
}

/// Sequential reader for the ASCII headers of PPM and PFM.
class HeaderCursor {
public:
    HeaderCursor(std::span<const std::uint8_t> bytes, const char* format)
        : bytes_(bytes), format_(format) {}

    std::size_t pos() const { return pos_; }

    [[noreturn]] void fail(const std::string& what) const { throw FormatError(format_, pos_, what); }

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const auto c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::string token() {
        skip_space_and_comments();
        std::string out;
        while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#')
            out.push_back(static_cast<char>(bytes_[pos_++]));
        if (out.empty()) fail("unexpected end of header");
        return out;
    }

    long long integer(const char* what) {
        const auto start = pos_;
        const std::string t = token();
        try {
            std::size_t used = 0;
            const long long v = std::stoll(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            return v;
        } catch (const std::exception&) {
            throw FormatError(format_, start, fmt::format("malformed {} '{}'", what, t));
        }
    }

    double real(const char* what) {
        const auto start = pos_;
        const std::string t = token();
        try {
            std::size_t used = 0;
            const double v = std::stod(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            return v;
        } catch (const std::exception&) {
            throw FormatError(format_, start, fmt::format("malformed {} '{}'", what, t));
        }
    }

    /// Exactly one whitespace byte separates the header from the raster.
    void single_space() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) fail("expected whitespace before raster");
        ++pos_;
    }

private:
    std::span<const std::uint8_t> bytes_;
    const char* format_;
    std::size_t pos_ = 0;
};

}  // namespace

ImageFormat format_from_path(const std::filesystem::path& path) {
    const std::string ext = lower_ext(path);
    if (ext == ".png") return ImageFormat::png8;
    if (ext == ".ppm" || ext == ".pnm") return ImageFormat::ppm;
    if (ext == ".hdr" || ext == ".pic" || ext == ".rgbe") return ImageFormat::radiance_hdr;
    if (ext == ".pfm") return ImageFormat::pfm;
    throw IoError(fmt::format("cannot infer image format from extension of '{}'", path.string()));
}

const char* format_name(ImageFormat format) {
    switch (format) {
        case ImageFormat::png8: return "png8";
        case ImageFormat::ppm: return "ppm";
        case ImageFormat::radiance_hdr: return "radiance_hdr";
        case ImageFormat::pfm: return "pfm";
    }
    return "unknown";
}

bool is_hdr_format(ImageFormat format) {
    return format == ImageFormat::radiance_hdr || format == ImageFormat::pfm;
}

std::uint8_t encode_8bit(double v) {
    if (!(v > 0.0)) return 0;  // also maps NaN to 0
    if (v >= 1.0) return 255;
    return static_cast<std::uint8_t>(std::lround(v * 255.0));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError(fmt::format("read error on '{}'", path.string()));
    return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError(fmt::format("write error on '{}'", path.string()));
}

// ---------------------------------------------------------------------------
// PPM (P6, maxval 255)
// ---------------------------------------------------------------------------

Image decode_ppm(std::span<const std::uint8_t> bytes) {
    HeaderCursor cur(bytes, "ppm");
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') cur.fail("missing P6 magic");
    cur.token();
    const long long width = cur.integer("width");
    const long long height = cur.integer("height");
    const long long maxval = cur.integer("maxval");
    require_dims(width, height, "ppm");
    if (maxval != 255) cur.fail(fmt::format("unsupported maxval {} (only 255)", maxval));
    cur.single_space();

    const std::size_t start = cur.pos();
    const std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3;
    if (bytes.size() - start < need)
        throw FormatError("ppm", bytes.size(), fmt::format("truncated raster: need {} bytes, have {}", need,
                                                           bytes.size() - start));
    Image img(width, height);
    const std::uint8_t* p = bytes.data() + start;
    for (Eigen::Index y = 0; y < height; ++y)
        for (Eigen::Index x = 0; x < width; ++x, p += 3)
            img.set_pixel(x, y, p[0] / 255.0, p[1] / 255.0, p[2] / 255.0);
    return img;
}

std::vector<std::uint8_t> encode_ppm(const Image& img) {
    require_dims(img.width(), img.height(), "ppm");
    const std::string header = fmt::format("P6\n{} {}\n255\n", img.width(), img.height());
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + static_cast<std::size_t>(img.pixel_count()) * 3);
    for (Eigen::Index y = 0; y < img.height(); ++y)
        for (Eigen::Index x = 0; x < img.width(); ++x)
            for (int c = 0; c < 3; ++c) out.push_back(encode_8bit(img.channel(c)(y, x)));
    return out;
}

// ---------------------------------------------------------------------------
// PNG (8-bit RGB through libpng)
// ---------------------------------------------------------------------------

namespace {

struct PngMemoryReader {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;
};

struct PngState {
    char message[256] = {};
    std::size_t offset = 0;
};

void png_error_to_state(png_structp png, png_const_charp msg) {
    auto* state = static_cast<PngState*>(png_get_error_ptr(png));
    std::snprintf(state->message, sizeof(state->message), "%s", msg);
    png_longjmp(png, 1);
}

void png_warning_ignore(png_structp, png_const_charp) {}

void png_read_memory(png_structp png, png_bytep out, png_size_t count) {
    auto* reader = static_cast<PngMemoryReader*>(png_get_io_ptr(png));
    if (reader->bytes.size() - reader->pos < count) png_error(png, "unexpected end of data");
    std::memcpy(out, reader->bytes.data() + reader->pos, count);
    reader->pos += count;
}

void png_write_memory(png_structp png, png_bytep data, png_size_t count) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + count);
}

void png_flush_noop(png_structp) {}

struct PngHeader {
    png_uint_32 width = 0;
    png_uint_32 height = 0;
    int bit_depth = 0;
};

// Reads into `raster` (pre-sized by the caller once the header is known via
// the callback). Returns false on libpng error with the message in `state`.
// Kept free of objects with non-trivial destructors because of longjmp.
bool png_decode_raw(PngMemoryReader& reader, PngState& state, PngHeader& header,
                    std::vector<std::uint8_t>& raster, std::vector<png_bytep>& rows) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &state, png_error_to_state,
                                             png_warning_ignore);
    if (png == nullptr) {
        std::snprintf(state.message, sizeof(state.message), "cannot allocate decoder");
        return false;
    }
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        std::snprintf(state.message, sizeof(state.message), "cannot allocate decoder");
        return false;
    }
    if (setjmp(png_jmpbuf(png))) {
        state.offset = reader.pos;
        png_destroy_read_struct(&png, &info, nullptr);
        return false;
    }
    png_set_read_fn(png, &reader, png_read_memory);
    png_read_info(png, info);

    header.width = png_get_image_width(png, info);
    header.height = png_get_image_height(png, info);
    header.bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);
    if (header.bit_depth == 16) png_error(png, "16-bit PNG is not supported");

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && header.bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    if (png_get_rowbytes(png, info) != static_cast<png_size_t>(header.width) * 3)
        png_error(png, "unexpected row layout after expansion");

    raster.resize(static_cast<std::size_t>(header.width) * header.height * 3);
    rows.resize(header.height);
    for (png_uint_32 y = 0; y < header.height; ++y) rows[y] = raster.data() + static_cast<std::size_t>(y) * header.width * 3;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
}

bool png_encode_raw(std::vector<std::uint8_t>& out, PngState& state, png_uint_32 width, png_uint_32 height,
                    std::vector<png_bytep>& rows) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &state, png_error_to_state,
                                              png_warning_ignore);
    if (png == nullptr) return false;
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_write_struct(&png, nullptr);
        return false;
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        return false;
    }
    png_set_write_fn(png, &out, png_write_memory, png_flush_noop);
    png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

}  // namespace

Image decode_png(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
        throw FormatError("png", 0, "missing PNG signature");
    PngMemoryReader reader{bytes};
    PngState state;
    PngHeader header;
    std::vector<std::uint8_t> raster;
    std::vector<png_bytep> rows;
    if (!png_decode_raw(reader, state, header, raster, rows)) throw FormatError("png", state.offset, state.message);
    require_dims(header.width, header.height, "png");

    Image img(header.width, header.height);
    const std::uint8_t* p = raster.data();
    for (Eigen::Index y = 0; y < img.height(); ++y)
        for (Eigen::Index x = 0; x < img.width(); ++x, p += 3)
            img.set_pixel(x, y, p[0] / 255.0, p[1] / 255.0, p[2] / 255.0);
    return img;
}

std::vector<std::uint8_t> encode_png(const Image& img) {
    require_dims(img.width(), img.height(), "png");
    const auto width = static_cast<png_uint_32>(img.width());
    const auto height = static_cast<png_uint_32>(img.height());
    std::vector<std::uint8_t> raster(static_cast<std::size_t>(width) * height * 3);
    std::vector<png_bytep> rows(height);
    for (png_uint_32 y = 0; y < height; ++y) {
        rows[y] = raster.data() + static_cast<std::size_t>(y) * width * 3;
        for (png_uint_32 x = 0; x < width; ++x)
            for (int c = 0; c < 3; ++c) rows[y][x * 3 + c] = encode_8bit(img.channel(c)(y, x));
    }
    std::vector<std::uint8_t> out;
    PngState state;
    if (!png_encode_raw(out, state, width, height, rows))
        throw IoError(fmt::format("png encode failed: {}", state.message));
    return out;
}

// ---------------------------------------------------------------------------
// Radiance RGBE
// ---------------------------------------------------------------------------

std::array<float, 3> rgbe_to_float(std::uint8_t r, std::uint8_t g, std::uint8_t b, std::uint8_t e) {
    if (e == 0) return {0.0f, 0.0f, 0.0f};
    const float f = std::ldexp(1.0f, static_cast<int>(e) - 136);
    return {static_cast<float>(r) * f, static_cast<float>(g) * f, static_cast<float>(b) * f};
}

std::array<std::uint8_t, 4> float_to_rgbe(float r, float g, float b) {
    const float v = std::max({r, g, b});
    if (!(v >= 1e-32f)) return {0, 0, 0, 0};
    int e = 0;
    const float m = std::frexp(v, &e);  // v = m * 2^e, m in [0.5, 1)
    const float scale = m * 256.0f / v;
    auto q = [scale](float c) { return static_cast<std::uint8_t>(std::max(0.0f, c) * scale); };
    return {q(r), q(g), q(b), static_cast<std::uint8_t>(e + 128)};
}

namespace {

class RadianceParser {
public:
    explicit RadianceParser(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    Image parse() {
        read_header();
        Image img(width_, height_);
        std::vector<std::uint8_t> scan(static_cast<std::size_t>(width_) * 4);
        for (long long row = 0; row < height_; ++row) {
            read_scanline(scan);
            const Eigen::Index y = flip_y_ ? height_ - 1 - row : row;
            for (long long x = 0; x < width_; ++x) {
                const auto* p = &scan[static_cast<std::size_t>(x) * 4];
                const auto rgb = rgbe_to_float(p[0], p[1], p[2], p[3]);
                img.set_pixel(x, y, rgb[0], rgb[1], rgb[2]);
            }
        }
        return img;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw FormatError("radiance_hdr", pos_, what); }

    std::string line() {
        if (pos_ >= bytes_.size()) fail("unexpected end of header");
        std::string out;
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') out.push_back(static_cast<char>(bytes_[pos_++]));
        if (pos_ >= bytes_.size()) fail("unterminated header line");
        ++pos_;
        return out;
    }

    void read_header() {
        const std::string magic = line();
        if (magic.rfind("#?", 0) != 0) {
            pos_ = 0;
            fail("missing '#?' magic");
        }
        for (;;) {
            const std::size_t at = pos_;
            const std::string l = line();
            if (l.empty()) break;
            if (l.rfind("FORMAT=", 0) == 0) {
                const std::string fmt_name = l.substr(7);
                if (fmt_name != "32-bit_rle_rgbe") {
                    pos_ = at;
                    fail(fmt::format("unsupported pixel format '{}'", fmt_name));
                }
            }
            // EXPOSURE, GAMMA, PRIMARIES etc. are ignored; pixels load as raw radiance.
        }
        const std::size_t at = pos_;
        const std::string res = line();
        char ya = 0, yaxis = 0, xa = 0, xaxis = 0;
        long long h = 0, w = 0;
        if (std::sscanf(res.c_str(), "%c%c %lld %c%c %lld", &ya, &yaxis, &h, &xa, &xaxis, &w) != 6 || yaxis != 'Y' ||
            xaxis != 'X' || xa != '+' || (ya != '-' && ya != '+')) {
            pos_ = at;
            fail(fmt::format("unsupported resolution line '{}'", res));
        }
        require_dims(w, h, "radiance_hdr");
        width_ = w;
        height_ = h;
        flip_y_ = ya == '+';
    }

    std::uint8_t byte() {
        if (pos_ >= bytes_.size()) fail("truncated scanline data");
        return bytes_[pos_++];
    }

    void read_scanline(std::vector<std::uint8_t>& scan) {
        if (width_ < 8 || width_ > 0x7fff || bytes_.size() - pos_ < 4 || bytes_[pos_] != 2 ||
            bytes_[pos_ + 1] != 2 || (bytes_[pos_ + 2] & 0x80) != 0) {
            read_flat(scan, 0);
            return;
        }
        const std::size_t at = pos_;
        pos_ += 2;
        const long long encoded_width = (static_cast<long long>(byte()) << 8) | byte();
        if (encoded_width != width_) {
            pos_ = at;
            fail(fmt::format("RLE scanline width {} does not match image width {}", encoded_width, width_));
        }
        for (int c = 0; c < 4; ++c) {
            long long x = 0;
            while (x < width_) {
                const std::size_t run_at = pos_;
                std::uint8_t count = byte();
                if (count > 128) {
                    count -= 128;
                    if (x + count > width_) {
                        pos_ = run_at;
                        fail("RLE run overruns scanline");
                    }
                    const std::uint8_t v = byte();
                    for (int i = 0; i < count; ++i) scan[static_cast<std::size_t>(x++) * 4 + c] = v;
                } else {
                    if (count == 0 || x + count > width_) {
                        pos_ = run_at;
                        fail("bad RLE literal count");
                    }
                    for (int i = 0; i < count; ++i) scan[static_cast<std::size_t>(x++) * 4 + c] = byte();
                }
            }
        }
    }

    // Flat pixels, with the original Radiance run-length convention
    // (1,1,1,n) repeating the previous pixel.
    void read_flat(std::vector<std::uint8_t>& scan, long long x) {
        int shift = 0;
        while (x < width_) {
            const std::size_t at = pos_;
            std::uint8_t p[4] = {byte(), byte(), byte(), byte()};
            if (p[0] == 1 && p[1] == 1 && p[2] == 1) {
                if (x == 0) {
                    pos_ = at;
                    fail("run-length repeat at start of scanline");
                }
                const long long count = static_cast<long long>(p[3]) << shift;
                if (x + count > width_) {
                    pos_ = at;
                    fail("run-length repeat overruns scanline");
                }
                for (long long i = 0; i < count; ++i, ++x)
                    std::copy_n(&scan[static_cast<std::size_t>(x - 1) * 4], 4, &scan[static_cast<std::size_t>(x) * 4]);
                shift += 8;
            } else {
                std::copy_n(p, 4, &scan[static_cast<std::size_t>(x) * 4]);
                ++x;
                shift = 0;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
    long long width_ = 0;
    long long height_ = 0;
    bool flip_y_ = false;
};

}  // namespace

Image decode_radiance(std::span<const std::uint8_t> bytes) { return RadianceParser(bytes).parse(); }

std::vector<std::uint8_t> encode_radiance(const Image& img) {
    require_dims(img.width(), img.height(), "radiance_hdr");
    const std::string header =
        fmt::format("#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n-Y {} +X {}\n", img.height(), img.width());
    std::vector<std::uint8_t> out(header.begin(), header.end());
    for (Eigen::Index y = 0; y < img.height(); ++y)
        for (Eigen::Index x = 0; x < img.width(); ++x) {
            const auto e = float_to_rgbe(static_cast<float>(img.r()(y, x)), static_cast<float>(img.g()(y, x)),
                                         static_cast<float>(img.b()(y, x)));
            out.insert(out.end(), e.begin(), e.end());
        }
    return out;
}

// ---------------------------------------------------------------------------
// PFM
// ---------------------------------------------------------------------------

namespace {

float read_float(const std::uint8_t* p, bool little_endian) {
    std::uint32_t bits = 0;
    if (little_endian)
        bits = std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
    else
        bits = std::uint32_t(p[3]) | std::uint32_t(p[2]) << 8 | std::uint32_t(p[1]) << 16 | std::uint32_t(p[0]) << 24;
    return std::bit_cast<float>(bits);
}

void append_float_le(std::vector<std::uint8_t>& out, float v) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

}  // namespace

Image decode_pfm(std::span<const std::uint8_t> bytes) {
    HeaderCursor cur(bytes, "pfm");
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != 'F' && bytes[1] != 'f'))
        cur.fail("missing PF/Pf magic");
    const bool color = cur.token() == "PF";
    const long long width = cur.integer("width");
    const long long height = cur.integer("height");
    const std::size_t scale_at = cur.pos();
    const double scale = cur.real("scale");
    require_dims(width, height, "pfm");
    if (scale == 0.0 || !std::isfinite(scale)) throw FormatError("pfm", scale_at, "scale must be nonzero");
    cur.single_space();

    const bool little = scale < 0.0;
    const int channels = color ? 3 : 1;
    const std::size_t start = cur.pos();
    const std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * channels * 4;
    if (bytes.size() - start < need)
        throw FormatError("pfm", bytes.size(), fmt::format("truncated raster: need {} bytes, have {}", need,
                                                           bytes.size() - start));
    Image img(width, height);
    const std::uint8_t* p = bytes.data() + start;
    // Rows are stored bottom to top.
    for (Eigen::Index row = 0; row < height; ++row) {
        const Eigen::Index y = height - 1 - row;
        for (Eigen::Index x = 0; x < width; ++x) {
            if (color) {
                img.set_pixel(x, y, read_float(p, little), read_float(p + 4, little), read_float(p + 8, little));
                p += 12;
            } else {
                const float v = read_float(p, little);
                img.set_pixel(x, y, v, v, v);
                p += 4;
            }
        }
    }
    return img;
}

std::vector<std::uint8_t> encode_pfm(const Image& img) {
    require_dims(img.width(), img.height(), "pfm");
    const std::string header = fmt::format("PF\n{} {}\n-1.0\n", img.width(), img.height());
    std::vector<std::uint8_t> out(header.begin(), header.end());
    for (Eigen::Index y = img.height() - 1; y >= 0; --y)
        for (Eigen::Index x = 0; x < img.width(); ++x)
            for (int c = 0; c < 3; ++c) append_float_le(out, static_cast<float>(img.channel(c)(y, x)));
    return out;
}

void save_luminance_pfm(const Luminance& map, const std::filesystem::path& path) {
    require_dims(map.cols(), map.rows(), "pfm");
    const std::string header = fmt::format("Pf\n{} {}\n-1.0\n", map.cols(), map.rows());
    std::vector<std::uint8_t> out(header.begin(), header.end());
    for (Eigen::Index y = map.rows() - 1; y >= 0; --y)
        for (Eigen::Index x = 0; x < map.cols(); ++x) append_float_le(out, static_cast<float>(map(y, x)));
    write_file(path, out);
}

// ---------------------------------------------------------------------------
// File entry points
// ---------------------------------------------------------------------------

Image load_image(const std::filesystem::path& path, ImageFormat format) {
    const auto bytes = read_file(path);
    switch (format) {
        case ImageFormat::png8: return decode_png(bytes);
        case ImageFormat::ppm: return decode_ppm(bytes);
        case ImageFormat::radiance_hdr: return decode_radiance(bytes);
        case ImageFormat::pfm: return decode_pfm(bytes);
    }
    throw IoError("unknown image format");
}

Image load_image(const std::filesystem::path& path) { return load_image(path, format_from_path(path)); }

void save_image(const Image& img, const std::filesystem::path& path, ImageFormat format) {
    switch (format) {
        case ImageFormat::png8: write_file(path, encode_png(img)); return;
        case ImageFormat::ppm: write_file(path, encode_ppm(img)); return;
        case ImageFormat::radiance_hdr: write_file(path, encode_radiance(img)); return;
        case ImageFormat::pfm: write_file(path, encode_pfm(img)); return;
    }
    throw IoError("unknown image format");
}

void save_image(const Image& img, const std::filesystem::path& path) { save_image(img, path, format_from_path(path)); }

}  // namespace pmef
