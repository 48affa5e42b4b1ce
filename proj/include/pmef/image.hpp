#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmef {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Raised when a precondition on an argument is violated (dimension
/// mismatch, non-positive parameter, empty stack).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An image with zero width/height or non-finite samples.
class InvalidImage : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input from which no meaningful result can be derived (e.g. an all-black
/// HDR scene that has no exposure anchor).
class DegenerateInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotImplemented : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Containers
// ---------------------------------------------------------------------------

/// A single-channel image plane, rows = height, cols = width, row-major so
/// that the flat storage order matches the file formats.
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Non-negative luminance, same dimensions as the image it came from.
template <typename Scalar>
using LuminanceMap = Plane<Scalar>;

/// Three-channel, display-referred image. Each channel is a separate plane so
/// per-channel work stays an Eigen expression.
template <typename Scalar>
class RgbImage {
public:
    using PlaneType = Plane<Scalar>;

    RgbImage() = default;

    RgbImage(Eigen::Index width, Eigen::Index height)
        : channels_{PlaneType::Zero(height, width), PlaneType::Zero(height, width),
                    PlaneType::Zero(height, width)} {}

    RgbImage(PlaneType r, PlaneType g, PlaneType b)
        : channels_{std::move(r), std::move(g), std::move(b)} {
        if (channels_[1].rows() != channels_[0].rows() || channels_[1].cols() != channels_[0].cols() ||
            channels_[2].rows() != channels_[0].rows() || channels_[2].cols() != channels_[0].cols())
            throw ContractViolation("RgbImage: channel planes differ in size");
    }

    static RgbImage constant(Eigen::Index width, Eigen::Index height, Scalar r, Scalar g, Scalar b) {
        return RgbImage(PlaneType::Constant(height, width, r), PlaneType::Constant(height, width, g),
                        PlaneType::Constant(height, width, b));
    }

    Eigen::Index width() const { return channels_[0].cols(); }
    Eigen::Index height() const { return channels_[0].rows(); }
    Eigen::Index pixel_count() const { return width() * height(); }
    bool empty() const { return pixel_count() == 0; }

    PlaneType& channel(int c) { return channels_[static_cast<std::size_t>(c)]; }
    const PlaneType& channel(int c) const { return channels_[static_cast<std::size_t>(c)]; }

    PlaneType& r() { return channels_[0]; }
    PlaneType& g() { return channels_[1]; }
    PlaneType& b() { return channels_[2]; }
    const PlaneType& r() const { return channels_[0]; }
    const PlaneType& g() const { return channels_[1]; }
    const PlaneType& b() const { return channels_[2]; }

    Eigen::Array<Scalar, 3, 1> pixel(Eigen::Index x, Eigen::Index y) const {
        return {channels_[0](y, x), channels_[1](y, x), channels_[2](y, x)};
    }

    void set_pixel(Eigen::Index x, Eigen::Index y, Scalar r, Scalar g, Scalar b) {
        channels_[0](y, x) = r;
        channels_[1](y, x) = g;
        channels_[2](y, x) = b;
    }

    bool same_size(const RgbImage& other) const {
        return width() == other.width() && height() == other.height();
    }

    template <typename NewScalar>
    RgbImage<NewScalar> cast() const {
        return RgbImage<NewScalar>(channels_[0].template cast<NewScalar>(),
                                   channels_[1].template cast<NewScalar>(),
                                   channels_[2].template cast<NewScalar>());
    }

    /// Multiplies every channel by a scalar.
    RgbImage scaled(Scalar s) const {
        return RgbImage(channels_[0] * s, channels_[1] * s, channels_[2] * s);
    }

    RgbImage clamped(Scalar lo = Scalar(0), Scalar hi = Scalar(1)) const {
        return RgbImage(channels_[0].max(lo).min(hi), channels_[1].max(lo).min(hi),
                        channels_[2].max(lo).min(hi));
    }

private:
    std::array<PlaneType, 3> channels_;
};

/// Exposure value in EV units. +1 EV doubles the collected light.
struct ExposureTag {
    double ev = 0.0;

    explicit ExposureTag(double value = 0.0) : ev(value) {
        if (!std::isfinite(value)) throw ContractViolation("ExposureTag: EV must be finite");
    }

    /// Linear gain 2^ev.
    double gain() const { return std::exp2(ev); }
};

template <typename Scalar>
struct TaggedImage {
    RgbImage<Scalar> image;
    ExposureTag tag;
};

/// Ordered exposure bracket, every member sharing one size.
template <typename Scalar>
using ExposureStack = std::vector<TaggedImage<Scalar>>;

using Image = RgbImage<double>;
using Luminance = LuminanceMap<double>;
using Stack = ExposureStack<double>;

// ---------------------------------------------------------------------------
// Validation and conversion
// ---------------------------------------------------------------------------

/// Throws InvalidImage unless the image is non-empty with finite, non-negative
/// samples.
template <typename Scalar>
void validate(const RgbImage<Scalar>& img) {
    if (img.width() < 1 || img.height() < 1) throw InvalidImage("image has zero width or height");
    for (int c = 0; c < 3; ++c) {
        const auto& p = img.channel(c);
        if (!p.allFinite()) throw InvalidImage("image contains non-finite samples");
        if ((p < Scalar(0)).any()) throw InvalidImage("image contains negative samples");
    }
}

inline constexpr double kRec709R = 0.2126;
inline constexpr double kRec709G = 0.7152;
inline constexpr double kRec709B = 0.0722;

/// Rec. 709 relative luminance, computed on pixel values directly (no gamma
/// decoding; the imaging model assumes a linear response).
template <typename Scalar>
LuminanceMap<Scalar> relative_luminance(const RgbImage<Scalar>& img) {
    return Scalar(kRec709R) * img.r() + Scalar(kRec709G) * img.g() + Scalar(kRec709B) * img.b();
}

template <typename Scalar>
void require_same_size(const Plane<Scalar>& a, const Plane<Scalar>& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ContractViolation(std::string(what) + ": dimension mismatch");
}

/// Clamp to [0,1] and snap to the 8-bit grid, i.e. the exact values an
/// 8-bit save/load cycle produces.
template <typename Scalar>
RgbImage<Scalar> quantize8(const RgbImage<Scalar>& img) {
    auto q = [](const Plane<Scalar>& p) -> Plane<Scalar> {
        return p.unaryExpr([](Scalar v) {
            const double c = std::clamp(static_cast<double>(v), 0.0, 1.0);
            return static_cast<Scalar>(std::round(c * 255.0) / 255.0);
        });
    };
    return RgbImage<Scalar>(q(img.r()), q(img.g()), q(img.b()));
}

/// Sum in 64-bit with fixed row-major order.
template <typename Derived>
double ordered_sum(const Eigen::ArrayBase<Derived>& a) {
    double s = 0.0;
    for (Eigen::Index y = 0; y < a.rows(); ++y)
        for (Eigen::Index x = 0; x < a.cols(); ++x) s += static_cast<double>(a(y, x));
    return s;
}

template <typename Derived>
double ordered_mean(const Eigen::ArrayBase<Derived>& a) {
    return ordered_sum(a) / static_cast<double>(a.size());
}

}  // namespace pmef
