#pragma once

#include "pmef/image.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

namespace pmef {

/// Exponents applied to the contrast, saturation and well-exposedness
/// measures before they are multiplied into a weight.
struct QualityExponents {
    double contrast = 1.0;
    double saturation = 1.0;
    double exposedness = 1.0;
};

inline constexpr double kExposednessSigma = 0.2;
inline constexpr double kWeightFloor = 1e-12;

/// One weight plane per stack member. Normalized maps sum to 1 per pixel.
template <typename Scalar>
using WeightMaps = std::vector<Plane<Scalar>>;

// ---------------------------------------------------------------------------
// Quality measures
// ---------------------------------------------------------------------------

/// |Laplacian| of a plane with the 4-neighbour kernel, replicate borders.
template <typename Scalar>
Plane<Scalar> contrast_measure(const Plane<Scalar>& gray) {
    const Eigen::Index h = gray.rows();
    const Eigen::Index w = gray.cols();
    Plane<Scalar> out(h, w);
    for (Eigen::Index y = 0; y < h; ++y) {
        const Eigen::Index yu = std::max<Eigen::Index>(y - 1, 0);
        const Eigen::Index yd = std::min<Eigen::Index>(y + 1, h - 1);
        for (Eigen::Index x = 0; x < w; ++x) {
            const Eigen::Index xl = std::max<Eigen::Index>(x - 1, 0);
            const Eigen::Index xr = std::min<Eigen::Index>(x + 1, w - 1);
            out(y, x) = std::abs(gray(yu, x) + gray(yd, x) + gray(y, xl) + gray(y, xr) - Scalar(4) * gray(y, x));
        }
    }
    return out;
}

/// Standard deviation across R, G, B at each pixel.
template <typename Scalar>
Plane<Scalar> saturation_measure(const RgbImage<Scalar>& img) {
    const Plane<Scalar> mean = (img.r() + img.g() + img.b()) / Scalar(3);
    return (((img.r() - mean).square() + (img.g() - mean).square() + (img.b() - mean).square()) / Scalar(3)).sqrt();
}

/// Product over channels of exp(-(c - 0.5)^2 / (2 * 0.2^2)).
template <typename Scalar>
Plane<Scalar> exposedness_measure(const RgbImage<Scalar>& img) {
    const Scalar inv = Scalar(1) / (Scalar(2) * Scalar(kExposednessSigma * kExposednessSigma));
    auto gauss = [inv](const Plane<Scalar>& c) -> Plane<Scalar> { return (-(c - Scalar(0.5)).square() * inv).exp(); };
    return gauss(img.r()) * gauss(img.g()) * gauss(img.b());
}

/// Per-member weights C^wc * S^ws * E^we + 1e-12, normalized across members.
template <typename Scalar>
WeightMaps<Scalar> quality_weights(const std::vector<RgbImage<Scalar>>& images, const QualityExponents& exps = {}) {
    if (images.empty()) throw ContractViolation("quality_weights: empty stack");
    for (const auto& img : images)
        if (!img.same_size(images.front())) throw ContractViolation("quality_weights: stack members differ in size");

    WeightMaps<Scalar> weights;
    weights.reserve(images.size());
    for (const auto& img : images) {
        const Plane<Scalar> c = contrast_measure(relative_luminance(img)).pow(Scalar(exps.contrast));
        const Plane<Scalar> s = saturation_measure(img).pow(Scalar(exps.saturation));
        const Plane<Scalar> e = exposedness_measure(img).pow(Scalar(exps.exposedness));
        weights.push_back(c * s * e + Scalar(kWeightFloor));
    }
    Plane<Scalar> total = weights.front();
    for (std::size_t i = 1; i < weights.size(); ++i) total += weights[i];
    for (auto& w : weights) w /= total;
    return weights;
}

template <typename Scalar>
WeightMaps<Scalar> quality_weights(const ExposureStack<Scalar>& stack, const QualityExponents& exps = {}) {
    std::vector<RgbImage<Scalar>> images;
    images.reserve(stack.size());
    for (const auto& m : stack) images.push_back(m.image);
    return quality_weights(images, exps);
}

// ---------------------------------------------------------------------------
// Pyramids
// ---------------------------------------------------------------------------

/// floor(log2(min(w, h))), at least 1, capped at max_levels when positive.
inline int pyramid_depth(Eigen::Index width, Eigen::Index height, int max_levels = 0) {
    const Eigen::Index m = std::min(width, height);
    int depth = 0;
    while ((Eigen::Index{1} << (depth + 1)) <= m) ++depth;
    depth = std::max(depth, 1);
    return max_levels > 0 ? std::min(depth, max_levels) : depth;
}

/// Blur with the separable (1,4,6,4,1)/16 kernel and keep even samples.
/// Output is ceil(h/2) x ceil(w/2); borders replicate.
template <typename Scalar>
Plane<Scalar> pyramid_reduce(const Plane<Scalar>& in) {
    const Eigen::Index h = in.rows();
    const Eigen::Index w = in.cols();
    const Eigen::Index oh = (h + 1) / 2;
    const Eigen::Index ow = (w + 1) / 2;
    auto cx = [w](Eigen::Index x) { return std::clamp<Eigen::Index>(x, 0, w - 1); };
    auto cy = [h](Eigen::Index y) { return std::clamp<Eigen::Index>(y, 0, h - 1); };

    Plane<Scalar> horiz(h, ow);
    for (Eigen::Index y = 0; y < h; ++y)
        for (Eigen::Index j = 0; j < ow; ++j) {
            const Eigen::Index x = 2 * j;
            horiz(y, j) = (in(y, cx(x - 2)) + Scalar(4) * in(y, cx(x - 1)) + Scalar(6) * in(y, x) +
                           Scalar(4) * in(y, cx(x + 1)) + in(y, cx(x + 2))) / Scalar(16);
        }
    Plane<Scalar> out(oh, ow);
    for (Eigen::Index i = 0; i < oh; ++i) {
        const Eigen::Index y = 2 * i;
        out.row(i) = (horiz.row(cy(y - 2)) + Scalar(4) * horiz.row(cy(y - 1)) + Scalar(6) * horiz.row(y) +
                      Scalar(4) * horiz.row(cy(y + 1)) + horiz.row(cy(y + 2))) / Scalar(16);
    }
    return out;
}

/// Upsample to rows x cols with the polyphase form of the same kernel:
/// even outputs (x[i-1] + 6 x[i] + x[i+1]) / 8, odd outputs (x[i] + x[i+1]) / 2.
template <typename Scalar>
Plane<Scalar> pyramid_expand(const Plane<Scalar>& in, Eigen::Index rows, Eigen::Index cols) {
    const Eigen::Index h = in.rows();
    const Eigen::Index w = in.cols();
    auto cx = [w](Eigen::Index x) { return std::clamp<Eigen::Index>(x, 0, w - 1); };
    auto cy = [h](Eigen::Index y) { return std::clamp<Eigen::Index>(y, 0, h - 1); };

    Plane<Scalar> horiz(h, cols);
    for (Eigen::Index y = 0; y < h; ++y)
        for (Eigen::Index j = 0; j < cols; ++j) {
            const Eigen::Index i = j / 2;
            horiz(y, j) = (j % 2 == 0)
                              ? (in(y, cx(i - 1)) + Scalar(6) * in(y, cx(i)) + in(y, cx(i + 1))) / Scalar(8)
                              : (in(y, cx(i)) + in(y, cx(i + 1))) / Scalar(2);
        }
    Plane<Scalar> out(rows, cols);
    for (Eigen::Index j = 0; j < rows; ++j) {
        const Eigen::Index i = j / 2;
        if (j % 2 == 0)
            out.row(j) = (horiz.row(cy(i - 1)) + Scalar(6) * horiz.row(cy(i)) + horiz.row(cy(i + 1))) / Scalar(8);
        else
            out.row(j) = (horiz.row(cy(i)) + horiz.row(cy(i + 1))) / Scalar(2);
    }
    return out;
}

/// Level 0 is the input; each further level is pyramid_reduce of the last.
template <typename Scalar>
std::vector<Plane<Scalar>> gaussian_pyramid(const Plane<Scalar>& plane, int levels) {
    if (levels < 1) throw ContractViolation("gaussian_pyramid: levels must be >= 1");
    std::vector<Plane<Scalar>> pyr;
    pyr.reserve(static_cast<std::size_t>(levels));
    pyr.push_back(plane);
    for (int k = 1; k < levels; ++k) pyr.push_back(pyramid_reduce(pyr.back()));
    return pyr;
}

/// Band-pass levels followed by the low-pass residual (the last entry).
template <typename Scalar>
struct LaplacianPyramid {
    std::vector<Plane<Scalar>> levels;
};

template <typename Scalar>
LaplacianPyramid<Scalar> laplacian_pyramid(const Plane<Scalar>& plane, int levels) {
    auto gauss = gaussian_pyramid(plane, levels);
    LaplacianPyramid<Scalar> pyr;
    pyr.levels.resize(gauss.size());
    for (std::size_t k = 0; k + 1 < gauss.size(); ++k)
        pyr.levels[k] = gauss[k] - pyramid_expand(gauss[k + 1], gauss[k].rows(), gauss[k].cols());
    pyr.levels.back() = std::move(gauss.back());
    return pyr;
}

template <typename Scalar>
Plane<Scalar> collapse(const LaplacianPyramid<Scalar>& pyr) {
    if (pyr.levels.empty()) throw ContractViolation("collapse: empty pyramid");
    Plane<Scalar> acc = pyr.levels.back();
    for (std::size_t k = pyr.levels.size() - 1; k-- > 0;)
        acc = pyr.levels[k] + pyramid_expand(acc, pyr.levels[k].rows(), pyr.levels[k].cols());
    return acc;
}

/// Per-channel Laplacian pyramids of a color image.
template <typename Scalar>
using RgbLaplacianPyramid = std::array<LaplacianPyramid<Scalar>, 3>;

template <typename Scalar>
RgbLaplacianPyramid<Scalar> laplacian_pyramid(const RgbImage<Scalar>& img, int levels) {
    return {laplacian_pyramid(img.r(), levels), laplacian_pyramid(img.g(), levels),
            laplacian_pyramid(img.b(), levels)};
}

template <typename Scalar>
RgbImage<Scalar> collapse(const RgbLaplacianPyramid<Scalar>& pyr) {
    return RgbImage<Scalar>(collapse(pyr[0]), collapse(pyr[1]), collapse(pyr[2]));
}

// ---------------------------------------------------------------------------
// Fusion
// ---------------------------------------------------------------------------

/// Blends the members' Laplacian pyramids with the Gaussian pyramids of
/// their normalized quality weights and collapses the result. The output is
/// not clamped. max_levels <= 0 means full depth.
template <typename Scalar>
RgbImage<Scalar> fuse(const std::vector<RgbImage<Scalar>>& images, const QualityExponents& exps = {},
                      int max_levels = 0) {
    const WeightMaps<Scalar> weights = quality_weights(images, exps);
    const int depth = pyramid_depth(images.front().width(), images.front().height(), max_levels);

    RgbLaplacianPyramid<Scalar> blended;
    for (std::size_t i = 0; i < images.size(); ++i) {
        const auto wpyr = gaussian_pyramid(weights[i], depth);
        const auto ipyr = laplacian_pyramid(images[i], depth);
        for (int c = 0; c < 3; ++c) {
            auto& dst = blended[static_cast<std::size_t>(c)].levels;
            const auto& src = ipyr[static_cast<std::size_t>(c)].levels;
            if (i == 0) dst.resize(src.size());
            for (std::size_t k = 0; k < src.size(); ++k) {
                if (i == 0)
                    dst[k] = wpyr[k] * src[k];
                else
                    dst[k] += wpyr[k] * src[k];
            }
        }
    }
    return collapse(blended);
}

template <typename Scalar>
RgbImage<Scalar> fuse(const ExposureStack<Scalar>& stack, const QualityExponents& exps = {}, int max_levels = 0) {
    if (stack.empty()) throw ContractViolation("fuse: empty stack");
    std::vector<RgbImage<Scalar>> images;
    images.reserve(stack.size());
    for (const auto& m : stack) images.push_back(m.image);
    return fuse(images, exps, max_levels);
}

/// A multi-exposure fusion method selectable by name.
class FusionBackend {
public:
    virtual ~FusionBackend() = default;
    virtual std::string name() const = 0;
    virtual Image fuse(const std::vector<Image>& images) const = 0;
};

class MertensBackend final : public FusionBackend {
public:
    explicit MertensBackend(QualityExponents exps = {}, int max_levels = 0) : exps_(exps), max_levels_(max_levels) {}
    std::string name() const override { return "mertens"; }
    Image fuse(const std::vector<Image>& images) const override {
        return pmef::fuse(images, exps_, max_levels_);
    }

private:
    QualityExponents exps_;
    int max_levels_;
};

/// Placeholder for methods that are registered but not built.
class UnavailableBackend final : public FusionBackend {
public:
    explicit UnavailableBackend(std::string name) : name_(std::move(name)) {}
    std::string name() const override { return name_; }
    Image fuse(const std::vector<Image>&) const override {
        throw NotImplemented("fusion backend '" + name_ + "' is not implemented");
    }

private:
    std::string name_;
};

inline std::vector<std::string> fusion_backend_names() { return {"mertens", "sakai", "nejati"}; }

/// "mertens" is implemented; "sakai" and "nejati" resolve to backends that
/// throw NotImplemented. Unknown names throw ContractViolation.
inline std::unique_ptr<FusionBackend> make_fusion_backend(const std::string& name, QualityExponents exps = {}) {
    if (name == "mertens") return std::make_unique<MertensBackend>(exps);
    if (name == "sakai" || name == "nejati") return std::make_unique<UnavailableBackend>(name);
    throw ContractViolation("unknown fusion backend '" + name + "'");
}

}  // namespace pmef
