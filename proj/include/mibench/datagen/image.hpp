#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "mibench/datagen/bsc.hpp"
#include "mibench/datagen/pair_batch.hpp"
#include "mibench/matrix.hpp"
#include "mibench/rng.hpp"

namespace mibench {

// Grayscale planes are Matrix values in [0, 1]; a color image is a vector of
// planes. Flattened observations are plane-major.
using Planes = std::vector<Matrix>;

// Standard bilinear resampling with half-pixel centers. Output stays in the
// convex hull of the inputs, so [0, 1] is preserved; same-size is identity.
inline Matrix resize_bilinear(const Matrix& src, Index out_h, Index out_w) {
  if (out_h < 2 || out_w < 2) throw ConfigError("resize_bilinear: target side must be >= 2");
  if (src.rows() < 1 || src.cols() < 1) throw ConfigError("resize_bilinear: empty source");
  Matrix out(out_h, out_w);
  const double sy = static_cast<double>(src.rows()) / static_cast<double>(out_h);
  const double sx = static_cast<double>(src.cols()) / static_cast<double>(out_w);
  for (Index r = 0; r < out_h; ++r) {
    double fy = (static_cast<double>(r) + 0.5) * sy - 0.5;
    fy = std::clamp(fy, 0.0, static_cast<double>(src.rows() - 1));
    const Index y0 = static_cast<Index>(std::floor(fy));
    const Index y1 = std::min(y0 + 1, src.rows() - 1);
    const double wy = fy - static_cast<double>(y0);
    for (Index c = 0; c < out_w; ++c) {
      double fx = (static_cast<double>(c) + 0.5) * sx - 0.5;
      fx = std::clamp(fx, 0.0, static_cast<double>(src.cols() - 1));
      const Index x0 = static_cast<Index>(std::floor(fx));
      const Index x1 = std::min(x0 + 1, src.cols() - 1);
      const double wx = fx - static_cast<double>(x0);
      out(r, c) = (1.0 - wy) * ((1.0 - wx) * src(y0, x0) + wx * src(y0, x1)) +
                  wy * ((1.0 - wx) * src(y1, x0) + wx * src(y1, x1));
    }
  }
  return out;
}

inline Matrix resize_bilinear(const Matrix& src, Index new_side) {
  return resize_bilinear(src, new_side, new_side);
}

// Composite a background under an image at strength eta: out = max(img, eta*bg).
// The foreground stays on top with no occlusion and values remain in [0, 1].
inline Matrix add_nuisance(const Matrix& image, const Matrix& background, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("add_nuisance: eta must lie in [0, 1]");
  require_shape(image.rows() == background.rows() && image.cols() == background.cols(),
                "add_nuisance: image/background shape mismatch");
  return image.cwiseMax(eta * background);
}

// Per-class source images plus an optional background pool.
struct SourceBank {
  std::vector<std::vector<Matrix>> digits{10};  // [label] -> grayscale images
  std::vector<Planes> backgrounds;              // each 1 or 3 planes
  std::string provenance;
};

// Procedural two-class glyph bank: class 0 renders as an elliptical ring,
// class 1 as a near-vertical bar, both with jittered geometry and intensity.
// The classes are linearly separable by pixel statistics, which keeps the
// decodability gate at accuracy 1.0 without external data files.
inline void add_synthetic_digits(SourceBank& bank, Index per_class, std::uint64_t seed,
                                 Index canvas = 28) {
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double mid = static_cast<double>(canvas - 1) / 2.0;

  auto render_ring = [&](Matrix& img) {
    const double cx = mid + 4.0 * (u01(rng) - 0.5);
    const double cy = mid + 4.0 * (u01(rng) - 0.5);
    const double rx = 6.5 + 3.0 * u01(rng);
    const double ry = 6.5 + 3.0 * u01(rng);
    const double stroke = 1.2 + 1.2 * u01(rng);
    const double intensity = 0.75 + 0.25 * u01(rng);
    for (Index r = 0; r < canvas; ++r)
      for (Index c = 0; c < canvas; ++c) {
        const double dx = (static_cast<double>(c) - cx) / rx;
        const double dy = (static_cast<double>(r) - cy) / ry;
        const double d = std::abs(std::sqrt(dx * dx + dy * dy) - 1.0) * std::min(rx, ry);
        const double alpha = std::clamp((stroke - d) / 1.5 + 0.5, 0.0, 1.0);
        img(r, c) = intensity * alpha;
      }
  };
  auto render_bar = [&](Matrix& img) {
    const double cx = mid + 4.0 * (u01(rng) - 0.5);
    const double cy = mid + 4.0 * (u01(rng) - 0.5);
    const double angle = 0.6 * (u01(rng) - 0.5);
    const double half_len = 7.0 + 3.0 * u01(rng);
    const double half_thick = 1.0 + 1.2 * u01(rng);
    const double intensity = 0.75 + 0.25 * u01(rng);
    const double ux = std::sin(angle), uy = std::cos(angle);
    for (Index r = 0; r < canvas; ++r)
      for (Index c = 0; c < canvas; ++c) {
        const double px = static_cast<double>(c) - cx;
        const double py = static_cast<double>(r) - cy;
        const double along = std::clamp(px * ux + py * uy, -half_len, half_len);
        const double ox = px - along * ux;
        const double oy = py - along * uy;
        const double d = std::sqrt(ox * ox + oy * oy);
        const double alpha = std::clamp((half_thick - d) / 1.5 + 0.5, 0.0, 1.0);
        img(r, c) = intensity * alpha;
      }
  };

  for (Index i = 0; i < per_class; ++i) {
    Matrix ring = Matrix::Zero(canvas, canvas);
    render_ring(ring);
    bank.digits[0].push_back(std::move(ring));
    Matrix bar = Matrix::Zero(canvas, canvas);
    render_bar(bar);
    bank.digits[1].push_back(std::move(bar));
  }
  if (bank.provenance.empty()) bank.provenance = "synthetic";
}

// Smooth random fields built by bilinear upsampling coarse uniform grids.
inline void add_synthetic_backgrounds(SourceBank& bank, Index count, Index side, Index channels,
                                      std::uint64_t seed) {
  if (channels != 1 && channels != 3)
    throw ConfigError("add_synthetic_backgrounds: channels must be 1 or 3");
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (Index i = 0; i < count; ++i) {
    Planes planes;
    for (Index ch = 0; ch < channels; ++ch) {
      Matrix coarse(4, 4);
      for (Index r = 0; r < 4; ++r)
        for (Index c = 0; c < 4; ++c) coarse(r, c) = u01(rng);
      planes.push_back(resize_bilinear(coarse, side, side));
    }
    bank.backgrounds.push_back(std::move(planes));
  }
}

// Composed-digit dataset recipe. d_s = grid^2 * channels independent uniform
// class bits; true MI = d_s * (1 - H2(beta)) bits.
struct ImageSpec {
  Index grid = 1;
  Index channels = 1;
  Index side = 64;
  double eta = 0.0;
  double beta = 0.0;
  std::array<int, 2> class_pair{0, 1};

  Index d_s() const { return grid * grid * channels; }
  Index d_r() const { return side * side * channels; }
  Index tile_side() const { return side / grid; }

  void validate() const {
    if (grid < 1) throw ConfigError("ImageSpec: grid must be >= 1");
    if (channels != 1 && channels != 3) throw ConfigError("ImageSpec: channels must be 1 or 3");
    if (side < 2) throw ConfigError("ImageSpec: side must be >= 2");
    if (side % grid != 0) throw ConfigError("ImageSpec: side must be divisible by grid");
    if (side / grid < 2) throw ConfigError("ImageSpec: tile side must be >= 2");
    if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("ImageSpec: eta must lie in [0, 1]");
    if (!(beta >= 0.0 && beta <= 0.5)) throw ConfigError("ImageSpec: beta must lie in [0, 0.5]");
    if (class_pair[0] == class_pair[1]) throw ConfigError("ImageSpec: class_pair must differ");
    for (int cls : class_pair)
      if (cls < 0 || cls > 9) throw ConfigError("ImageSpec: class labels must lie in 0-9");
  }

  double true_mi_bits() const { return bsc_true_mi_bits(d_s(), beta); }
  double true_mi_nats() const { return true_mi_bits() * 0.6931471805599453; }
};

namespace detail {

inline void require_bank_covers(const SourceBank& bank, const ImageSpec& spec) {
  for (int cls : spec.class_pair) {
    const auto& list = bank.digits[static_cast<std::size_t>(cls)];
    if (list.size() < 2)
      throw ConfigError("source bank needs >= 2 images for class " + std::to_string(cls));
  }
  if (spec.eta > 0.0 && bank.backgrounds.empty())
    throw ConfigError("eta > 0 requires a non-empty background bank");
}

// Background entry adapted to the requested channel count and side.
inline Planes adapt_background(const Planes& src, Index channels, Index side) {
  Planes out;
  if (static_cast<Index>(src.size()) == channels) {
    for (const Matrix& p : src) out.push_back(resize_bilinear(p, side, side));
  } else if (src.size() == 3 && channels == 1) {
    Matrix gray = (src[0] + src[1] + src[2]) / 3.0;
    out.push_back(resize_bilinear(gray, side, side));
  } else if (src.size() == 1 && channels == 3) {
    Matrix p = resize_bilinear(src[0], side, side);
    out = {p, p, p};
  } else {
    throw ConfigError("background plane count incompatible with requested channels");
  }
  return out;
}

// One observation from class bits: independent digit draws per tile, optional
// background underneath. When exclude_* is given, a tile whose class matches
// the excluded observation's tile never reuses the same bank index.
inline Planes compose_observation(const ImageSpec& spec, const SourceBank& bank, const Bits& bits,
                                  Rng& rng, std::vector<Index>* indices_out = nullptr,
                                  const Bits* exclude_bits = nullptr,
                                  const std::vector<Index>* exclude_indices = nullptr) {
  const Index g = spec.grid;
  const Index ts = spec.tile_side();
  Planes planes(static_cast<std::size_t>(spec.channels), Matrix::Zero(spec.side, spec.side));
  if (indices_out) indices_out->assign(static_cast<std::size_t>(spec.d_s()), -1);

  for (Index ch = 0; ch < spec.channels; ++ch)
    for (Index tr = 0; tr < g; ++tr)
      for (Index tc = 0; tc < g; ++tc) {
        const std::size_t bit = static_cast<std::size_t>(ch * g * g + tr * g + tc);
        const int cls = spec.class_pair[bits[bit]];
        const auto& list = bank.digits[static_cast<std::size_t>(cls)];
        const auto n = static_cast<Index>(list.size());
        Index idx;
        if (exclude_bits && (*exclude_bits)[bit] == bits[bit]) {
          const Index avoid = (*exclude_indices)[bit];
          std::uniform_int_distribution<Index> pick(0, n - 2);
          idx = pick(rng);
          if (idx >= avoid) ++idx;
        } else {
          std::uniform_int_distribution<Index> pick(0, n - 1);
          idx = pick(rng);
        }
        if (indices_out) (*indices_out)[bit] = idx;
        const Matrix& digit = list[static_cast<std::size_t>(idx)];
        planes[static_cast<std::size_t>(ch)].block(tr * ts, tc * ts, ts, ts) =
            (digit.rows() == ts && digit.cols() == ts) ? digit : resize_bilinear(digit, ts, ts);
      }

  if (!bank.backgrounds.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, bank.backgrounds.size() - 1);
    const Planes bg = adapt_background(bank.backgrounds[pick(rng)], spec.channels, spec.side);
    for (Index ch = 0; ch < spec.channels; ++ch) {
      auto& plane = planes[static_cast<std::size_t>(ch)];
      plane = add_nuisance(plane, bg[static_cast<std::size_t>(ch)], spec.eta);
    }
  }
  return planes;
}

inline void flatten_planes(const Planes& planes, Eigen::Ref<Eigen::RowVectorXd> row) {
  Index at = 0;
  for (const Matrix& p : planes) {
    for (Index r = 0; r < p.rows(); ++r)
      for (Index c = 0; c < p.cols(); ++c) row(at++) = p(r, c);
  }
}

}  // namespace detail

// K paired composed images sharing only their class bits. y's bits pass
// through the binary symmetric channel at spec.beta before composition; the
// same tile position never reuses the identical source image across x and y.
inline PairBatch compose_image_pair(const ImageSpec& spec, const SourceBank& bank, Index k,
                                    Rng& rng) {
  spec.validate();
  detail::require_bank_covers(bank, spec);
  const Index d_s = spec.d_s();
  const Index d_r = spec.d_r();

  PairBatch batch;
  batch.d_s = d_s;
  batch.x.resize(k, d_r);
  batch.y.resize(k, d_r);
  batch.class_bits_x.resize(static_cast<std::size_t>(k * d_s));
  batch.class_bits_y.resize(static_cast<std::size_t>(k * d_s));

  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<Index> x_indices;
  for (Index i = 0; i < k; ++i) {
    Bits bits_x(static_cast<std::size_t>(d_s));
    for (auto& b : bits_x) b = static_cast<std::uint8_t>(coin(rng));
    Bits bits_y = apply_bsc(bits_x, spec.beta, rng);

    Planes px = detail::compose_observation(spec, bank, bits_x, rng, &x_indices);
    Planes py = detail::compose_observation(spec, bank, bits_y, rng, nullptr, &bits_x, &x_indices);
    detail::flatten_planes(px, batch.x.row(i));
    detail::flatten_planes(py, batch.y.row(i));

    std::copy(bits_x.begin(), bits_x.end(), batch.class_bits_x.begin() + i * d_s);
    std::copy(bits_y.begin(), bits_y.end(), batch.class_bits_y.begin() + i * d_s);
  }
  return batch;
}

}  // namespace mibench
