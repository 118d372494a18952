#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "mibench/datagen/embedding.hpp"
#include "mibench/datagen/gaussian.hpp"
#include "mibench/datagen/image.hpp"

namespace mibench {

using DatasetSpec = std::variant<GaussianSpec, ImageSpec, EmbeddingSpec>;

inline double true_mi_nats(const DatasetSpec& spec) {
  return std::visit([](const auto& s) { return s.true_mi_nats(); }, spec);
}

inline double true_mi_bits(const DatasetSpec& spec) {
  return true_mi_nats(spec) / 0.6931471805599453;
}

inline void validate(const DatasetSpec& spec) {
  std::visit([](const auto& s) { s.validate(); }, spec);
}

// Batch source for the run harness. set_level_nats re-targets the knob that
// controls the true MI (rho for Gaussians, beta for class-bit datasets).
class PairSampler {
 public:
  virtual ~PairSampler() = default;
  virtual void set_level_nats(double mi_nats) = 0;
  virtual double level_nats() const = 0;
  virtual PairBatch sample(Index k, Rng& rng) = 0;
  virtual Index dim_x() const = 0;
  virtual Index dim_y() const = 0;
};

class GaussianPairSampler final : public PairSampler {
 public:
  explicit GaussianPairSampler(GaussianSpec spec) : spec_(spec) { spec_.validate(); }

  void set_level_nats(double mi_nats) override {
    spec_.rho = gaussian_rho_for_mi(spec_.d_g, mi_nats);
  }
  double level_nats() const override { return spec_.true_mi_nats(); }
  PairBatch sample(Index k, Rng& rng) override { return sample_gaussian_pair(spec_, k, rng); }
  Index dim_x() const override { return spec_.d_g; }
  Index dim_y() const override { return spec_.d_g; }

 private:
  GaussianSpec spec_;
};

// Fixed bank of composed samples with their class-bit patterns, bucketed by
// pattern. Pairing draws fresh uniform bits per row, picks x from the matching
// bucket, pushes the bits through the channel, and picks an independent y,
// never reusing x's bank row. Pair diversity therefore far exceeds bank size.
struct SampleBank {
  MatrixF rows;                            // bank_size x d_r, float storage
  std::vector<std::uint8_t> bits;          // bank_size * d_s
  Index d_s = 0;
  std::vector<std::vector<Index>> buckets;  // 2^d_s lists of row indices
  std::vector<Index> pos_in_bucket;         // row -> its position within its bucket

  Index size() const { return rows.rows(); }

  static SampleBank build(const std::vector<PairBatch>& batches, Index d_s) {
    SampleBank bank;
    bank.d_s = d_s;
    Index total = 0;
    for (const auto& b : batches) total += b.k();
    bank.rows.resize(total, batches.front().x.cols());
    bank.bits.resize(static_cast<std::size_t>(total * d_s));
    Index at = 0;
    for (const auto& b : batches) {
      bank.rows.middleRows(at, b.k()) = b.x.cast<float>();
      std::copy(b.class_bits_x.begin(), b.class_bits_x.end(),
                bank.bits.begin() + at * d_s);
      at += b.k();
    }
    bank.index_buckets();
    return bank;
  }

  void index_buckets() {
    if (d_s > 20) throw ConfigError("sample bank: d_s too large to bucket (max 20)");
    buckets.assign(std::size_t{1} << d_s, {});
    pos_in_bucket.assign(static_cast<std::size_t>(size()), 0);
    for (Index i = 0; i < size(); ++i) {
      std::size_t key = 0;
      for (Index s = 0; s < d_s; ++s)
        key |= static_cast<std::size_t>(bits[static_cast<std::size_t>(i * d_s + s)]) << s;
      pos_in_bucket[static_cast<std::size_t>(i)] = static_cast<Index>(buckets[key].size());
      buckets[key].push_back(i);
    }
    for (std::size_t key = 0; key < buckets.size(); ++key)
      if (buckets[key].size() < 2)
        throw ConfigError(
            "sample bank: class pattern " + std::to_string(key) +
            " has fewer than 2 samples; increase bank_size or reduce d_s");
  }
};

class BankPairSampler final : public PairSampler {
 public:
  BankPairSampler(SampleBank bank, double beta) : bank_(std::move(bank)), beta_(beta) {}

  void set_level_nats(double mi_nats) override {
    beta_ = beta_for_mi_bits(bank_.d_s, mi_nats / 0.6931471805599453);
  }
  double level_nats() const override {
    return bsc_true_mi_bits(bank_.d_s, beta_) * 0.6931471805599453;
  }

  PairBatch sample(Index k, Rng& rng) override {
    const Index d_s = bank_.d_s;
    PairBatch batch;
    batch.d_s = d_s;
    batch.x.resize(k, bank_.rows.cols());
    batch.y.resize(k, bank_.rows.cols());
    batch.class_bits_x.resize(static_cast<std::size_t>(k * d_s));
    batch.class_bits_y.resize(static_cast<std::size_t>(k * d_s));
    std::uniform_int_distribution<int> coin(0, 1);
    for (Index i = 0; i < k; ++i) {
      Bits bits_x(static_cast<std::size_t>(d_s));
      for (auto& b : bits_x) b = static_cast<std::uint8_t>(coin(rng));
      Bits bits_y = apply_bsc(bits_x, beta_, rng);

      const Index xi = pick(bits_x, -1, rng);
      const Index yi = pick(bits_y, bits_y == bits_x ? xi : -1, rng);
      batch.x.row(i) = bank_.rows.row(xi).cast<double>();
      batch.y.row(i) = bank_.rows.row(yi).cast<double>();
      std::copy(bits_x.begin(), bits_x.end(), batch.class_bits_x.begin() + i * d_s);
      std::copy(bits_y.begin(), bits_y.end(), batch.class_bits_y.begin() + i * d_s);
    }
    return batch;
  }

  Index dim_x() const override { return bank_.rows.cols(); }
  Index dim_y() const override { return bank_.rows.cols(); }
  double beta() const { return beta_; }

 private:
  Index pick(const Bits& bits, Index avoid, Rng& rng) const {
    std::size_t key = 0;
    for (std::size_t s = 0; s < bits.size(); ++s)
      key |= static_cast<std::size_t>(bits[s]) << s;
    const auto& bucket = bank_.buckets[key];
    const auto n = static_cast<Index>(bucket.size());
    if (avoid < 0) {
      std::uniform_int_distribution<Index> pick_any(0, n - 1);
      return bucket[static_cast<std::size_t>(pick_any(rng))];
    }
    const Index avoid_pos = bank_.pos_in_bucket[static_cast<std::size_t>(avoid)];
    std::uniform_int_distribution<Index> pick_other(0, n - 2);
    Index pos = pick_other(rng);
    if (pos >= avoid_pos) ++pos;
    return bucket[static_cast<std::size_t>(pos)];
  }

  SampleBank bank_;
  double beta_;
};

// Pre-paired rows (imported embedding files): row i of x pairs with row i of
// y, resampled with replacement. The true MI comes from the file's manifest,
// so only single-level schedules at that value are possible.
class FixedPairSampler final : public PairSampler {
 public:
  FixedPairSampler(Matrix x, Matrix y, double mi_nats)
      : x_(std::move(x)), y_(std::move(y)), mi_nats_(mi_nats) {
    require_shape(x_.rows() == y_.rows() && x_.rows() >= 2,
                  "fixed pair sampler: x/y need matching rows (>= 2)");
  }

  void set_level_nats(double mi_nats) override {
    if (std::abs(mi_nats - mi_nats_) > 1e-9)
      throw ConfigError("imported pair data has fixed true MI; schedule level must match");
  }
  double level_nats() const override { return mi_nats_; }

  PairBatch sample(Index k, Rng& rng) override {
    std::uniform_int_distribution<Index> pick(0, x_.rows() - 1);
    PairBatch batch;
    batch.x.resize(k, x_.cols());
    batch.y.resize(k, y_.cols());
    for (Index i = 0; i < k; ++i) {
      const Index r = pick(rng);
      batch.x.row(i) = x_.row(r);
      batch.y.row(i) = y_.row(r);
    }
    return batch;
  }

  Index dim_x() const override { return x_.cols(); }
  Index dim_y() const override { return y_.cols(); }

 private:
  Matrix x_, y_;
  double mi_nats_;
};

// Compose a bank of single observations for the class-bit dataset families.
// Bank entries are x-side draws; the channel acts at pairing time, so one
// bank serves every beta level of a schedule.
inline SampleBank build_image_bank(const ImageSpec& spec, const SourceBank& source, Index bank_size,
                                   std::uint64_t seed) {
  ImageSpec clean = spec;
  clean.beta = 0.0;  // bank rows are unconditioned samples; beta applies when pairing
  Rng rng = make_rng(seed, rng_stream::kBankBuild);
  std::vector<PairBatch> parts;
  const Index chunk = 512;
  for (Index done = 0; done < bank_size; done += chunk) {
    const Index n = std::min(chunk, bank_size - done);
    PairBatch b = compose_image_pair(clean, source, n, rng);
    b.y.resize(0, 0);  // only the x side feeds the bank
    parts.push_back(std::move(b));
  }
  return SampleBank::build(parts, spec.d_s());
}

inline SampleBank build_embedding_bank(const EmbeddingModel& model, Index bank_size,
                                       std::uint64_t seed) {
  Rng rng = make_rng(seed, rng_stream::kBankBuild);
  std::vector<PairBatch> parts;
  const Index chunk = 512;
  for (Index done = 0; done < bank_size; done += chunk) {
    const Index n = std::min(chunk, bank_size - done);
    PairBatch b = model.sample_pair(n, rng);
    b.y.resize(0, 0);
    parts.push_back(std::move(b));
  }
  return SampleBank::build(parts, model.spec.d_s);
}

}  // namespace mibench
