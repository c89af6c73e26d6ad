#include "jigsolve/scorer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "jigsolve/errors.hpp"

namespace jigsolve {

Scores oracle_score(const Configuration& truth, double unary_noise, double binary_noise, Rng& rng,
                    const GridShape& shape) {
  if (unary_noise < 0.0 || unary_noise > 1.0 || binary_noise < 0.0 || binary_noise > 1.0) {
    throw DomainError("oracle noise must be in [0,1]");
  }
  const int n = shape.size();
  if (truth.size() != n) throw DomainError("oracle: truth does not match grid");

  Matrix u(n, n, unary_noise / n);
  for (int s = 0; s < n; ++s) {
    int label = truth[s];
    if (rng.bernoulli(unary_noise)) label = static_cast<int>(rng.uniform_below(n));
    u(s, label) += 1.0 - unary_noise;
  }
  Scores out{UnaryMatrix(std::move(u)), std::nullopt};
  if (!shape.is_2d()) return out;

  const auto rel = relation_table(shape);
  BinaryTable v(n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (p == q) continue;
      int label = static_cast<int>(rel[truth[p] * n + truth[q]]);
      if (rng.bernoulli(binary_noise)) label = static_cast<int>(rng.uniform_below(kNumRelClasses));
      BinaryTable::Dist d;
      d.fill(binary_noise / kNumRelClasses);
      d[label] += 1.0 - binary_noise;
      v.set(p, q, d);
    }
  }
  out.binary = std::move(v);
  return out;
}

OracleScorer::OracleScorer(double unary_noise, double binary_noise, std::uint64_t seed)
    : unary_noise_(unary_noise), binary_noise_(binary_noise), rng_(seed) {
  if (unary_noise < 0.0 || unary_noise > 1.0 || binary_noise < 0.0 || binary_noise > 1.0) {
    throw DomainError("oracle noise must be in [0,1]");
  }
}

Scores OracleScorer::score(const PuzzleInstance& arranged) {
  return oracle_score(arranged.truth, unary_noise_, binary_noise_, rng_, arranged.shape);
}

LinearScorer::LinearScorer(GridShape shape, int feature_dim, FeatureRecipe recipe)
    : shape_(std::move(shape)), d_(feature_dim), recipe_(recipe) {
  if (d_ < 1) throw DomainError("feature dimension must be >= 1");
  params_.assign(unary_param_count() + binary_param_count(), 0.0);
}

namespace {

struct Forward {
  Matrix unary_logits;               // n x n
  std::vector<double> left, right;   // n x 9: Wb_left F[p], Wb_right F[q]
};

Forward forward(const LinearScorer& model, const Matrix& f) {
  const int n = model.cells();
  const int d = model.feature_dim();
  if (f.rows() != static_cast<std::size_t>(n) || f.cols() != static_cast<std::size_t>(d)) {
    throw DomainError("feature set is " + std::to_string(f.rows()) + "x" + std::to_string(f.cols()) +
                      ", model expects " + std::to_string(n) + "x" + std::to_string(d));
  }
  const auto wu = model.unary_weights();
  const auto bu = model.unary_bias();
  const std::vector<double>& x = f.data();  // flatten(F)
  const std::size_t in = x.size();

  Forward out;
  out.unary_logits = Matrix(n, n);
  for (int k = 0; k < n * n; ++k) {
    const double* w = wu.data() + k * in;
    double z = bu[k];
    for (std::size_t i = 0; i < in; ++i) z += w[i] * x[i];
    out.unary_logits.data()[k] = z;
  }
  if (model.uses_binary()) {
    const auto wb = model.binary_weights();
    out.left.assign(static_cast<std::size_t>(n) * kNumRelClasses, 0.0);
    out.right.assign(static_cast<std::size_t>(n) * kNumRelClasses, 0.0);
    for (int p = 0; p < n; ++p) {
      const auto fp = f.row(p);
      for (int r = 0; r < kNumRelClasses; ++r) {
        const double* w = wb.data() + r * 2 * d;
        double a = 0.0, b = 0.0;
        for (int i = 0; i < d; ++i) {
          a += w[i] * fp[i];
          b += w[d + i] * fp[i];
        }
        out.left[p * kNumRelClasses + r] = a;
        out.right[p * kNumRelClasses + r] = b;
      }
    }
  }
  return out;
}

std::array<double, kNumRelClasses> pair_logits(const LinearScorer& model, const Forward& fw, int p, int q) {
  const auto bb = model.binary_bias();
  std::array<double, kNumRelClasses> z;
  for (int r = 0; r < kNumRelClasses; ++r) {
    z[r] = fw.left[p * kNumRelClasses + r] + fw.right[q * kNumRelClasses + r] + bb[r];
  }
  return z;
}

double log_sum_exp(std::span<const double> z) {
  const double m = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double v : z) s += std::exp(v - m);
  return m + std::log(s);
}

}  // namespace

Scores linear_score(const LinearScorer& model, const Matrix& features) {
  const Forward fw = forward(model, features);
  Scores out{row_softmax(fw.unary_logits), std::nullopt};
  if (!model.uses_binary()) return out;
  const int n = model.cells();
  BinaryTable v(n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (p != q) v.set(p, q, softmax9(pair_logits(model, fw, p, q)));
    }
  }
  out.binary = std::move(v);
  return out;
}

LossGrad loss_and_grad(const LinearScorer& model, const Matrix& features, const Configuration& truth) {
  const int n = model.cells();
  const int d = model.feature_dim();
  if (truth.size() != n) throw DomainError("loss: truth does not match model grid");
  const Forward fw = forward(model, features);
  const std::vector<double>& x = features.data();
  const std::size_t in = x.size();

  LossGrad out;
  out.grad.assign(model.param_count(), 0.0);
  double* g_wu = out.grad.data();
  double* g_bu = g_wu + model.unary_w_size();
  double* g_wb = g_bu + model.unary_b_size();
  double* g_bb = g_wb + model.binary_w_size();

  for (int s = 0; s < n; ++s) {
    const auto z = fw.unary_logits.row(s);
    const double lse = log_sum_exp(z);
    out.unary_loss += lse - z[truth[s]];
    for (int j = 0; j < n; ++j) {
      const double dz = (std::exp(z[j] - lse) - (j == truth[s] ? 1.0 : 0.0)) / n;
      const int k = s * n + j;
      g_bu[k] += dz;
      if (dz == 0.0) continue;
      double* gw = g_wu + k * in;
      for (std::size_t i = 0; i < in; ++i) gw[i] += dz * x[i];
    }
  }
  out.unary_loss /= n;

  if (model.uses_binary() && n > 1) {
    const auto rel = relation_table(model.shape());
    const double pairs = static_cast<double>(n) * (n - 1);
    std::vector<double> left_sum(static_cast<std::size_t>(n) * kNumRelClasses, 0.0);
    std::vector<double> right_sum(static_cast<std::size_t>(n) * kNumRelClasses, 0.0);
    for (int p = 0; p < n; ++p) {
      for (int q = 0; q < n; ++q) {
        if (p == q) continue;
        const auto z = pair_logits(model, fw, p, q);
        const double lse = log_sum_exp(z);
        const int target = static_cast<int>(rel[truth[p] * n + truth[q]]);
        out.binary_loss += lse - z[target];
        for (int r = 0; r < kNumRelClasses; ++r) {
          const double dz = (std::exp(z[r] - lse) - (r == target ? 1.0 : 0.0)) / pairs;
          left_sum[p * kNumRelClasses + r] += dz;
          right_sum[q * kNumRelClasses + r] += dz;
          g_bb[r] += dz;
        }
      }
    }
    out.binary_loss /= pairs;
    for (int p = 0; p < n; ++p) {
      const auto fp = features.row(p);
      for (int r = 0; r < kNumRelClasses; ++r) {
        double* gw = g_wb + r * 2 * d;
        const double a = left_sum[p * kNumRelClasses + r];
        const double b = right_sum[p * kNumRelClasses + r];
        for (int i = 0; i < d; ++i) {
          gw[i] += a * fp[i];
          gw[d + i] += b * fp[i];
        }
      }
    }
  }
  out.loss = out.unary_loss + out.binary_loss;
  return out;
}

namespace {

constexpr char kModelMagic[4] = {'J', 'S', 'W', '1'};
constexpr std::uint32_t kModelVersion = 1;

static_assert(std::endian::native == std::endian::little, "model I/O assumes a little-endian host");

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  unsigned char b[4];
  std::memcpy(b, &v, 4);
  out.insert(out.end(), b, b + 4);
}

std::uint32_t get_u32(const std::vector<unsigned char>& bytes, std::size_t& pos) {
  if (pos + 4 > bytes.size()) throw ParseError("truncated model header", pos);
  std::uint32_t v;
  std::memcpy(&v, bytes.data() + pos, 4);
  pos += 4;
  return v;
}

}  // namespace

std::vector<unsigned char> encode_model(const LinearScorer& model) {
  std::vector<unsigned char> out(kModelMagic, kModelMagic + 4);
  put_u32(out, kModelVersion);
  put_u32(out, static_cast<std::uint32_t>(model.shape().rank()));
  for (int e : model.shape().extents()) put_u32(out, static_cast<std::uint32_t>(e));
  put_u32(out, static_cast<std::uint32_t>(model.feature_dim()));
  put_u32(out, static_cast<std::uint32_t>(model.recipe()));
  for (double w : model.params()) {
    const float f = static_cast<float>(w);
    unsigned char b[4];
    std::memcpy(b, &f, 4);
    out.insert(out.end(), b, b + 4);
  }
  return out;
}

LinearScorer decode_model(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kModelMagic, 4) != 0) {
    throw FormatError("not a model file (bad magic)");
  }
  std::size_t pos = 4;
  const std::uint32_t version = get_u32(bytes, pos);
  if (version != kModelVersion) throw FormatError("unsupported model version " + std::to_string(version));
  const std::uint32_t rank = get_u32(bytes, pos);
  if (rank != 2 && rank != 3) throw FormatError("model grid rank must be 2 or 3");
  std::vector<int> extents;
  for (std::uint32_t i = 0; i < rank; ++i) {
    const std::uint32_t e = get_u32(bytes, pos);
    if (e == 0 || e > 64) throw FormatError("implausible model grid extent");
    extents.push_back(static_cast<int>(e));
  }
  const std::uint32_t d = get_u32(bytes, pos);
  const std::uint32_t recipe = get_u32(bytes, pos);
  if (d == 0 || d > 4096) throw FormatError("implausible feature dimension");
  if (recipe != 1 && recipe != 2) throw FormatError("unknown feature recipe " + std::to_string(recipe));
  LinearScorer model(GridShape(extents), static_cast<int>(d), static_cast<FeatureRecipe>(recipe));
  if (bytes.size() - pos != model.param_count() * 4) throw FormatError("model payload size mismatch");
  for (double& w : model.params()) {
    float f;
    std::memcpy(&f, bytes.data() + pos, 4);
    pos += 4;
    if (!std::isfinite(f)) throw FormatError("model contains non-finite weights");
    w = f;
  }
  return model;
}

void save_model(const LinearScorer& model, const std::filesystem::path& path) {
  write_file(path, encode_model(model));
}

LinearScorer load_model(const std::filesystem::path& path) { return decode_model(read_file(path)); }

Scores LinearProvider::score(const PuzzleInstance& arranged) {
  if (!(arranged.shape == model_.shape())) {
    throw ConfigError("model grid " + model_.shape().to_string() + " does not match puzzle grid " +
                      arranged.shape.to_string());
  }
  if (!arranged.has_pixels()) throw DomainError("the linear scorer needs patch pixels");
  return linear_score(model_, feature_set(arranged.patches));
}

}  // namespace jigsolve
