#include "jigsolve/cost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jigsolve/errors.hpp"

namespace jigsolve {

double neg_log(double p) { return -std::log(std::max(p, kProbabilityFloor)); }

namespace {

void check_distribution(std::span<const double> row, const char* what) {
  double sum = 0.0;
  for (double x : row) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
      throw DomainError(std::string(what) + ": probability outside [0,1]");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kRowSumTolerance) {
    throw DomainError(std::string(what) + ": row does not sum to 1");
  }
}

void check_size(int expected, int actual, const char* what) {
  if (expected != actual) {
    throw DomainError(std::string(what) + ": size mismatch (" + std::to_string(expected) + " vs " +
                      std::to_string(actual) + ")");
  }
}

}  // namespace

UnaryMatrix::UnaryMatrix(Matrix probs) : probs_(std::move(probs)) {
  if (probs_.rows() != probs_.cols() || probs_.rows() == 0) {
    throw DomainError("unary matrix must be square and non-empty");
  }
  for (std::size_t r = 0; r < probs_.rows(); ++r) check_distribution(probs_.row(r), "unary matrix");
}

UnaryMatrix UnaryMatrix::uniform(int n) {
  return UnaryMatrix(Matrix(n, n, 1.0 / n));
}

UnaryMatrix UnaryMatrix::one_hot(const Configuration& config) {
  Matrix m(config.size(), config.size(), 0.0);
  for (int s = 0; s < config.size(); ++s) m(s, config[s]) = 1.0;
  return UnaryMatrix(std::move(m));
}

BinaryTable::BinaryTable(int n) : n_(n) {
  if (n < 1) throw DomainError("binary table needs n >= 1");
  Dist uniform;
  uniform.fill(1.0 / kNumRelClasses);
  dist_.assign(static_cast<std::size_t>(n) * n, uniform);
}

BinaryTable BinaryTable::one_hot(const Configuration& config, const GridShape& shape) {
  check_size(shape.size(), config.size(), "binary table");
  BinaryTable t(config.size());
  for (int p = 0; p < config.size(); ++p) {
    for (int q = 0; q < config.size(); ++q) {
      if (p == q) continue;
      Dist d{};
      d[static_cast<int>(relative_type(config[p], config[q], shape))] = 1.0;
      t.set(p, q, d);
    }
  }
  return t;
}

void BinaryTable::set(int p, int q, const Dist& d) {
  if (p < 0 || q < 0 || p >= n_ || q >= n_ || p == q) throw DomainError("binary table: bad pair");
  check_distribution(d, "binary table");
  dist_[index(p, q)] = d;
}

std::vector<double> softmax(std::span<const double> logits) {
  double max = -INFINITY;
  for (double x : logits) {
    if (!std::isfinite(x)) throw DomainError("softmax: non-finite logit");
    max = std::max(max, x);
  }
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max);
    sum += out[i];
  }
  for (double& x : out) x /= sum;
  return out;
}

BinaryTable::Dist softmax9(std::span<const double> logits) {
  if (logits.size() != kNumRelClasses) throw DomainError("softmax9 needs 9 logits");
  const auto p = softmax(logits);
  BinaryTable::Dist out;
  std::copy(p.begin(), p.end(), out.begin());
  return out;
}

UnaryMatrix row_softmax(const Matrix& logits) {
  if (logits.rows() != logits.cols()) throw DomainError("row_softmax: logits must be square");
  Matrix probs(logits.rows(), logits.cols());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const auto p = softmax(logits.row(r));
    std::copy(p.begin(), p.end(), probs.row(r).begin());
  }
  return UnaryMatrix(std::move(probs));
}

double unary_cost(const UnaryMatrix& u, const Configuration& c) {
  check_size(u.size(), c.size(), "unary_cost");
  double sum = 0.0;
  for (int s = 0; s < c.size(); ++s) sum += neg_log(u.at(s, c[s]));
  return sum;
}

double binary_cost(const BinaryTable& v, const Configuration& c, const GridShape& shape) {
  if (!shape.is_2d()) throw UnsupportedError("binary terms are not defined on 3D grids");
  check_size(shape.size(), c.size(), "binary_cost");
  check_size(v.size(), c.size(), "binary_cost");
  const auto rel = relation_table(shape);
  const int n = c.size();
  double sum = 0.0;
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (p == q) continue;
      sum += neg_log(v.at(p, q)[static_cast<int>(rel[c[p] * n + c[q]])]);
    }
  }
  return sum;
}

CostBreakdown total_cost(const UnaryMatrix& u, const BinaryTable* v, const Configuration& c,
                         const GridShape& shape) {
  check_size(shape.size(), c.size(), "total_cost");
  CostBreakdown out;
  out.unary = unary_cost(u, c);
  out.binary = v ? binary_cost(*v, c, shape) : 0.0;
  out.total = out.unary + out.binary;
  return out;
}

std::vector<double> column_sum_deviation(const UnaryMatrix& u) {
  const int n = u.size();
  std::vector<double> dev(n, 0.0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) dev[c] += u.at(r, c);
  }
  for (double& d : dev) d = std::abs(d - 1.0);
  return dev;
}

CostEvaluator::CostEvaluator(const UnaryMatrix& u, const BinaryTable* v, const GridShape& shape)
    : n_(u.size()), has_binary_(v != nullptr) {
  check_size(shape.size(), n_, "cost evaluator");
  unary_.resize(static_cast<std::size_t>(n_) * n_);
  for (int s = 0; s < n_; ++s) {
    for (int a = 0; a < n_; ++a) unary_[s * n_ + a] = neg_log(u.at(s, a));
  }
  if (!v) return;
  if (!shape.is_2d()) throw UnsupportedError("binary terms are not defined on 3D grids");
  check_size(n_, v->size(), "cost evaluator");
  const auto rel = relation_table(shape);
  const std::size_t nn = static_cast<std::size_t>(n_) * n_;
  pair_.assign(nn * nn, 0.0);
  for (int p = 0; p < n_; ++p) {
    for (int q = 0; q < n_; ++q) {
      if (p == q) continue;
      const auto& d = v->at(p, q);
      double* block = &pair_[(static_cast<std::size_t>(p) * n_ + q) * nn];
      for (int a = 0; a < n_; ++a) {
        for (int b = 0; b < n_; ++b) {
          if (a != b) block[a * n_ + b] = neg_log(d[static_cast<int>(rel[a * n_ + b])]);
        }
      }
    }
  }
}

double CostEvaluator::unary(std::span<const int> assign) const {
  double sum = 0.0;
  for (int s = 0; s < n_; ++s) sum += unary_[s * n_ + assign[s]];
  return sum;
}

double CostEvaluator::binary(std::span<const int> assign) const {
  if (!has_binary_) return 0.0;
  const std::size_t nn = static_cast<std::size_t>(n_) * n_;
  double sum = 0.0;
  for (int p = 0; p < n_; ++p) {
    const double* row = &pair_[static_cast<std::size_t>(p) * n_ * nn];
    const int ap = assign[p] * n_;
    for (int q = 0; q < n_; ++q) {
      if (p == q) continue;
      sum += row[q * nn + ap + assign[q]];
    }
  }
  return sum;
}

CostBreakdown CostEvaluator::evaluate(std::span<const int> assign) const {
  CostBreakdown out;
  out.unary = unary(assign);
  out.binary = binary(assign);
  out.total = out.unary + out.binary;
  return out;
}

}  // namespace jigsolve
