#include "jigsolve/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "jigsolve/errors.hpp"

namespace jigsolve {

GridShape::GridShape(std::vector<int> extents) : extents_(std::move(extents)) {
  if (extents_.size() != 2 && extents_.size() != 3) {
    throw DomainError("grid must have 2 or 3 axes, got " + std::to_string(extents_.size()));
  }
  long long n = 1;
  for (int e : extents_) {
    if (e < 1) throw DomainError("grid extent must be >= 1");
    n *= e;
    if (n > (1 << 20)) throw DomainError("grid has too many cells");
  }
  n_ = static_cast<int>(n);
}

GridShape GridShape::parse(std::string_view text) {
  std::vector<int> extents;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = std::min(text.find_first_of("xX", pos), text.size());
    const std::string_view part = text.substr(pos, next - pos);
    int value = 0;
    const auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (part.empty() || ec != std::errc() || end != part.data() + part.size()) {
      throw DomainError("bad grid '" + std::string(text) + "', expected WxH or WxHxZ");
    }
    extents.push_back(value);
    pos = next + 1;
  }
  return GridShape(std::move(extents));
}

std::string GridShape::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < extents_.size(); ++i) {
    if (i) out += 'x';
    out += std::to_string(extents_[i]);
  }
  return out;
}

bool is_permutation_of_iota(std::span<const int> values) {
  std::vector<char> seen(values.size(), 0);
  for (int v : values) {
    if (v < 0 || static_cast<std::size_t>(v) >= values.size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

Configuration::Configuration(std::vector<int> assign) : assign_(std::move(assign)) {
  if (!is_permutation_of_iota(assign_)) {
    throw DomainError("configuration is not a permutation: " + to_string());
  }
}

Configuration Configuration::identity(int n) {
  if (n < 0) throw DomainError("negative configuration size");
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return Configuration(std::move(v));
}

bool Configuration::is_identity() const {
  for (std::size_t i = 0; i < assign_.size(); ++i) {
    if (assign_[i] != static_cast<int>(i)) return false;
  }
  return true;
}

Configuration Configuration::inverse() const {
  std::vector<int> inv(assign_.size());
  for (std::size_t s = 0; s < assign_.size(); ++s) inv[assign_[s]] = static_cast<int>(s);
  return Configuration(std::move(inv));
}

std::string Configuration::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < assign_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(assign_[i]);
  }
  return out + ")";
}

const char* rel_class_name(RelClass r) {
  switch (r) {
    case RelClass::kTop: return "TOP";
    case RelClass::kBottom: return "BOTTOM";
    case RelClass::kLeft: return "LEFT";
    case RelClass::kRight: return "RIGHT";
    case RelClass::kTopLeft: return "TOP_LEFT";
    case RelClass::kTopRight: return "TOP_RIGHT";
    case RelClass::kBottomLeft: return "BOTTOM_LEFT";
    case RelClass::kBottomRight: return "BOTTOM_RIGHT";
    case RelClass::kNone: return "NONE";
  }
  return "?";
}

RelClass mirror(RelClass r) {
  switch (r) {
    case RelClass::kTop: return RelClass::kBottom;
    case RelClass::kBottom: return RelClass::kTop;
    case RelClass::kLeft: return RelClass::kRight;
    case RelClass::kRight: return RelClass::kLeft;
    case RelClass::kTopLeft: return RelClass::kBottomRight;
    case RelClass::kTopRight: return RelClass::kBottomLeft;
    case RelClass::kBottomLeft: return RelClass::kTopRight;
    case RelClass::kBottomRight: return RelClass::kTopLeft;
    case RelClass::kNone: return RelClass::kNone;
  }
  return RelClass::kNone;
}

PositionId position_to_id(std::span<const int> coords, const GridShape& shape) {
  if (coords.size() != shape.rank()) throw DomainError("coordinate rank does not match grid");
  int id = 0;
  int stride = 1;
  for (std::size_t axis = 0; axis < coords.size(); ++axis) {
    if (coords[axis] < 0 || coords[axis] >= shape.extent(axis)) {
      throw DomainError("coordinate " + std::to_string(coords[axis]) + " out of range on axis " +
                        std::to_string(axis));
    }
    id += coords[axis] * stride;
    stride *= shape.extent(axis);
  }
  return id;
}

std::vector<int> id_to_position(PositionId id, const GridShape& shape) {
  if (id < 0 || id >= shape.size()) throw DomainError("position id out of range: " + std::to_string(id));
  std::vector<int> coords(shape.rank());
  for (std::size_t axis = 0; axis < shape.rank(); ++axis) {
    coords[axis] = id % shape.extent(axis);
    id /= shape.extent(axis);
  }
  return coords;
}

RelClass relative_type(PositionId a, PositionId b, const GridShape& shape) {
  if (!shape.is_2d()) throw UnsupportedError("relative positions are only defined on 2D grids");
  if (a == b) throw DomainError("relative_type needs two distinct cells");
  const auto pa = id_to_position(a, shape);
  const auto pb = id_to_position(b, shape);
  const int dx = pa[0] - pb[0];
  const int dy = pa[1] - pb[1];
  if (std::abs(dx) > 1 || std::abs(dy) > 1) return RelClass::kNone;
  if (dy == -1) return dx == -1 ? RelClass::kTopLeft : dx == 1 ? RelClass::kTopRight : RelClass::kTop;
  if (dy == 1) {
    return dx == -1 ? RelClass::kBottomLeft : dx == 1 ? RelClass::kBottomRight : RelClass::kBottom;
  }
  return dx == -1 ? RelClass::kLeft : RelClass::kRight;
}

std::vector<RelClass> relation_table(const GridShape& shape) {
  const int n = shape.size();
  std::vector<RelClass> table(static_cast<std::size_t>(n) * n, RelClass::kNone);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a != b) table[static_cast<std::size_t>(a) * n + b] = relative_type(a, b, shape);
    }
  }
  return table;
}

int hamming(const Configuration& a, const Configuration& b) {
  if (a.size() != b.size()) throw DomainError("hamming: configuration sizes differ");
  int d = 0;
  for (int s = 0; s < a.size(); ++s) d += a[s] != b[s];
  return d;
}

Configuration reorganize(const Configuration& truth, const Configuration& prediction) {
  if (truth.size() != prediction.size()) throw DomainError("reorganize: configuration sizes differ");
  std::vector<int> next(truth.size());
  for (int s = 0; s < truth.size(); ++s) next[prediction[s]] = truth[s];
  return Configuration(std::move(next));
}

Configuration random_permutation(int n, Rng& rng) {
  if (n < 1) throw DomainError("random_permutation needs n >= 1");
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const auto j = rng.uniform_below(static_cast<std::uint64_t>(i) + 1);
    std::swap(v[i], v[j]);
  }
  return Configuration(std::move(v));
}

std::uint64_t derangements(int k) {
  if (k < 0) return 0;
  std::uint64_t prev2 = 1, prev1 = 0;  // D_0, D_1
  if (k == 0) return prev2;
  for (int i = 2; i <= k; ++i) {
    const std::uint64_t cur = static_cast<std::uint64_t>(i - 1) * (prev1 + prev2);
    prev2 = prev1;
    prev1 = cur;
  }
  return prev1;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::uint64_t hamming_ball_size(int n, int radius) {
  std::uint64_t total = 1;
  for (int k = 2; k <= std::min(radius, n); ++k) total += binomial(n, k) * derangements(k);
  return total;
}

std::string factorial_decimal(int n) {
  std::vector<int> digits{1};  // little-endian base 10
  for (int f = 2; f <= n; ++f) {
    int carry = 0;
    for (int& d : digits) {
      const int v = d * f + carry;
      d = v % 10;
      carry = v / 10;
    }
    for (; carry; carry /= 10) digits.push_back(carry % 10);
  }
  std::string out;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) out += static_cast<char>('0' + *it);
  return out;
}

double factorial_approx(int n) { return std::tgamma(static_cast<double>(n) + 1.0); }

namespace {

// Derangements of 0..k-1 in lexicographic order, flattened k at a time.
std::vector<int> derangement_list(int k) {
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> out;
  do {
    bool fixed = false;
    for (int i = 0; i < k && !fixed; ++i) fixed = perm[i] == i;
    if (!fixed) out.insert(out.end(), perm.begin(), perm.end());
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace

std::uint64_t for_each_in_hamming_ball(
    const Configuration& center, int radius,
    const std::function<bool(std::span<const int>, int)>& visit) {
  if (radius < 0) throw DomainError("hamming ball radius must be >= 0");
  const int n = center.size();
  std::vector<int> candidate(center.values().begin(), center.values().end());
  std::uint64_t visited = 1;
  if (!visit(candidate, 0)) return visited;

  for (int k = 2; k <= std::min(radius, n); ++k) {
    const std::vector<int> moves = derangement_list(k);
    const std::size_t count = moves.size() / k;
    std::vector<int> subset(k);
    std::vector<int> original(k);
    std::iota(subset.begin(), subset.end(), 0);
    while (true) {
      for (int i = 0; i < k; ++i) original[i] = center[subset[i]];
      for (std::size_t m = 0; m < count; ++m) {
        const int* sigma = moves.data() + m * k;
        for (int i = 0; i < k; ++i) candidate[subset[i]] = original[sigma[i]];
        ++visited;
        if (!visit(candidate, k)) return visited;
      }
      for (int i = 0; i < k; ++i) candidate[subset[i]] = original[i];

      // advance to the next k-subset of 0..n-1
      int i = k - 1;
      while (i >= 0 && subset[i] == n - k + i) --i;
      if (i < 0) break;
      ++subset[i];
      for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
    }
  }
  return visited;
}

std::vector<Configuration> enumerate_hamming_ball(const Configuration& center, int radius) {
  if (radius > center.size()) throw DomainError("hamming ball radius exceeds configuration size");
  std::vector<Configuration> out;
  for_each_in_hamming_ball(center, radius, [&](std::span<const int> c, int) {
    out.emplace_back(std::vector<int>(c.begin(), c.end()));
    return true;
  });
  return out;
}

}  // namespace jigsolve
