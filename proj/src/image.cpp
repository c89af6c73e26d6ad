#include "jigsolve/image.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "jigsolve/errors.hpp"

namespace jigsolve {

static_assert(std::endian::native == std::endian::little, "RTEN I/O assumes a little-endian host");

ImageTensor::ImageTensor(std::vector<int> d, int c, float fill) : dims(std::move(d)), channels(c) {
  if (dims.size() != 2 && dims.size() != 3) throw DomainError("image must be 2D or 3D");
  for (int e : dims) {
    if (e < 1) throw DomainError("image dims must be positive");
  }
  if (channels < 1) throw DomainError("image needs at least one channel");
  pixels.assign(voxel_count() * channels, fill);
}

std::size_t ImageTensor::voxel_count() const {
  std::size_t n = 1;
  for (int e : dims) n *= static_cast<std::size_t>(e);
  return dims.empty() ? 0 : n;
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

class PnmHeaderReader {
 public:
  explicit PnmHeaderReader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  int next_int() {
    skip_space_and_comments();
    const std::size_t start = pos_;
    last_start_ = start;
    long long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (1 << 24)) throw ParseError("PNM header value too large", start);
      ++pos_;
    }
    if (pos_ == start) throw ParseError("expected a number in PNM header", start);
    return static_cast<int>(value);
  }

  // The single whitespace byte after maxval, then the payload.
  std::size_t payload_start() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw ParseError("expected whitespace before PNM payload", pos_);
    }
    return pos_ + 1;
  }

  // Offset where the most recent number began.
  std::size_t last_start() const { return last_start_; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 2;
  std::size_t last_start_ = 2;
};

ImageTensor decode_pnm(const std::vector<unsigned char>& bytes, int channels) {
  PnmHeaderReader header(bytes);
  const int width = header.next_int();
  const int height = header.next_int();
  const int maxval = header.next_int();
  const std::size_t maxval_pos = header.last_start();
  if (width < 1 || height < 1) throw ParseError("PNM dimensions must be positive", 2);
  if (maxval != 255) throw ParseError("only maxval 255 is supported, got " + std::to_string(maxval), maxval_pos);
  const std::size_t start = header.payload_start();
  ImageTensor img({width, height}, channels);
  const std::size_t need = img.pixels.size();
  if (bytes.size() - std::min(start, bytes.size()) < need) {
    throw ParseError("truncated PNM payload: need " + std::to_string(need) + " bytes", bytes.size());
  }
  for (std::size_t i = 0; i < need; ++i) img.pixels[i] = static_cast<float>(bytes[start + i]) / 255.0f;
  return img;
}

std::uint32_t read_u32(const std::vector<unsigned char>& bytes, std::size_t& pos) {
  if (pos + 4 > bytes.size()) throw ParseError("truncated RTEN header", pos);
  std::uint32_t v;
  std::memcpy(&v, bytes.data() + pos, 4);
  pos += 4;
  return v;
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  unsigned char b[4];
  std::memcpy(b, &v, 4);
  out.insert(out.end(), b, b + 4);
}

ImageTensor decode_rten(const std::vector<unsigned char>& bytes) {
  std::size_t pos = 4;
  const std::uint32_t version = read_u32(bytes, pos);
  if (version != 1) throw ParseError("unsupported RTEN version " + std::to_string(version), 4);
  const std::size_t rank_pos = pos;
  const std::uint32_t rank = read_u32(bytes, pos);
  if (rank != 2 && rank != 3) throw ParseError("RTEN rank must be 2 or 3", rank_pos);
  std::vector<int> dims;
  for (std::uint32_t i = 0; i < rank; ++i) {
    const std::size_t at = pos;
    const std::uint32_t e = read_u32(bytes, pos);
    if (e == 0 || e > (1u << 20)) throw ParseError("bad RTEN extent", at);
    dims.push_back(static_cast<int>(e));
  }
  const std::size_t ch_pos = pos;
  const std::uint32_t channels = read_u32(bytes, pos);
  if (channels == 0 || channels > 1024) throw ParseError("bad RTEN channel count", ch_pos);
  ImageTensor img(dims, static_cast<int>(channels));
  const std::size_t need = img.pixels.size() * sizeof(float);
  if (bytes.size() - pos < need) throw ParseError("truncated RTEN payload", bytes.size());
  std::memcpy(img.pixels.data(), bytes.data() + pos, need);
  return img;
}

}  // namespace

ImageTensor decode_image(const std::vector<unsigned char>& bytes) {
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return decode_pnm(bytes, 1);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') return decode_pnm(bytes, 3);
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), "RTEN", 4) == 0) return decode_rten(bytes);
  throw ParseError("unrecognized image magic", 0);
}

ImageTensor load_image(const std::filesystem::path& path) { return decode_image(read_file(path)); }

std::vector<unsigned char> encode_pnm(const ImageTensor& img) {
  if (img.rank() != 2 || (img.channels != 1 && img.channels != 3)) {
    throw DomainError("PNM needs a 2D image with 1 or 3 channels");
  }
  const std::string header = std::string(img.channels == 1 ? "P5" : "P6") + "\n" +
                             std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<unsigned char> out(header.begin(), header.end());
  out.reserve(out.size() + img.pixels.size());
  for (float v : img.pixels) {
    const float clamped = std::clamp(v, 0.0f, 1.0f);
    out.push_back(static_cast<unsigned char>(std::lround(clamped * 255.0f)));
  }
  return out;
}

std::vector<unsigned char> encode_rten(const ImageTensor& img) {
  std::vector<unsigned char> out{'R', 'T', 'E', 'N'};
  put_u32(out, 1);
  put_u32(out, static_cast<std::uint32_t>(img.rank()));
  for (int e : img.dims) put_u32(out, static_cast<std::uint32_t>(e));
  put_u32(out, static_cast<std::uint32_t>(img.channels));
  const auto* raw = reinterpret_cast<const unsigned char*>(img.pixels.data());
  out.insert(out.end(), raw, raw + img.pixels.size() * sizeof(float));
  return out;
}

void save_rten(const ImageTensor& img, const std::filesystem::path& path) { write_file(path, encode_rten(img)); }

void save_image(const ImageTensor& img, const std::filesystem::path& path) {
  bool pnm_ok = img.rank() == 2 && (img.channels == 1 || img.channels == 3);
  for (std::size_t i = 0; pnm_ok && i < img.pixels.size(); ++i) {
    pnm_ok = img.pixels[i] >= 0.0f && img.pixels[i] <= 1.0f;
  }
  write_file(path, pnm_ok ? encode_pnm(img) : encode_rten(img));
}

}  // namespace jigsolve
