#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

namespace jigsolve {

// 2D image or 3D volume. Spatial dims are (W, H) or (W, H, Z); pixels are
// stored row-major with x fastest and channels interleaved:
//   index = ((z * H + y) * W + x) * channels + c
// Loaded images hold values in [0,1]; patches after mean subtraction may not.
struct ImageTensor {
  std::vector<int> dims;
  int channels = 1;
  std::vector<float> pixels;

  ImageTensor() = default;
  ImageTensor(std::vector<int> dims, int channels, float fill = 0.0f);

  std::size_t rank() const { return dims.size(); }
  int width() const { return dims.at(0); }
  int height() const { return dims.at(1); }
  int depth() const { return dims.size() > 2 ? dims[2] : 1; }
  std::size_t voxel_count() const;
  bool empty() const { return pixels.empty(); }

  std::size_t index(int x, int y, int z, int c) const {
    return ((static_cast<std::size_t>(z) * height() + y) * width() + x) * channels + c;
  }
  float& at(int x, int y, int c) { return pixels[index(x, y, 0, c)]; }
  float at(int x, int y, int c) const { return pixels[index(x, y, 0, c)]; }
  float& at(int x, int y, int z, int c) { return pixels[index(x, y, z, c)]; }
  float at(int x, int y, int z, int c) const { return pixels[index(x, y, z, c)]; }

  bool operator==(const ImageTensor&) const = default;
};

// Reads binary PGM (P5), PPM (P6) with maxval 255, or the RTEN raw tensor
// format. Throws ParseError with the failing byte offset.
ImageTensor load_image(const std::filesystem::path& path);
ImageTensor decode_image(const std::vector<unsigned char>& bytes);

// P5 for one channel, P6 for three channels (2D only, values in [0,1]);
// RTEN otherwise.
void save_image(const ImageTensor& img, const std::filesystem::path& path);

std::vector<unsigned char> encode_pnm(const ImageTensor& img);

// RTEN: "RTEN", u32 version (1), u32 rank, rank x u32 extents, u32 channels,
// then little-endian float32 pixels in the layout above.
std::vector<unsigned char> encode_rten(const ImageTensor& img);
void save_rten(const ImageTensor& img, const std::filesystem::path& path);

std::vector<unsigned char> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::vector<unsigned char>& bytes);

}  // namespace jigsolve
