#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace decnas::image_io {

struct RawImage {
  int h = 0, w = 0, channels = 0;
  std::vector<std::uint8_t> pixels;  // row-major, interleaved
};

RawImage read_pgm(const std::string& path);
RawImage read_png(const std::string& path);

}  // namespace decnas::image_io
