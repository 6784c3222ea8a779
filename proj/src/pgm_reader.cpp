#include <cctype>
#include <fstream>

#include "decnas/errors.hpp"
#include "image_io.hpp"

namespace decnas::image_io {

RawImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::string magic;
  in >> magic;
  if (magic != "P5" && magic != "P2") throw DataError("unsupported PGM: " + path);
  auto skip_ws = [&in]() {
    while (in && (std::isspace(in.peek()) || in.peek() == '#')) {
      if (in.peek() == '#') in.ignore(4096, '\n');
      else in.get();
    }
  };
  int w, h, maxval;
  skip_ws(); in >> w;
  skip_ws(); in >> h;
  skip_ws(); in >> maxval;
  if (!in || w < 1 || h < 1 || maxval < 1 || maxval > 255)
    throw DataError("bad PGM header: " + path);
  RawImage img{h, w, 1, std::vector<std::uint8_t>(std::size_t(w) * h)};
  if (magic == "P5") {
    in.get();  // single whitespace byte after maxval
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  } else {
    for (auto& p : img.pixels) {
      int v;
      in >> v;
      p = static_cast<std::uint8_t>(v);
    }
  }
  if (!in) throw DataError("truncated PGM: " + path);
  return img;
}

}  // namespace decnas::image_io
