#include <gsvm/pgm.hpp>

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace gsvm {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::UnreadableFile, "pgm: " + msg); }

void skip_space_and_comments(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == EOF) return;
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

int read_header_int(std::istream& in, const char* what) {
  skip_space_and_comments(in);
  long value = -1;
  if (!(in >> value) || value < 0 || value > (1L << 24)) bad(std::string("bad ") + what);
  return static_cast<int>(value);
}

}  // namespace

GrayImage read_pgm(std::istream& in) {
  char magic[2] = {0, 0};
  if (!in.read(magic, 2) || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5')) {
    bad("not a P2/P5 file");
  }
  const bool binary = magic[1] == '5';
  const int width = read_header_int(in, "width");
  const int height = read_header_int(in, "height");
  const int maxval = read_header_int(in, "maxval");
  if (width < 1 || height < 1) bad("zero dimension");
  if (maxval < 1 || maxval > 255) bad("only 8-bit maxval is supported");

  std::vector<std::uint8_t> px(static_cast<std::size_t>(width) * height);
  if (binary) {
    // exactly one whitespace byte separates the header from the raster
    if (!std::isspace(in.get())) bad("missing raster separator");
    if (!in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()))) {
      bad("truncated raster");
    }
  } else {
    for (auto& p : px) {
      skip_space_and_comments(in);
      int v = -1;
      if (!(in >> v) || v < 0 || v > maxval) bad("bad ASCII sample");
      p = static_cast<std::uint8_t>(v);
    }
  }
  if (maxval != 255) {
    for (auto& p : px) {
      if (p > maxval) bad("sample exceeds maxval");
      p = static_cast<std::uint8_t>((p * 255 + maxval / 2) / maxval);
    }
  }
  return GrayImage(width, height, std::move(px));
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableFile, "cannot open " + path.string());
  try {
    return read_pgm(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_pgm(std::ostream& out, const GrayImage& img) {
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels().data()), static_cast<std::streamsize>(img.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "pgm write failed");
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ostringstream buf;
  write_pgm(buf, img);
  write_file_atomic(path, buf.str());
}

GrayImage to_gray(const BinaryImage& img) {
  GrayImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) out.pixels()[i] = img.pixels()[i] ? 0 : 255;
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::IoFailure, "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "rename to " + path.string() + " failed: " + ec.message());
}

}  // namespace gsvm
