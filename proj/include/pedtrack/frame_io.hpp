#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pedtrack/error.hpp"

namespace pedtrack {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// One decoded raster. Pixels are row-major RGB triples, 8 bits per channel.
class Frame {
 public:
  Frame() = default;

  Frame(int width, int height, Rgb fill = {}, std::size_t index = 0, double fps = 30.0)
      : index_(index), width_(width), height_(height), fps_(fps) {
    if (width <= 0 || height <= 0) {
      throw ParameterError("frame dimensions must be positive");
    }
    pixels_.resize(static_cast<std::size_t>(width) * height * 3);
    for (std::size_t i = 0; i < pixels_.size(); i += 3) {
      pixels_[i] = fill.r;
      pixels_[i + 1] = fill.g;
      pixels_[i + 2] = fill.b;
    }
  }

  Frame(int width, int height, std::vector<std::uint8_t> pixels, std::size_t index = 0,
        double fps = 30.0)
      : index_(index), width_(width), height_(height), fps_(fps), pixels_(std::move(pixels)) {
    if (width <= 0 || height <= 0) {
      throw ParameterError("frame dimensions must be positive");
    }
    if (pixels_.size() != static_cast<std::size_t>(width) * height * 3) {
      throw ParameterError("pixel buffer does not match frame dimensions");
    }
  }

  std::size_t index() const noexcept { return index_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double timestamp() const noexcept { return static_cast<double>(index_) / fps_; }
  double fps() const noexcept { return fps_; }

  void set_index(std::size_t index, double fps) {
    if (!(fps > 0.0)) {
      throw ParameterError("fps must be positive");
    }
    index_ = index;
    fps_ = fps;
  }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  Rgb at(int x, int y) const noexcept {
    const std::size_t o = offset(x, y);
    return {pixels_[o], pixels_[o + 1], pixels_[o + 2]};
  }

  void set(int x, int y, Rgb c) noexcept {
    const std::size_t o = offset(x, y);
    pixels_[o] = c.r;
    pixels_[o + 1] = c.g;
    pixels_[o + 2] = c.b;
  }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

  friend bool operator==(const Frame& a, const Frame& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.pixels_ == b.pixels_;
  }

 private:
  std::size_t offset(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * 3;
  }

  std::size_t index_ = 0;
  int width_ = 0;
  int height_ = 0;
  double fps_ = 30.0;
  std::vector<std::uint8_t> pixels_;
};

struct FrameSequence {
  std::vector<Frame> frames;
  double fps = 30.0;
  std::string source_dir;
};

enum class PixelFormat { ppm_p6, pgm_p5 };

namespace detail {

class HeaderReader {
 public:
  HeaderReader(std::span<const std::uint8_t> bytes, std::size_t start)
      : bytes_(bytes), pos_(start) {}

  std::size_t pos() const noexcept { return pos_; }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_uint(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000) throw DecodeError(start, std::string(what) + " out of range");
      ++pos_;
    }
    if (pos_ == start) throw DecodeError(start, std::string("expected ") + what);
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw DecodeError(pos_, "expected whitespace after maxval");
    }
    ++pos_;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Frame decode_frame(std::span<const std::uint8_t> bytes, PixelFormat format) {
  const char want = format == PixelFormat::ppm_p6 ? '6' : '5';
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != static_cast<std::uint8_t>(want)) {
    throw DecodeError(0, std::string("bad magic number, expected P") + want);
  }
  detail::HeaderReader in(bytes, 2);
  const long width = in.read_uint("width");
  const long height = in.read_uint("height");
  in.skip_space_and_comments();
  const std::size_t maxval_at = in.pos();
  const long maxval = in.read_uint("maxval");
  if (maxval != 255) {
    throw DecodeError(maxval_at, "maxval " + std::to_string(maxval) + " is not 255");
  }
  in.single_space();
  if (width <= 0 || height <= 0) {
    throw DecodeError(2, "zero image dimension");
  }
  const std::size_t data_at = in.pos();
  const std::size_t channels = format == PixelFormat::ppm_p6 ? 3 : 1;
  const std::size_t need = static_cast<std::size_t>(width) * height * channels;
  if (bytes.size() - data_at < need) {
    throw DecodeError(bytes.size(), "truncated pixel data: need " + std::to_string(need) +
                                        " bytes, have " + std::to_string(bytes.size() - data_at));
  }
  std::vector<std::uint8_t> px(static_cast<std::size_t>(width) * height * 3);
  if (channels == 3) {
    std::copy_n(bytes.begin() + data_at, need, px.begin());
  } else {
    for (std::size_t i = 0; i < need; ++i) {
      px[3 * i] = px[3 * i + 1] = px[3 * i + 2] = bytes[data_at + i];
    }
  }
  return Frame(static_cast<int>(width), static_cast<int>(height), std::move(px));
}

/// Binary P6 with the canonical "P6\n<w> <h>\n255\n" header.
inline std::vector<std::uint8_t> encode_frame(const Frame& frame) {
  const std::string header =
      "P6\n" + std::to_string(frame.width()) + " " + std::to_string(frame.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const auto px = frame.pixels();
  out.insert(out.end(), px.begin(), px.end());
  return out;
}

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

inline void write_frame(const std::filesystem::path& path, const Frame& frame) {
  write_file_bytes(path, encode_frame(frame));
}

inline Frame read_frame(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  const auto format = ext == ".pgm" ? PixelFormat::pgm_p5 : PixelFormat::ppm_p6;
  try {
    return decode_frame(read_file_bytes(path), format);
  } catch (const DecodeError& e) {
    throw LoadError(path.filename().string() + ": " + e.what());
  }
}

/// Matches `<stem>_<N>.ppm` / `.pgm`; returns the numeric suffix or -1.
inline long frame_number(const std::string& filename) {
  static const std::regex pattern(R"(^.+_([0-9]+)\.(ppm|pgm)$)");
  std::smatch m;
  if (!std::regex_match(filename, m, pattern)) return -1;
  if (m[1].length() > 9) return -1;
  return std::stol(m[1].str());
}

/// Lists numbered frame files in `dir`, ordered by numeric suffix.
inline std::vector<std::filesystem::path> list_frame_files(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw LoadError("not a directory: " + dir.string());
  std::map<long, fs::path> by_number;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const long n = frame_number(entry.path().filename().string());
    if (n < 0) continue;
    if (!by_number.emplace(n, entry.path()).second) {
      throw LoadError("duplicate frame number " + std::to_string(n) + " in " + dir.string());
    }
  }
  if (by_number.empty()) throw LoadError("no frame files in " + dir.string());
  std::vector<fs::path> files;
  long expected = by_number.begin()->first;
  for (const auto& [n, path] : by_number) {
    if (n != expected) {
      throw LoadError("gap in frame numbering: missing index " + std::to_string(expected));
    }
    files.push_back(path);
    ++expected;
  }
  return files;
}

inline FrameSequence load_sequence(const std::filesystem::path& dir, double fps = 30.0) {
  if (!(fps > 0.0)) throw ParameterError("fps must be positive");
  FrameSequence seq;
  seq.fps = fps;
  seq.source_dir = dir.string();
  for (const auto& path : list_frame_files(dir)) {
    Frame f = read_frame(path);
    if (!seq.frames.empty() && (f.width() != seq.frames.front().width() ||
                                f.height() != seq.frames.front().height())) {
      throw LoadError("mixed frame dimensions: " + path.filename().string() + " is " +
                      std::to_string(f.width()) + "x" + std::to_string(f.height()));
    }
    f.set_index(seq.frames.size(), fps);
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

}  // namespace pedtrack
