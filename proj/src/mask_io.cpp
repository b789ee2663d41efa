#include <cctype>
#include <map>
#include <tuple>

#include "rarp/errors.hpp"
#include "rarp/json_read.hpp"
#include "rarp/json_text.hpp"
#include "rarp/shapes.hpp"

namespace rarp {

Palette Palette::standard() {
  return {{{0, 0, 0},       {128, 64, 128}, {244, 35, 232}, {70, 70, 70},   {102, 102, 156},
           {190, 153, 153}, {153, 153, 153}, {250, 170, 30}, {220, 220, 0},  {107, 142, 35},
           {152, 251, 152}, {70, 130, 180}, {220, 20, 60},  {255, 0, 0},    {0, 0, 142},
           {0, 0, 70},      {0, 60, 100},   {0, 80, 100},   {0, 0, 230},    {119, 11, 32}}};
}

std::map<std::string, Rgb> parse_palette_config(const std::string& text, const std::string& source) {
  const nlohmann::json doc = json_read::parse(text, source);
  if (!doc.is_object()) throw ParseError(source + ": palette must be an object of label -> [r, g, b]");
  std::map<std::string, Rgb> out;
  for (const auto& [label, value] : doc.items()) {
    const std::string where = source + "." + label;
    if (!value.is_array() || value.size() != 3) throw ParseError(where + ": expected [r, g, b]");
    int c[3];
    for (int k = 0; k < 3; ++k) {
      if (!value[k].is_number_integer()) throw ParseError(where + ": channel values must be integers");
      c[k] = value[k].get<int>();
      if (c[k] < 0 || c[k] > 255) throw ParseError(where + ": channel values must lie in [0, 255]");
    }
    out[label] = {static_cast<std::uint8_t>(c[0]), static_cast<std::uint8_t>(c[1]), static_cast<std::uint8_t>(c[2])};
  }
  return out;
}

Palette palette_for_labels(const std::map<std::string, Rgb>& config, const std::vector<std::string>& labels) {
  Palette p;
  const auto bg = config.find("background");
  p.colors.push_back(bg == config.end() ? Rgb{0, 0, 0} : bg->second);
  for (const std::string& label : labels) {
    const auto it = config.find(label);
    if (it == config.end()) throw PaletteError("palette has no color for class '" + label + "'");
    p.colors.push_back(it->second);
  }
  return p;
}

std::string encode_ppm(const MaskImage& mask, const Palette& palette, PpmFormat format) {
  std::string out = (format == PpmFormat::P3 ? "P3\n" : "P6\n") + std::to_string(mask.width) + " " +
                    std::to_string(mask.height) + "\n255\n";
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      const std::uint16_t idx = mask.at(x, y);
      if (idx >= palette.colors.size()) {
        throw PaletteError("class index " + std::to_string(idx) + " is not covered by the palette");
      }
      const Rgb c = palette.colors[idx];
      if (format == PpmFormat::P6) {
        out += static_cast<char>(c.r);
        out += static_cast<char>(c.g);
        out += static_cast<char>(c.b);
      } else {
        if (x != 0) out += ' ';
        out += std::to_string(c.r) + ' ' + std::to_string(c.g) + ' ' + std::to_string(c.b);
      }
    }
    if (format == PpmFormat::P3) out += '\n';
  }
  return out;
}

void write_mask(const MaskImage& mask, const Palette& palette, const std::string& path, PpmFormat format) {
  write_file_atomic(path, encode_ppm(mask, palette, format));
}

namespace {

class PnmCursor {
 public:
  PnmCursor(const std::string& data, const std::string& source) : data_(data), source_(source) {}

  void skip_space() {
    while (pos_ < data_.size()) {
      const char c = data_[pos_];
      if (c == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  int integer() {
    skip_space();
    if (pos_ >= data_.size() || !std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      throw ParseError(source_ + ": expected an integer at byte " + std::to_string(pos_));
    }
    long v = 0;
    while (pos_ < data_.size() && std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      v = v * 10 + (data_[pos_++] - '0');
      if (v > 1'000'000'000) throw ParseError(source_ + ": integer out of range");
    }
    return static_cast<int>(v);
  }

  // ASCII bitmaps may pack digits without separators.
  int bit() {
    skip_space();
    if (pos_ >= data_.size() || (data_[pos_] != '0' && data_[pos_] != '1')) {
      throw ParseError(source_ + ": expected a bit at byte " + std::to_string(pos_));
    }
    return data_[pos_++] - '0';
  }

  unsigned char byte() {
    if (pos_ >= data_.size()) throw ParseError(source_ + ": truncated raster");
    return static_cast<unsigned char>(data_[pos_++]);
  }

  void single_whitespace() {
    if (pos_ >= data_.size() || !std::isspace(static_cast<unsigned char>(data_[pos_]))) {
      throw ParseError(source_ + ": expected whitespace before raster");
    }
    ++pos_;
  }

  std::string take(std::size_t n) {
    if (data_.size() - pos_ < n) throw ParseError(source_ + ": truncated header");
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  const std::string& data_;
  const std::string& source_;
  std::size_t pos_ = 0;
};

}  // namespace

PnmImage decode_pnm(const std::string& data, const std::string& source) {
  PnmCursor cur(data, source);
  const std::string magic = cur.take(2);
  if (magic.size() != 2 || magic[0] != 'P' || magic[1] < '1' || magic[1] > '6') {
    throw ParseError(source + ": not a PNM file");
  }
  const int kind = magic[1] - '0';
  PnmImage img;
  img.width = cur.integer();
  img.height = cur.integer();
  if (img.width <= 0 || img.height <= 0) throw ParseError(source + ": image dimensions must be positive");
  img.channels = (kind == 3 || kind == 6) ? 3 : 1;
  img.max_value = (kind == 1 || kind == 4) ? 1 : cur.integer();
  if (img.max_value <= 0 || img.max_value > 65535) throw ParseError(source + ": bad maximum value");

  const std::size_t count = static_cast<std::size_t>(img.width) * img.height * img.channels;
  img.samples.reserve(count);
  if (kind == 1) {
    for (std::size_t i = 0; i < count; ++i) img.samples.push_back(static_cast<std::uint16_t>(cur.bit()));
  } else if (kind == 2 || kind == 3) {
    for (std::size_t i = 0; i < count; ++i) {
      const int v = cur.integer();
      if (v > img.max_value) throw ParseError(source + ": sample exceeds maximum value");
      img.samples.push_back(static_cast<std::uint16_t>(v));
    }
  } else if (kind == 4) {
    cur.single_whitespace();
    for (int y = 0; y < img.height; ++y) {
      unsigned char bits = 0;
      for (int x = 0; x < img.width; ++x) {
        if (x % 8 == 0) bits = cur.byte();
        img.samples.push_back(static_cast<std::uint16_t>((bits >> (7 - x % 8)) & 1));
      }
    }
  } else {
    cur.single_whitespace();
    const bool wide = img.max_value > 255;
    for (std::size_t i = 0; i < count; ++i) {
      std::uint16_t v = cur.byte();
      if (wide) v = static_cast<std::uint16_t>((v << 8) | cur.byte());
      img.samples.push_back(v);
    }
  }
  return img;
}

MaskImage decode_mask(const std::string& data, const Palette& palette) {
  const PnmImage img = decode_pnm(data, "mask");
  if (img.channels != 3 || img.max_value != 255) throw ParseError("mask: expected an 8-bit RGB PPM");
  std::map<std::tuple<int, int, int>, std::uint16_t> lookup;
  for (std::size_t k = palette.colors.size(); k-- > 0;) {
    const Rgb c = palette.colors[k];
    lookup[{c.r, c.g, c.b}] = static_cast<std::uint16_t>(k);
  }
  MaskImage mask(img.width, img.height);
  for (std::size_t i = 0; i < mask.cells.size(); ++i) {
    const auto it = lookup.find({img.samples[3 * i], img.samples[3 * i + 1], img.samples[3 * i + 2]});
    if (it == lookup.end()) throw PaletteError("mask: pixel color not present in the palette");
    mask.cells[i] = it->second;
  }
  return mask;
}

MaskImage read_mask(const std::string& path, const Palette& palette) { return decode_mask(read_file(path), palette); }

BoolGrid foreground_of(const PnmImage& image) {
  BoolGrid grid{image.width, image.height, std::vector<std::uint8_t>(static_cast<std::size_t>(image.width) * image.height)};
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    bool on = false;
    for (int c = 0; c < image.channels; ++c) on = on || image.samples[i * image.channels + c] != 0;
    grid.cells[i] = on ? 1 : 0;
  }
  return grid;
}

}  // namespace rarp
