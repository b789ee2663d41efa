#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rarp {

// Formats a double with 17 significant digits ("%.17g"), the fixed format
// used by every file the library writes.
std::string format_number(double value);

// Minimal streaming JSON writer. Keys are emitted in call order, which is
// what makes the output files byte-stable; nlohmann::json is used for
// reading only.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view name);
  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(std::size_t v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }

  // Arrays of scalars print on one line.
  JsonWriter& inline_array(const std::vector<double>& values);

  std::string str() const { return out_ + "\n"; }

 private:
  struct Frame {
    bool is_object;
    bool empty = true;
  };

  void before_value();
  void newline();

  std::string out_;
  std::vector<Frame> stack_;
  bool after_key_ = false;
};

std::string escape_json(std::string_view s);

// Writes `contents` to `path` via a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& contents);

std::string read_file(const std::string& path);

}  // namespace rarp
