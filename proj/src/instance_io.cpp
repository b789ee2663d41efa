#include <algorithm>

#include "rarp/errors.hpp"
#include "rarp/instance.hpp"
#include "rarp/json_read.hpp"
#include "rarp/json_text.hpp"

namespace rarp {

namespace json_read {

nlohmann::json parse(const std::string& text, const std::string& source) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n');
    const std::size_t last_nl = text.rfind('\n', byte == 0 ? 0 : byte - 1);
    const std::size_t col = last_nl == std::string::npos ? byte + 1 : byte - last_nl;
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

const nlohmann::json& field(const nlohmann::json& obj, const char* name, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  const auto it = obj.find(name);
  if (it == obj.end()) throw ParseError(where + "." + name + ": missing field");
  return *it;
}

double number(const nlohmann::json& obj, const char* name, const std::string& where) {
  const auto& v = field(obj, name, where);
  if (!v.is_number()) throw ParseError(where + "." + name + ": expected a number");
  return v.get<double>();
}

long long integer(const nlohmann::json& obj, const char* name, const std::string& where) {
  const auto& v = field(obj, name, where);
  if (!v.is_number_integer()) throw ParseError(where + "." + name + ": expected an integer");
  return v.get<long long>();
}

bool boolean(const nlohmann::json& obj, const char* name, const std::string& where) {
  const auto& v = field(obj, name, where);
  if (!v.is_boolean()) throw ParseError(where + "." + name + ": expected true/false");
  return v.get<bool>();
}

std::string text(const nlohmann::json& obj, const char* name, const std::string& where) {
  const auto& v = field(obj, name, where);
  if (!v.is_string()) throw ParseError(where + "." + name + ": expected a string");
  return v.get<std::string>();
}

const nlohmann::json& array(const nlohmann::json& obj, const char* name, const std::string& where) {
  const auto& v = field(obj, name, where);
  if (!v.is_array()) throw ParseError(where + "." + name + ": expected an array");
  return v;
}

const nlohmann::json& object(const nlohmann::json& obj, const char* name, const std::string& where) {
  const auto& v = field(obj, name, where);
  if (!v.is_object()) throw ParseError(where + "." + name + ": expected an object");
  return v;
}

}  // namespace json_read

namespace {

Instance instance_from_json(const nlohmann::json& doc, const std::string& src) {
  using namespace json_read;
  Instance inst;
  const auto& canvas = object(doc, "canvas", src);
  inst.canvas.width = number(canvas, "width", src + ".canvas");
  inst.canvas.height = number(canvas, "height", src + ".canvas");
  const auto& sep = object(doc, "separation", src);
  inst.separation.sep_abs = number(sep, "sep_abs", src + ".separation");
  inst.separation.sep_pct = number(sep, "sep_pct", src + ".separation");
  const auto& items = array(doc, "items", src);
  inst.items.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string where = src + ".items[" + std::to_string(i) + "]";
    const auto& it = items[i];
    ItemSpec item;
    item.id = static_cast<int>(integer(it, "id", where));
    item.class_label = text(it, "class_label", where);
    item.base_width = number(it, "base_width", where);
    item.base_height = number(it, "base_height", where);
    const auto& anchor = object(it, "anchor", where);
    item.anchor.x = number(anchor, "x", where + ".anchor");
    item.anchor.y = number(anchor, "y", where + ".anchor");
    inst.items.push_back(std::move(item));
  }
  return inst;
}

Instance parse_instance_from(const std::string& text, bool validate, const std::string& source) {
  const Instance inst = instance_from_json(json_read::parse(text, source), source);
  if (validate) {
    auto violations = validate_instance(inst);
    if (!violations.empty()) throw InvalidInstance(std::move(violations));
  }
  return inst;
}

}  // namespace

Instance parse_instance(const std::string& text, bool validate) {
  return parse_instance_from(text, validate, "instance");
}

std::string serialize_instance(const Instance& instance) {
  JsonWriter w;
  w.begin_object();
  w.key("canvas").begin_object();
  w.key("width").value(instance.canvas.width);
  w.key("height").value(instance.canvas.height);
  w.end_object();
  w.key("separation").begin_object();
  w.key("sep_abs").value(instance.separation.sep_abs);
  w.key("sep_pct").value(instance.separation.sep_pct);
  w.end_object();
  w.key("items").begin_array();
  for (const ItemSpec& it : instance.items) {
    w.begin_object();
    w.key("id").value(it.id);
    w.key("class_label").value(it.class_label);
    w.key("base_width").value(it.base_width);
    w.key("base_height").value(it.base_height);
    w.key("anchor").begin_object();
    w.key("x").value(it.anchor.x);
    w.key("y").value(it.anchor.y);
    w.end_object();
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

Instance read_instance(const std::string& path, bool validate) {
  return parse_instance_from(read_file(path), validate, path);
}

void write_instance(const Instance& instance, const std::string& path) {
  write_file_atomic(path, serialize_instance(instance));
}

}  // namespace rarp
