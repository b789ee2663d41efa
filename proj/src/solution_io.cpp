#include "rarp/json_read.hpp"
#include "rarp/json_text.hpp"
#include "rarp/solver.hpp"

namespace rarp {

SolutionFile make_solution_file(const Instance& instance, const ScaleSolution& solution) {
  return {solution, trim(instance, solution), objective(instance, solution)};
}

std::string serialize_solution(const SolutionFile& file) {
  JsonWriter w;
  w.begin_object();
  w.key("scales").inline_array(file.solution.scales);
  w.key("flags").begin_array();
  for (const ItemFlags& f : file.solution.flags) {
    w.begin_object();
    w.key("clipped").value(f.clipped);
    w.key("post_shrunk").value(f.post_shrunk);
    w.key("downscaled").value(f.downscaled);
    w.end_object();
  }
  w.end_array();
  w.key("packed").begin_array();
  for (const PackedBox& p : file.packed) {
    w.begin_object();
    w.key("item_id").value(p.item_id);
    w.key("rect").begin_object();
    w.key("cx").value(p.rect.center.x);
    w.key("cy").value(p.rect.center.y);
    w.key("w").value(p.rect.width);
    w.key("h").value(p.rect.height);
    w.end_object();
    w.key("trimmed").value(p.trimmed);
    w.end_object();
  }
  w.end_array();
  w.key("objective").begin_object();
  w.key("linear").value(file.objective.linear);
  w.key("covered_area").value(file.objective.covered_area);
  w.end_object();
  w.end_object();
  return w.str();
}

SolutionFile parse_solution(const std::string& text, const std::string& source) {
  using namespace json_read;
  const nlohmann::json doc = json_read::parse(text, source);
  SolutionFile f;
  const auto& scales = array(doc, "scales", source);
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!scales[i].is_number()) throw ParseError(source + ".scales[" + std::to_string(i) + "]: expected a number");
    f.solution.scales.push_back(scales[i].get<double>());
  }
  const auto& flags = array(doc, "flags", source);
  for (std::size_t i = 0; i < flags.size(); ++i) {
    const std::string where = source + ".flags[" + std::to_string(i) + "]";
    f.solution.flags.push_back(
        {boolean(flags[i], "clipped", where), boolean(flags[i], "post_shrunk", where), boolean(flags[i], "downscaled", where)});
  }
  if (f.solution.flags.size() != f.solution.scales.size()) {
    throw ParseError(source + ": flags and scales differ in length");
  }
  const auto& packed = array(doc, "packed", source);
  for (std::size_t i = 0; i < packed.size(); ++i) {
    const std::string where = source + ".packed[" + std::to_string(i) + "]";
    PackedBox p;
    p.item_id = static_cast<int>(integer(packed[i], "item_id", where));
    const auto& rect = object(packed[i], "rect", where);
    p.rect.center.x = number(rect, "cx", where + ".rect");
    p.rect.center.y = number(rect, "cy", where + ".rect");
    p.rect.width = number(rect, "w", where + ".rect");
    p.rect.height = number(rect, "h", where + ".rect");
    p.trimmed = boolean(packed[i], "trimmed", where);
    f.packed.push_back(p);
  }
  const auto& obj = object(doc, "objective", source);
  f.objective.linear = number(obj, "linear", source + ".objective");
  f.objective.covered_area = number(obj, "covered_area", source + ".objective");
  return f;
}

SolutionFile read_solution(const std::string& path) { return parse_solution(read_file(path), path); }

void write_solution(const SolutionFile& file, const std::string& path) {
  write_file_atomic(path, serialize_solution(file));
}

}  // namespace rarp
