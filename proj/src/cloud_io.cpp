#include "cloiseg/cloud_io.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cloiseg {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message),
      line_(line) {}

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_double(std::string_view tok, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "invalid number '" + std::string(tok) + "'");
  }
  if (!std::isfinite(v)) {
    throw ParseError(line, "non-finite coordinate '" + std::string(tok) + "'");
  }
  return v;
}

long long parse_int(std::string_view tok, std::size_t line) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "invalid integer '" + std::string(tok) + "'");
  }
  return v;
}

ClassLabel parse_class(std::string_view tok, std::size_t line) {
  const auto code = parse_int(tok, line);
  auto label = class_from_code(code);
  if (!label) {
    throw ParseError(line, "class code " + std::to_string(code) +
                               " outside [0,7]");
  }
  return *label;
}

std::optional<InstanceId> parse_gt(std::string_view tok, std::size_t line) {
  const auto id = parse_int(tok, line);
  if (id == -1) return std::nullopt;
  if (id < 0) throw ParseError(line, "instance id must be >= -1");
  return id;
}

// Tracks the class of each ground-truth id so a mixed-class instance is
// reported at the first offending line.
class InstanceClassCheck {
 public:
  void check(InstanceId id, ClassLabel label, std::size_t line) {
    auto [it, inserted] = seen_.try_emplace(id, label, line);
    if (!inserted && it->second.first != label) {
      throw ParseError(line, "ground-truth instance " + std::to_string(id) +
                                 " has class " + std::string(class_name(label)) +
                                 " but line " + std::to_string(it->second.second) +
                                 " gave it class " +
                                 std::string(class_name(it->second.first)));
    }
  }

 private:
  std::unordered_map<InstanceId, std::pair<ClassLabel, std::size_t>> seen_;
};

LabeledPointCloud finish(std::vector<PointRecord> points, std::size_t last_line) {
  try {
    return LabeledPointCloud(std::move(points));
  } catch (const std::invalid_argument& e) {
    throw ParseError(last_line, e.what());
  }
}

void append_double(std::string& buf, double v) {
  std::array<char, 32> tmp{};
  auto [ptr, ec] = std::to_chars(tmp.data(), tmp.data() + tmp.size(), v);
  buf.append(tmp.data(), ptr);
}

void append_int(std::string& buf, long long v) {
  std::array<char, 24> tmp{};
  auto [ptr, ec] = std::to_chars(tmp.data(), tmp.data() + tmp.size(), v);
  buf.append(tmp.data(), ptr);
}

}  // namespace

LabeledPointCloud read_pts(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  const auto header = split_ws(line);
  constexpr std::string_view kCountPrefix = "n=";
  if (header.size() != 3 || header[0] != "cloi-pts" || header[1] != "v1" ||
      !header[2].starts_with(kCountPrefix)) {
    throw ParseError(1, "expected header 'cloi-pts v1 n=<N>'");
  }
  const auto declared = parse_int(header[2].substr(kCountPrefix.size()), 1);
  if (declared < 0) throw ParseError(1, "negative point count");

  std::vector<PointRecord> points;
  points.reserve(static_cast<std::size_t>(declared));
  InstanceClassCheck class_check;
  std::size_t columns = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() < 5 || tok.size() > 7) {
      throw ParseError(line_no, "expected 5 to 7 columns, got " +
                                    std::to_string(tok.size()));
    }
    if (columns == 0) columns = tok.size();
    if (tok.size() != columns) {
      throw ParseError(line_no, "column count changed from " +
                                    std::to_string(columns) + " to " +
                                    std::to_string(tok.size()));
    }
    PointRecord p;
    p.position = {parse_double(tok[0], line_no), parse_double(tok[1], line_no),
                  parse_double(tok[2], line_no)};
    p.label = parse_class(tok[3], line_no);
    p.gt_instance = parse_gt(tok[4], line_no);
    if (p.gt_instance) class_check.check(*p.gt_instance, p.label, line_no);
    if (columns >= 6) {
      const auto pred = parse_int(tok[5], line_no);
      if (pred < -1) throw ParseError(line_no, "predicted id must be >= -1");
      p.pred_instance = pred;
    }
    if (columns == 7) {
      const auto flag = parse_int(tok[6], line_no);
      if (flag != 0 && flag != 1) throw ParseError(line_no, "boundary flag must be 0 or 1");
      p.boundary = flag == 1;
    }
    points.push_back(p);
  }
  if (points.size() != static_cast<std::size_t>(declared)) {
    throw ParseError(line_no, "header declares " + std::to_string(declared) +
                                  " points but file has " +
                                  std::to_string(points.size()));
  }
  return finish(std::move(points), line_no);
}

LabeledPointCloud load_pts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_pts(in);
}

void write_pts(std::ostream& out, const LabeledPointCloud& cloud,
               PtsColumns columns) {
  const bool pred = columns.predictions || columns.boundary;
  std::string buf;
  buf.reserve(64 * std::min<std::size_t>(cloud.size(), 1 << 16) + 32);
  buf += "cloi-pts v1 n=";
  append_int(buf, static_cast<long long>(cloud.size()));
  buf += '\n';
  for (const auto& p : cloud) {
    append_double(buf, p.position.x);
    buf += ' ';
    append_double(buf, p.position.y);
    buf += ' ';
    append_double(buf, p.position.z);
    buf += ' ';
    append_int(buf, class_code(p.label));
    buf += ' ';
    append_int(buf, p.gt_instance.value_or(-1));
    if (pred) {
      buf += ' ';
      append_int(buf, p.pred_instance.value_or(kNoise));
    }
    if (columns.boundary) {
      buf += p.boundary ? " 1" : " 0";
    }
    buf += '\n';
    if (buf.size() > (1u << 20)) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void save_pts(const LabeledPointCloud& cloud, const std::filesystem::path& path,
              bool include_predictions, bool include_boundary) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  write_pts(out, cloud, {include_predictions, include_boundary});
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

LabeledPointCloud read_ply_ascii(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    return true;
  };

  if (!next_line() || split_ws(line) != std::vector<std::string_view>{"ply"}) {
    throw ParseError(1, "missing 'ply' magic");
  }

  struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<std::string> properties;
    bool has_list = false;
  };
  std::vector<Element> elements;
  bool ascii = false;
  bool header_done = false;
  while (next_line()) {
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "end_header") {
      header_done = true;
      break;
    }
    if (tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "format") {
      if (tok.size() < 2 || tok[1] != "ascii") {
        throw ParseError(line_no, "only ASCII PLY is supported");
      }
      ascii = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) throw ParseError(line_no, "malformed element line");
      const auto count = parse_int(tok[2], line_no);
      if (count < 0) throw ParseError(line_no, "negative element count");
      elements.push_back({std::string(tok[1]), static_cast<std::size_t>(count), {}, false});
    } else if (tok[0] == "property") {
      if (elements.empty()) throw ParseError(line_no, "property before element");
      if (tok.size() >= 2 && tok[1] == "list") {
        elements.back().has_list = true;
        elements.back().properties.emplace_back(tok.back());
      } else if (tok.size() == 3) {
        elements.back().properties.emplace_back(tok[2]);
      } else {
        throw ParseError(line_no, "malformed property line");
      }
    } else {
      throw ParseError(line_no, "unexpected header keyword '" + std::string(tok[0]) + "'");
    }
  }
  if (!header_done) throw ParseError(line_no, "missing end_header");
  if (!ascii) throw ParseError(line_no, "missing format line");

  std::vector<PointRecord> points;
  InstanceClassCheck class_check;
  bool found_vertex = false;
  for (const auto& element : elements) {
    if (element.name != "vertex") {
      // Skip other elements' data lines.
      for (std::size_t k = 0; k < element.count; ++k) {
        if (!next_line()) throw ParseError(line_no, "truncated element " + element.name);
      }
      continue;
    }
    found_vertex = true;
    if (element.has_list) throw ParseError(line_no, "list properties on vertex are not supported");
    auto find = [&](std::string_view name) -> std::optional<std::size_t> {
      for (std::size_t k = 0; k < element.properties.size(); ++k) {
        if (element.properties[k] == name) return k;
      }
      return std::nullopt;
    };
    const auto ix = find("x"), iy = find("y"), iz = find("z"), ic = find("class");
    const auto ii = find("instance");
    if (!ix || !iy || !iz || !ic) {
      throw ParseError(line_no, "vertex element needs x, y, z and class properties");
    }
    points.reserve(element.count);
    for (std::size_t k = 0; k < element.count; ++k) {
      if (!next_line()) throw ParseError(line_no, "truncated vertex data");
      const auto tok = split_ws(line);
      if (tok.size() != element.properties.size()) {
        throw ParseError(line_no, "expected " + std::to_string(element.properties.size()) +
                                      " values, got " + std::to_string(tok.size()));
      }
      PointRecord p;
      p.position = {parse_double(tok[*ix], line_no), parse_double(tok[*iy], line_no),
                    parse_double(tok[*iz], line_no)};
      // Class and instance are often stored as float properties.
      const auto class_value = parse_double(tok[*ic], line_no);
      auto label = class_from_code(static_cast<long long>(class_value));
      if (!label || class_value != std::floor(class_value)) {
        throw ParseError(line_no, "class value outside [0,7]");
      }
      p.label = *label;
      if (ii) {
        const auto inst = parse_double(tok[*ii], line_no);
        if (inst != std::floor(inst) || inst < -1) {
          throw ParseError(line_no, "invalid instance value");
        }
        if (inst >= 0) {
          p.gt_instance = static_cast<InstanceId>(inst);
          class_check.check(*p.gt_instance, p.label, line_no);
        }
      }
      points.push_back(p);
    }
  }
  if (!found_vertex) throw ParseError(line_no, "no vertex element");
  return finish(std::move(points), line_no);
}

LabeledPointCloud load_ply_ascii(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_ply_ascii(in);
}

LabeledPointCloud load_cloud(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".ply") return load_ply_ascii(path);
  return load_pts(path);
}

}  // namespace cloiseg
