#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "rb/error.hpp"
#include "rb/io.hpp"

namespace rb {

namespace {

static_assert(std::endian::native == std::endian::little, "binary PLY I/O assumes a little-endian host");

enum class ScalarType { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

ScalarType parse_type(const std::string& name) {
  if (name == "char" || name == "int8") return ScalarType::Int8;
  if (name == "uchar" || name == "uint8") return ScalarType::UInt8;
  if (name == "short" || name == "int16") return ScalarType::Int16;
  if (name == "ushort" || name == "uint16") return ScalarType::UInt16;
  if (name == "int" || name == "int32") return ScalarType::Int32;
  if (name == "uint" || name == "uint32") return ScalarType::UInt32;
  if (name == "float" || name == "float32") return ScalarType::Float32;
  if (name == "double" || name == "float64") return ScalarType::Float64;
  fail("unknown PLY property type '" + name + "'");
}

template <typename T>
T read_raw(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof value)) fail("truncated PLY body");
  return value;
}

double read_binary(std::istream& in, ScalarType type) {
  switch (type) {
    case ScalarType::Int8: return read_raw<std::int8_t>(in);
    case ScalarType::UInt8: return read_raw<std::uint8_t>(in);
    case ScalarType::Int16: return read_raw<std::int16_t>(in);
    case ScalarType::UInt16: return read_raw<std::uint16_t>(in);
    case ScalarType::Int32: return read_raw<std::int32_t>(in);
    case ScalarType::UInt32: return read_raw<std::uint32_t>(in);
    case ScalarType::Float32: return read_raw<float>(in);
    case ScalarType::Float64: return read_raw<double>(in);
  }
  return 0.0;
}

struct Property {
  std::string name;
  ScalarType type = ScalarType::Float32;
  bool is_list = false;
  ScalarType count_type = ScalarType::UInt8;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
};

struct PlyData {
  std::vector<Element> elements;
  // values[element][row] -> flattened property values (lists expand in place,
  // prefixed by their length).
  std::vector<std::vector<std::vector<double>>> rows;
};

PlyData read_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("ply", 0) != 0) fail(path.string() + ": not a PLY file");

  bool binary = false;
  PlyData data;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "format") {
      std::string kind;
      ls >> kind;
      if (kind == "binary_little_endian") {
        binary = true;
      } else if (kind != "ascii") {
        fail(path.string() + ": unsupported PLY format " + kind);
      }
    } else if (word == "element") {
      Element e;
      ls >> e.name >> e.count;
      data.elements.push_back(e);
    } else if (word == "property") {
      if (data.elements.empty()) fail(path.string() + ": property before element");
      Property p;
      std::string type;
      ls >> type;
      if (type == "list") {
        std::string count_type;
        std::string item_type;
        ls >> count_type >> item_type >> p.name;
        p.is_list = true;
        p.count_type = parse_type(count_type);
        p.type = parse_type(item_type);
      } else {
        p.type = parse_type(type);
        ls >> p.name;
      }
      data.elements.back().properties.push_back(p);
    } else if (word == "end_header") {
      break;
    }
  }

  for (const auto& e : data.elements) {
    auto& rows = data.rows.emplace_back(e.count);
    for (std::size_t r = 0; r < e.count; ++r) {
      auto& row = rows[r];
      if (binary) {
        for (const auto& p : e.properties) {
          if (p.is_list) {
            const double n = read_binary(in, p.count_type);
            row.push_back(n);
            for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) row.push_back(read_binary(in, p.type));
          } else {
            row.push_back(read_binary(in, p.type));
          }
        }
      } else {
        if (!std::getline(in, line)) fail(path.string() + ": truncated PLY body");
        std::istringstream ls(line);
        for (const auto& p : e.properties) {
          double v = 0.0;
          if (!(ls >> v)) fail(path.string() + ": malformed PLY row");
          row.push_back(v);
          if (p.is_list) {
            for (std::size_t k = 0; k < static_cast<std::size_t>(v); ++k) {
              double item = 0.0;
              if (!(ls >> item)) fail(path.string() + ": malformed PLY list");
              row.push_back(item);
            }
          }
        }
      }
    }
  }
  return data;
}

// Offset of a scalar property inside a row, or -1; only valid when no list
// property precedes it.
int scalar_offset(const Element& e, const std::string& name) {
  int offset = 0;
  for (const auto& p : e.properties) {
    if (p.name == name) return p.is_list ? -1 : offset;
    if (p.is_list) return -1;
    ++offset;
  }
  return -1;
}

std::vector<Vec3> read_vertices(const PlyData& data, std::size_t element, const std::string& path) {
  const Element& e = data.elements[element];
  const int ox = scalar_offset(e, "x");
  const int oy = scalar_offset(e, "y");
  const int oz = scalar_offset(e, "z");
  if (ox < 0 || oy < 0 || oz < 0) fail(path + ": vertex element lacks x/y/z");
  std::vector<Vec3> out;
  out.reserve(e.count);
  for (const auto& row : data.rows[element]) out.push_back({row[ox], row[oy], row[oz]});
  return out;
}

std::size_t find_element(const PlyData& data, const std::string& name) {
  for (std::size_t i = 0; i < data.elements.size(); ++i) {
    if (data.elements[i].name == name) return i;
  }
  return data.elements.size();
}

template <typename T>
void write_raw(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open " + path.string() + " for writing");
  out.precision(17);
  return out;
}

const char* format_line(PlyFormat format) {
  return format == PlyFormat::Ascii ? "format ascii 1.0\n" : "format binary_little_endian 1.0\n";
}

}  // namespace

void save_ply(const std::filesystem::path& path, const TriangleMesh& mesh, PlyFormat format) {
  auto out = open_for_write(path);
  out << "ply\n" << format_line(format) << "element vertex " << mesh.vertices.size()
      << "\nproperty double x\nproperty double y\nproperty double z\nelement face "
      << mesh.triangles.size() << "\nproperty list uchar int vertex_indices\nend_header\n";
  for (const auto& v : mesh.vertices) {
    if (format == PlyFormat::Ascii) {
      out << v.x << ' ' << v.y << ' ' << v.z << '\n';
    } else {
      write_raw(out, v.x);
      write_raw(out, v.y);
      write_raw(out, v.z);
    }
  }
  for (const auto& t : mesh.triangles) {
    if (format == PlyFormat::Ascii) {
      out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    } else {
      write_raw(out, std::uint8_t{3});
      for (auto i : t) write_raw(out, static_cast<std::int32_t>(i));
    }
  }
  if (!out) fail("failed writing " + path.string());
}

TriangleMesh load_ply_mesh(const std::filesystem::path& path) {
  const PlyData data = read_ply(path);
  const auto ve = find_element(data, "vertex");
  if (ve == data.elements.size()) fail(path.string() + ": no vertex element");
  TriangleMesh mesh;
  mesh.vertices = read_vertices(data, ve, path.string());
  const auto fe = find_element(data, "face");
  if (fe == data.elements.size()) return mesh;
  const Element& faces = data.elements[fe];
  if (faces.properties.empty() || !faces.properties.front().is_list) {
    fail(path.string() + ": face element must start with the index list");
  }
  for (const auto& row : data.rows[fe]) {
    const auto n = static_cast<std::size_t>(row[0]);
    for (std::size_t k = 2; k < n; ++k) {  // fan triangulation
      mesh.triangles.push_back({static_cast<std::uint32_t>(row[1]), static_cast<std::uint32_t>(row[k]),
                                static_cast<std::uint32_t>(row[k + 1])});
    }
  }
  for (const auto& t : mesh.triangles) {
    for (auto i : t) {
      if (i >= mesh.vertices.size()) fail(path.string() + ": face index out of range");
    }
  }
  return mesh;
}

void save_ply(const std::filesystem::path& path, const PointCloud& cloud, PlyFormat format,
              const std::vector<Rgb>* colors) {
  if (colors && colors->size() != cloud.size()) fail("color count does not match point count");
  const bool with_dist = !colors && cloud.scalars.size() == cloud.size() && !cloud.empty();
  auto out = open_for_write(path);
  out << "ply\n" << format_line(format) << "element vertex " << cloud.size()
      << "\nproperty float x\nproperty float y\nproperty float z\n";
  if (with_dist) out << "property float dist\n";
  if (colors) out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out << "end_header\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3 p = cloud.points[i];
    if (format == PlyFormat::Ascii) {
      out << static_cast<float>(p.x) << ' ' << static_cast<float>(p.y) << ' ' << static_cast<float>(p.z);
      if (with_dist) out << ' ' << static_cast<float>(cloud.scalars[i]);
      if (colors) {
        const Rgb& c = (*colors)[i];
        out << ' ' << int{c[0]} << ' ' << int{c[1]} << ' ' << int{c[2]};
      }
      out << '\n';
    } else {
      write_raw(out, static_cast<float>(p.x));
      write_raw(out, static_cast<float>(p.y));
      write_raw(out, static_cast<float>(p.z));
      if (with_dist) write_raw(out, static_cast<float>(cloud.scalars[i]));
      if (colors) {
        for (auto channel : (*colors)[i]) write_raw(out, channel);
      }
    }
  }
  if (!out) fail("failed writing " + path.string());
}

PlyPoints load_ply_points(const std::filesystem::path& path) {
  const PlyData data = read_ply(path);
  const auto ve = find_element(data, "vertex");
  if (ve == data.elements.size()) fail(path.string() + ": no vertex element");
  PlyPoints result;
  result.cloud.points = read_vertices(data, ve, path.string());
  const Element& e = data.elements[ve];
  if (const int od = scalar_offset(e, "dist"); od >= 0) {
    for (const auto& row : data.rows[ve]) result.cloud.scalars.push_back(row[od]);
  }
  const int r = scalar_offset(e, "red");
  const int g = scalar_offset(e, "green");
  const int b = scalar_offset(e, "blue");
  if (r >= 0 && g >= 0 && b >= 0) {
    for (const auto& row : data.rows[ve]) {
      result.colors.push_back({static_cast<std::uint8_t>(row[r]), static_cast<std::uint8_t>(row[g]),
                               static_cast<std::uint8_t>(row[b])});
    }
  }
  return result;
}

}  // namespace rb
