#include "rb/model_io.hpp"

#include <cstring>
#include <fstream>
#include <string>

#include "rb/error.hpp"

namespace rb {

namespace {

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
T get(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof value)) fail("truncated model file");
  return value;
}

void put_floats(std::ostream& out, std::span<const double> values) {
  for (double v : values) put(out, static_cast<float>(v));
}

std::vector<double> get_floats(std::istream& in, std::size_t n) {
  std::vector<double> out(n);
  for (auto& v : out) v = get<float>(in);
  return out;
}

void write_header(std::ostream& out, ModelKind kind) {
  out.write("RBMD", 4);
  put(out, kModelVersion);
  put(out, static_cast<std::uint8_t>(kind));
}

void expect_kind(std::istream& in, ModelKind kind) {
  if (peek_model_kind(in) != kind) fail("model file holds a different model kind");
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path.string());
  return in;
}

}  // namespace

void write_model(std::ostream& out, const ClusterModel& model) {
  write_header(out, ModelKind::Cluster);
  put(out, static_cast<std::uint32_t>(model.k));
  put(out, static_cast<std::uint16_t>(model.high_resolution));
  put(out, static_cast<std::uint16_t>(model.low_resolution));
  for (const auto& c : model.centroids) put_floats(out, c);
  for (float t : model.thresholds) put(out, t);
  for (auto n : model.member_counts) put(out, static_cast<std::uint32_t>(n));
  for (const auto& m : model.mean_shapes) {
    out.write(reinterpret_cast<const char*>(m.values.data()),
              static_cast<std::streamsize>(m.values.size() * sizeof(float)));
  }
  if (!out) fail("failed to write cluster model");
}

void write_model(std::ostream& out, const EmbeddingModel& model, int low_resolution) {
  write_header(out, ModelKind::Embedding);
  const std::size_t n = model.mean_row.size();
  put(out, static_cast<std::uint32_t>(n));
  put(out, static_cast<std::uint32_t>(model.dim()));
  put(out, static_cast<std::uint16_t>(low_resolution));
  for (std::size_t i = 0; i < n; ++i) {
    const std::string id = i < model.train_ids.size() ? model.train_ids[i] : std::string{};
    put(out, static_cast<std::uint32_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
  }
  put_floats(out, model.mean_row);
  put_floats(out, model.basis.data);
  put_floats(out, model.descriptors.data);
  if (!out) fail("failed to write embedding model");
}

ModelKind peek_model_kind(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "RBMD", 4) != 0) fail("not an RBMD model file");
  const auto version = get<std::uint8_t>(in);
  if (version != kModelVersion) fail("unsupported model version " + std::to_string(version));
  const auto kind = get<std::uint8_t>(in);
  if (kind > 1) fail("unknown model kind " + std::to_string(kind));
  return static_cast<ModelKind>(kind);
}

ClusterModel read_cluster_model(std::istream& in) {
  expect_kind(in, ModelKind::Cluster);
  ClusterModel model;
  model.k = get<std::uint32_t>(in);
  model.high_resolution = get<std::uint16_t>(in);
  model.low_resolution = get<std::uint16_t>(in);
  if (model.k == 0 || model.high_resolution < 1 || model.high_resolution > kMaxResolution ||
      model.low_resolution < 1 || model.low_resolution > kMaxResolution) {
    fail("corrupt cluster model header");
  }
  const std::size_t low_cells = static_cast<std::size_t>(model.low_resolution) * model.low_resolution * model.low_resolution;
  const std::size_t high_cells =
      static_cast<std::size_t>(model.high_resolution) * model.high_resolution * model.high_resolution;
  for (std::size_t c = 0; c < model.k; ++c) model.centroids.push_back(get_floats(in, low_cells));
  for (std::size_t c = 0; c < model.k; ++c) model.thresholds.push_back(get<float>(in));
  for (std::size_t c = 0; c < model.k; ++c) model.member_counts.push_back(get<std::uint32_t>(in));
  for (std::size_t c = 0; c < model.k; ++c) {
    RealGrid g{model.high_resolution, std::vector<float>(high_cells)};
    if (!in.read(reinterpret_cast<char*>(g.values.data()), static_cast<std::streamsize>(high_cells * sizeof(float)))) {
      fail("truncated model file");
    }
    model.mean_shapes.push_back(std::move(g));
  }
  return model;
}

EmbeddingModel read_embedding_model(std::istream& in, int* low_resolution) {
  expect_kind(in, ModelKind::Embedding);
  EmbeddingModel model;
  const auto n = get<std::uint32_t>(in);
  const auto dim = get<std::uint32_t>(in);
  const auto low = get<std::uint16_t>(in);
  if (n == 0 || dim == 0 || dim > n) fail("corrupt embedding model header");
  if (low_resolution) *low_resolution = low;
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto len = get<std::uint32_t>(in);
    std::string id(len, '\0');
    if (len > 0 && !in.read(id.data(), len)) fail("truncated model file");
    model.train_ids.push_back(std::move(id));
  }
  model.mean_row = get_floats(in, n);
  model.basis = Matrix(dim, n);
  model.basis.data = get_floats(in, static_cast<std::size_t>(dim) * n);
  model.descriptors = Matrix(n, dim);
  model.descriptors.data = get_floats(in, static_cast<std::size_t>(n) * dim);
  return model;
}

void save_model(const std::filesystem::path& path, const ClusterModel& model) {
  auto out = open_out(path);
  write_model(out, model);
}

void save_model(const std::filesystem::path& path, const EmbeddingModel& model, int low_resolution) {
  auto out = open_out(path);
  write_model(out, model, low_resolution);
}

ClusterModel load_cluster_model(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_cluster_model(in);
}

EmbeddingModel load_embedding_model(const std::filesystem::path& path, int* low_resolution) {
  auto in = open_in(path);
  return read_embedding_model(in, low_resolution);
}

}  // namespace rb
