#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "rb/cluster_model.hpp"
#include "rb/embedding.hpp"

namespace rb {

inline constexpr std::uint8_t kModelVersion = 1;

enum class ModelKind : std::uint8_t { Cluster = 0, Embedding = 1 };

// Container: "RBMD", version byte, kind byte, then the payload. Real-valued
// arrays are little-endian float32, row-major; counts are little-endian u32.
//
// Cluster:   u32 k, u16 high_res, u16 low_res, centroids [k x low^3],
//            thresholds [k], member counts u32[k], mean shapes [k x high^3]
// Embedding: u32 n, u32 dim, u16 low_res, n x (u32 length, id bytes),
//            mean_row [n], basis [dim x n], descriptors [n x dim]
//
// Values are rounded to float32 on write, so a reloaded model matches the
// in-memory one only to single precision.
void write_model(std::ostream& out, const ClusterModel& model);
void write_model(std::ostream& out, const EmbeddingModel& model, int low_resolution);

ModelKind peek_model_kind(std::istream& in);
ClusterModel read_cluster_model(std::istream& in);
EmbeddingModel read_embedding_model(std::istream& in, int* low_resolution = nullptr);

void save_model(const std::filesystem::path& path, const ClusterModel& model);
void save_model(const std::filesystem::path& path, const EmbeddingModel& model, int low_resolution);
ClusterModel load_cluster_model(const std::filesystem::path& path);
EmbeddingModel load_embedding_model(const std::filesystem::path& path, int* low_resolution = nullptr);

}  // namespace rb
