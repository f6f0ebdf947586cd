#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "tba/geodesic.hpp"
#include "tba/mds.hpp"

namespace tba {

using ContentHash = std::array<std::uint8_t, 32>;

/// SHA-256 of raw bytes.
ContentHash content_hash(std::string_view bytes);
std::string to_hex(const ContentHash& hash);

inline constexpr std::uint16_t kCacheVersion = 1;

/// Binary cache entry, little endian:
///   "TBAE" | u16 version | 32-byte map hash | u32 n | u16 m |
///   n*m f64 coords (row-major) | f64 final normalized stress
std::string encode_embedding(const ContentHash& map_hash, const Embedding& embedding);

/// Throws ParseError on a malformed or truncated entry.
struct DecodedEmbedding {
  ContentHash map_hash{};
  Embedding embedding;
};
DecodedEmbedding decode_embedding(std::string_view bytes);

/// Cache files live in one directory, keyed by map content hash and m.
class EmbeddingCache {
 public:
  explicit EmbeddingCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path embedding_path(const ContentHash& map_hash, std::size_t m) const;
  std::filesystem::path distances_path(const ContentHash& map_hash) const;

  /// Entry for (hash, m) if present and consistent with `vertex_count`.
  /// Sets `mismatch` when a file exists but cannot be used.
  std::optional<Embedding> load(const ContentHash& map_hash, std::size_t m, std::size_t vertex_count,
                                bool* mismatch = nullptr) const;
  std::optional<DistanceMatrix> load_distances(const ContentHash& map_hash, std::size_t vertex_count) const;

  std::filesystem::path store(const ContentHash& map_hash, const Embedding& embedding) const;
  void store_distances(const ContentHash& map_hash, const DistanceMatrix& d) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace tba
