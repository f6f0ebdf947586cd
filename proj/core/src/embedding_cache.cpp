#include "tba/embedding_cache.hpp"

#include <bit>
#include <cstring>
#include <sstream>

#include <openssl/evp.h>

#include "tba/errors.hpp"
#include "tba/fileio.hpp"

namespace tba {

namespace {

static_assert(std::endian::native == std::endian::little, "cache format assumes a little-endian host");

constexpr char kMagic[4] = {'T', 'B', 'A', 'E'};

template <typename T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    T value{};
    take(&value, sizeof(T));
    return value;
  }
  void take(void* dst, std::size_t len) {
    if (pos_ + len > bytes_.size()) throw ParseError("embedding cache: truncated entry");
    std::memcpy(dst, bytes_.data() + pos_, len);
    pos_ += len;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

ContentHash content_hash(std::string_view bytes) {
  ContentHash out{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 || len != out.size()) {
    throw Error("sha256 digest failed");
  }
  return out;
}

std::string to_hex(const ContentHash& hash) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  for (auto b : hash) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0xf]);
  }
  return s;
}

std::string encode_embedding(const ContentHash& map_hash, const Embedding& embedding) {
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put<std::uint16_t>(out, kCacheVersion);
  out.append(reinterpret_cast<const char*>(map_hash.data()), map_hash.size());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(embedding.n));
  put<std::uint16_t>(out, static_cast<std::uint16_t>(embedding.m));
  for (double v : embedding.coords) put<double>(out, v);
  put<double>(out, embedding.stress);
  return out;
}

DecodedEmbedding decode_embedding(std::string_view bytes) {
  Reader in(bytes);
  char magic[4];
  in.take(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(magic)) != 0) throw ParseError("embedding cache: bad magic");
  if (in.get<std::uint16_t>() != kCacheVersion) throw ParseError("embedding cache: unsupported version");
  DecodedEmbedding out;
  in.take(out.map_hash.data(), out.map_hash.size());
  out.embedding.n = in.get<std::uint32_t>();
  out.embedding.m = in.get<std::uint16_t>();
  out.embedding.coords.resize(out.embedding.n * out.embedding.m);
  for (double& v : out.embedding.coords) v = in.get<double>();
  out.embedding.stress = in.get<double>();
  if (!in.done()) throw ParseError("embedding cache: trailing bytes");
  return out;
}

std::filesystem::path EmbeddingCache::embedding_path(const ContentHash& map_hash, std::size_t m) const {
  return dir_ / (to_hex(map_hash) + ".m" + std::to_string(m) + ".tbae");
}

std::filesystem::path EmbeddingCache::distances_path(const ContentHash& map_hash) const {
  return dir_ / (to_hex(map_hash) + ".dist");
}

std::optional<Embedding> EmbeddingCache::load(const ContentHash& map_hash, std::size_t m, std::size_t vertex_count,
                                              bool* mismatch) const {
  if (mismatch) *mismatch = false;
  const auto path = embedding_path(map_hash, m);
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    auto decoded = decode_embedding(read_file(path));
    if (decoded.map_hash == map_hash && decoded.embedding.m == m && decoded.embedding.n == vertex_count) {
      return std::move(decoded.embedding);
    }
  } catch (const ParseError&) {
  }
  if (mismatch) *mismatch = true;
  return std::nullopt;
}

std::optional<DistanceMatrix> EmbeddingCache::load_distances(const ContentHash& map_hash,
                                                             std::size_t vertex_count) const {
  const auto path = distances_path(map_hash);
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    std::istringstream in(read_file(path));
    auto d = read_distance_matrix(in);
    if (d.size() == vertex_count) return d;
  } catch (const ParseError&) {
  }
  return std::nullopt;
}

std::filesystem::path EmbeddingCache::store(const ContentHash& map_hash, const Embedding& embedding) const {
  const auto path = embedding_path(map_hash, embedding.m);
  write_file_atomic(path, encode_embedding(map_hash, embedding));
  return path;
}

void EmbeddingCache::store_distances(const ContentHash& map_hash, const DistanceMatrix& d) const {
  std::ostringstream out;
  write_distance_matrix(out, d);
  write_file_atomic(distances_path(map_hash), out.str());
}

}  // namespace tba
