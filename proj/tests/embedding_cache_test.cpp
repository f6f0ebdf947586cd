#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "tba/embedding_cache.hpp"
#include "tba/errors.hpp"
#include "tba/fileio.hpp"

namespace tba {
namespace {

Embedding sample_embedding() {
  Embedding e;
  e.n = 3;
  e.m = 2;
  e.coords = {0.5, -1.25, 3.0, 1e-300, -0.0, 42.0};
  e.stress = 0.0123;
  return e;
}

TEST(ContentHash, KnownDigest) {
  EXPECT_EQ(to_hex(content_hash("abc")), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(to_hex(content_hash("")), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(EmbeddingCodec, LayoutAndRoundTrip) {
  const auto hash = content_hash("map");
  const auto e = sample_embedding();
  const auto bytes = encode_embedding(hash, e);
  ASSERT_EQ(bytes.size(), 4u + 2u + 32u + 4u + 2u + 8u * 6u + 8u);
  EXPECT_EQ(bytes.substr(0, 4), "TBAE");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), kCacheVersion);
  EXPECT_EQ(static_cast<unsigned char>(bytes[5]), 0);
  EXPECT_EQ(static_cast<unsigned char>(bytes[38]), 3);
  EXPECT_EQ(static_cast<unsigned char>(bytes[42]), 2);

  const auto decoded = decode_embedding(bytes);
  EXPECT_EQ(decoded.map_hash, hash);
  EXPECT_EQ(decoded.embedding.n, 3u);
  EXPECT_EQ(decoded.embedding.m, 2u);
  EXPECT_EQ(decoded.embedding.coords, e.coords);
  EXPECT_EQ(decoded.embedding.stress, e.stress);
}

TEST(EmbeddingCodec, RejectsMalformedInput) {
  const auto bytes = encode_embedding(content_hash("map"), sample_embedding());
  EXPECT_THROW(decode_embedding(bytes.substr(0, bytes.size() - 1)), ParseError);
  EXPECT_THROW(decode_embedding(bytes + "x"), ParseError);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_embedding(bad_magic), ParseError);
  auto bad_version = bytes;
  bad_version[4] = 99;
  EXPECT_THROW(decode_embedding(bad_version), ParseError);
  EXPECT_THROW(decode_embedding(""), ParseError);
}

TEST(EmbeddingCache, StoreLoadAndKeying) {
  const EmbeddingCache cache(testing::temp_dir("cache_store"));
  const auto hash = content_hash("map-a");
  const auto e = sample_embedding();
  EXPECT_FALSE(cache.load(hash, 2, 3).has_value());

  const auto path = cache.store(hash, e);
  EXPECT_EQ(path, cache.embedding_path(hash, 2));
  EXPECT_EQ(path.filename().string(), to_hex(hash) + ".m2.tbae");
  bool mismatch = true;
  const auto loaded = cache.load(hash, 2, 3, &mismatch);
  ASSERT_TRUE(loaded.has_value());
  EXPECT_FALSE(mismatch);
  EXPECT_EQ(loaded->coords, e.coords);

  EXPECT_FALSE(cache.load(hash, 5, 3).has_value());
  EXPECT_FALSE(cache.load(content_hash("map-b"), 2, 3).has_value());
  EXPECT_NE(cache.embedding_path(hash, 5), cache.embedding_path(hash, 10));
}

TEST(EmbeddingCache, MismatchedEntriesAreReported) {
  const EmbeddingCache cache(testing::temp_dir("cache_mismatch"));
  const auto hash = content_hash("map-c");
  cache.store(hash, sample_embedding());
  bool mismatch = false;
  EXPECT_FALSE(cache.load(hash, 2, 4, &mismatch).has_value());
  EXPECT_TRUE(mismatch);

  // An entry whose embedded hash disagrees with its file name.
  write_file_atomic(cache.embedding_path(hash, 2), encode_embedding(content_hash("other"), sample_embedding()));
  EXPECT_FALSE(cache.load(hash, 2, 3, &mismatch).has_value());
  EXPECT_TRUE(mismatch);

  write_file_atomic(cache.embedding_path(hash, 2), "garbage");
  EXPECT_FALSE(cache.load(hash, 2, 3, &mismatch).has_value());
  EXPECT_TRUE(mismatch);
}

TEST(EmbeddingCache, DistanceMatrices) {
  const EmbeddingCache cache(testing::temp_dir("cache_dist"));
  const auto hash = content_hash("map-d");
  const auto d = all_pairs_vertex_distances(build_visibility_graph(testing::square_with_hole()));
  EXPECT_FALSE(cache.load_distances(hash, 8).has_value());
  cache.store_distances(hash, d);
  const auto loaded = cache.load_distances(hash, 8);
  ASSERT_TRUE(loaded.has_value());
  EXPECT_EQ(*loaded, d);
  EXPECT_FALSE(cache.load_distances(hash, 9).has_value());
}

TEST(EmbeddingCache, CreatesMissingDirectory) {
  const auto root = std::filesystem::path(testing::temp_dir("cache_nested")) / "a" / "b";
  const EmbeddingCache cache(root);
  cache.store(content_hash("x"), sample_embedding());
  EXPECT_TRUE(std::filesystem::exists(cache.embedding_path(content_hash("x"), 2)));
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    EXPECT_EQ(entry.path().extension(), ".tbae") << "leftover temp file " << entry.path();
  }
}

}  // namespace
}  // namespace tba
