#include <cstring>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "doctest.h"
#include "relcav/coefficient_cache.hpp"

using namespace relcav;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const char* name) {
  const auto dir = fs::temp_directory_path() / fmt::format("relcav-test-{}-{}", name, ::getpid());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

bool bit_identical(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(Complex) * a.size()) == 0;
}

}  // namespace

TEST_SUITE("coefficient-cache") {

TEST_CASE("blocks round-trip bit-exactly") {
  const auto dir = scratch_dir("roundtrip");
  const auto block = junction_coefficients_oracle(CavityGeometry::from_length(1.0, 3e-3), 12);
  const CacheKey key{1.0, 3e-3, 12, 1e-12, Provenance::oracle};
  const auto file = dir / (key.file_stem() + ".bin");
  save_block(file, key, block);
  const auto loaded = load_block(file, key);
  CHECK(bit_identical(loaded.alpha, block.alpha));
  CHECK(bit_identical(loaded.beta, block.beta));
  CHECK(loaded.provenance == Provenance::oracle);

  SUBCASE("a different key is refused") {
    CacheKey other = key;
    other.h = 4e-3;
    CHECK_THROWS_AS(load_block(file, other), CacheError);
  }
  SUBCASE("a version mismatch is refused") {
    std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(8);
    const std::uint32_t future = kCacheFormatVersion + 1;
    f.write(reinterpret_cast<const char*>(&future), sizeof future);
    f.close();
    CHECK_THROWS_WITH_AS(load_block(file, key), doctest::Contains("format version"), CacheError);
  }
  SUBCASE("corruption is detected") {
    std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(200);
    f.put('\x7f');
    f.close();
    CHECK_THROWS_AS(load_block(file, key), CacheError);
  }
  fs::remove_all(dir);
}

TEST_CASE("the cache directory honours RELCAV_CACHE_DIR") {
  ::setenv("RELCAV_CACHE_DIR", "/tmp/relcav-env-check", 1);
  CHECK(default_cache_directory() == fs::path("/tmp/relcav-env-check"));
  ::unsetenv("RELCAV_CACHE_DIR");
}

TEST_CASE("disk cache is reused across instances") {
  const auto dir = scratch_dir("reuse");
  BogoliubovBlock first;
  {
    CoefficientCache cache(dir);
    first = cache.junction(1.0, 2e-3, 10);
    CHECK(cache.computed() == 1);
    cache.junction(1.0, 2e-3, 10);
    CHECK(cache.computed() == 1);
  }
  CoefficientCache again(dir);
  const auto second = again.junction(1.0, 2e-3, 10);
  CHECK(again.disk_hits() == 1);
  CHECK(again.computed() == 0);
  CHECK(bit_identical(first.alpha, second.alpha));

  const auto mirrored = again.junction(1.0, -2e-3, 10);
  CHECK(mirrored.beta(0, 1) == -first.beta(0, 1));
  CHECK(again.computed() == 0);
  fs::remove_all(dir);
}

}
