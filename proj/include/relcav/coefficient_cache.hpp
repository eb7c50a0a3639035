#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>

#include "relcav/bogoliubov.hpp"

namespace relcav {

inline constexpr std::uint32_t kCacheFormatVersion = 1;

/// Identifies a cached block. Bit patterns of the doubles are compared exactly.
struct CacheKey {
  double length = 1.0;
  double h = 0.0;
  int n_max = 0;
  double abs_tolerance = 0.0;
  Provenance provenance = Provenance::oracle;

  auto tie() const { return std::tie(length, h, n_max, abs_tolerance, provenance); }
  bool operator<(const CacheKey& o) const { return tie() < o.tie(); }
  bool operator==(const CacheKey& o) const { return tie() == o.tie(); }
  std::string file_stem() const;
};

/// Binary layout (native little-endian):
///   "RELCAVBK" | u32 version | u32 provenance | i32 n_max | f64 length, h, abs_tolerance
///   | f64 alpha[n_max*n_max][re,im] row-major | f64 beta[...] | u64 FNV-1a of all preceding bytes.
void save_block(const std::filesystem::path& path, const CacheKey& key, const BogoliubovBlock& b);

/// Throws CacheError on bad magic, version mismatch, checksum failure or key mismatch.
BogoliubovBlock load_block(const std::filesystem::path& path, const CacheKey& expected);

/// $RELCAV_CACHE_DIR, else $XDG_CACHE_HOME/relcav, else ~/.cache/relcav.
std::filesystem::path default_cache_directory();

/// Memoises junction oracle blocks in memory and, optionally, on disk.
///
/// Concurrent readers are fine; disk writes go to a temporary file that is
/// renamed over the target, so the last writer wins and readers never see a
/// partial file.
class CoefficientCache {
 public:
  explicit CoefficientCache(std::optional<std::filesystem::path> directory = std::nullopt,
                            OracleSettings settings = {});

  /// Junction block for a cavity of the given length and signed acceleration h.
  /// Negative h is the mirrored block of |h|.
  BogoliubovBlock junction(double length, double h_signed, int n_max);

  const OracleSettings& settings() const { return settings_; }
  const std::optional<std::filesystem::path>& directory() const { return directory_; }
  std::size_t disk_hits() const;
  std::size_t computed() const;

 private:
  std::optional<std::filesystem::path> directory_;
  OracleSettings settings_;
  mutable std::mutex mutex_;
  std::map<CacheKey, std::shared_ptr<const BogoliubovBlock>> memory_;
  std::size_t disk_hits_ = 0;
  std::size_t computed_ = 0;
};

}  // namespace relcav
