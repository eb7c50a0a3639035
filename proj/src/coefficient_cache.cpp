#include "relcav/coefficient_cache.hpp"

#include <bit>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <random>
#include <vector>

#include <fmt/format.h>

namespace relcav {
namespace {

constexpr char kMagic[8] = {'R', 'E', 'L', 'C', 'A', 'V', 'B', 'K'};

std::uint64_t fnv1a(const std::vector<char>& bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  return hash;
}

class Writer {
 public:
  template <typename T>
  void put(const T& value) {
    const char* p = reinterpret_cast<const char*>(&value);
    bytes_.insert(bytes_.end(), p, p + sizeof(T));
  }
  void put_matrix(const ComplexMatrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        put(m(r, c).real());
        put(m(r, c).imag());
      }
    }
  }
  std::vector<char>& bytes() { return bytes_; }

 private:
  std::vector<char> bytes_;
};

class Reader {
 public:
  explicit Reader(const std::vector<char>& bytes) : bytes_(bytes) {}
  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw CacheError("cache file truncated");
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  ComplexMatrix get_matrix(int n) {
    ComplexMatrix m(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        const double re = get<double>();
        const double im = get<double>();
        m(r, c) = Complex(re, im);
      }
    }
    return m;
  }
  std::size_t position() const { return pos_; }

 private:
  const std::vector<char>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string CacheKey::file_stem() const {
  return fmt::format("junction-v{}-{}-L{:016x}-h{:016x}-n{}-tol{:016x}", kCacheFormatVersion,
                     to_string(provenance), std::bit_cast<std::uint64_t>(length),
                     std::bit_cast<std::uint64_t>(h), n_max,
                     std::bit_cast<std::uint64_t>(abs_tolerance));
}

void save_block(const std::filesystem::path& path, const CacheKey& key, const BogoliubovBlock& b) {
  if (b.n_max() != key.n_max) throw CacheError("block truncation does not match cache key");
  Writer w;
  for (char c : kMagic) w.put(c);
  w.put(kCacheFormatVersion);
  w.put(static_cast<std::uint32_t>(key.provenance));
  w.put(static_cast<std::int32_t>(key.n_max));
  w.put(key.length);
  w.put(key.h);
  w.put(key.abs_tolerance);
  w.put_matrix(b.alpha);
  w.put_matrix(b.beta);
  w.put(fnv1a(w.bytes()));

  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::random_device rd;
  auto tmp = path;
  tmp += fmt::format(".tmp{:08x}", rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError(fmt::format("cannot write cache file {}", tmp.string()));
    out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
    if (!out) throw CacheError(fmt::format("short write to cache file {}", tmp.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw CacheError(fmt::format("cannot move cache file into place at {}", path.string()));
  }
}

BogoliubovBlock load_block(const std::filesystem::path& path, const CacheKey& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError(fmt::format("cannot open cache file {}", path.string()));
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  Reader r(bytes);
  for (char c : kMagic) {
    if (r.get<char>() != c) throw CacheError(fmt::format("{} is not a coefficient cache file", path.string()));
  }
  const auto version = r.get<std::uint32_t>();
  if (version != kCacheFormatVersion) {
    throw CacheError(fmt::format("cache file {} has format version {}, expected {}", path.string(),
                                 version, kCacheFormatVersion));
  }
  CacheKey key;
  key.provenance = static_cast<Provenance>(r.get<std::uint32_t>());
  key.n_max = r.get<std::int32_t>();
  key.length = r.get<double>();
  key.h = r.get<double>();
  key.abs_tolerance = r.get<double>();
  if (!(key == expected)) throw CacheError(fmt::format("cache file {} describes a different block", path.string()));
  if (key.n_max < 1 || bytes.size() != r.position() + 32ull * key.n_max * key.n_max + 8) {
    throw CacheError(fmt::format("cache file {} has the wrong size", path.string()));
  }
  BogoliubovBlock b;
  b.alpha = r.get_matrix(key.n_max);
  b.beta = r.get_matrix(key.n_max);
  b.provenance = key.provenance;
  const std::vector<char> payload(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(r.position()));
  if (r.get<std::uint64_t>() != fnv1a(payload)) {
    throw CacheError(fmt::format("cache file {} failed its checksum", path.string()));
  }
  return b;
}

std::filesystem::path default_cache_directory() {
  if (const char* dir = std::getenv("RELCAV_CACHE_DIR"); dir && *dir) return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
    return std::filesystem::path(xdg) / "relcav";
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "relcav";
  }
  return std::filesystem::temp_directory_path() / "relcav";
}

CoefficientCache::CoefficientCache(std::optional<std::filesystem::path> directory,
                                   OracleSettings settings)
    : directory_(std::move(directory)), settings_(settings) {}

BogoliubovBlock CoefficientCache::junction(double length, double h_signed, int n_max) {
  const double h = std::abs(h_signed);
  const CacheKey key{length, h, n_max, settings_.quadrature.abs_tolerance, Provenance::oracle};

  std::shared_ptr<const BogoliubovBlock> block;
  {
    std::lock_guard lock(mutex_);
    if (auto it = memory_.find(key); it != memory_.end()) block = it->second;
  }
  if (!block) {
    std::optional<BogoliubovBlock> loaded;
    std::filesystem::path file;
    if (directory_) {
      file = *directory_ / (key.file_stem() + ".bin");
      if (std::filesystem::exists(file)) {
        try {
          loaded = load_block(file, key);
        } catch (const CacheError&) {
          // Stale or foreign file; recompute and overwrite below.
        }
      }
    }
    const bool from_disk = loaded.has_value();
    if (!loaded) {
      loaded = junction_coefficients_oracle(CavityGeometry::from_length(length, h), n_max, settings_);
      if (directory_) save_block(file, key, *loaded);
    }
    block = std::make_shared<const BogoliubovBlock>(std::move(*loaded));
    std::lock_guard lock(mutex_);
    (from_disk ? disk_hits_ : computed_) += 1;
    memory_.emplace(key, block);
  }
  return h_signed < 0.0 ? mirror(*block) : *block;
}

std::size_t CoefficientCache::disk_hits() const {
  std::lock_guard lock(mutex_);
  return disk_hits_;
}

std::size_t CoefficientCache::computed() const {
  std::lock_guard lock(mutex_);
  return computed_;
}

}  // namespace relcav
