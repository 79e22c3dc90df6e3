#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "poolsim/spcache/cache.hpp"

namespace poolsim::spcache {

inline constexpr std::uint32_t kCacheFormatVersion = 1;

enum class CacheFormatErrorKind { BadMagic, VersionMismatch, Truncated, Corrupt };

class CacheFormatError : public std::runtime_error {
 public:
  CacheFormatError(CacheFormatErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  CacheFormatErrorKind kind() const { return kind_; }

 private:
  CacheFormatErrorKind kind_;
};

std::vector<std::uint8_t> serialize_cache(const DistanceCache& cache);
DistanceCache deserialize_cache(const std::vector<std::uint8_t>& bytes);

void write_cache_file(const std::string& path, const DistanceCache& cache);
DistanceCache read_cache_file(const std::string& path);

}  // namespace poolsim::spcache
