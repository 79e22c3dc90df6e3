#include "poolsim/spcache/serialize.hpp"

#include <cstring>
#include <fstream>
#include <iterator>

namespace poolsim::spcache {

namespace {

constexpr char kMagic[4] = {'S', 'P', 'C', '1'};

class Writer {
 public:
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void raw(const char* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void put(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : b_(b) {}
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  void need(std::uint64_t bytes) const {
    if (bytes > b_.size() - pos_) throw CacheFormatError(CacheFormatErrorKind::Truncated, "cache file is truncated");
  }
  bool done() const { return pos_ == b_.size(); }
  const std::uint8_t* at() const { return b_.data() + pos_; }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }

 private:
  std::uint64_t get(int bytes) {
    need(static_cast<std::uint64_t>(bytes));
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(b_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(bytes);
    return v;
  }
  const std::vector<std::uint8_t>& b_;
  std::size_t pos_ = 0;
};

void write_partition(Writer& w, const CachePartition& p) {
  w.u32(p.region);
  w.u32(static_cast<std::uint32_t>(p.destinations.size()));
  for (NodeId d : p.destinations) w.u32(d);
  w.u32(static_cast<std::uint32_t>(p.rows.size()));
  for (NodeId r : p.rows) w.u32(r);
  for (std::size_t u = 0; u < p.source_count(); ++u) {
    auto cov = p.cover(static_cast<NodeId>(u));
    w.u32(static_cast<std::uint32_t>(cov.size()));
    for (const CoverEntry& e : cov) {
      w.u32(e.row);
      w.u64(e.dist);
    }
  }
  for (Millimeters m : p.local) w.u64(m);
}

CachePartition read_partition(Reader& r, std::uint32_t node_count) {
  CachePartition p;
  p.region = r.u32();
  const std::uint32_t nd = r.u32();
  r.need(static_cast<std::uint64_t>(nd) * 4);
  p.destinations.resize(nd);
  for (auto& d : p.destinations) d = r.u32();
  const std::uint32_t nr = r.u32();
  r.need(static_cast<std::uint64_t>(nr) * 4);
  p.rows.resize(nr);
  for (auto& x : p.rows) x = r.u32();
  p.cover_offset.assign(static_cast<std::size_t>(node_count) + 1, 0);
  for (std::uint32_t u = 0; u < node_count; ++u) {
    const std::uint32_t k = r.u32();
    r.need(static_cast<std::uint64_t>(k) * 12);
    for (std::uint32_t i = 0; i < k; ++i) {
      CoverEntry e;
      e.row = r.u32();
      e.dist = r.u64();
      p.cover_entries.push_back(e);
    }
    p.cover_offset[u + 1] = p.cover_entries.size();
  }
  const std::uint64_t cells = static_cast<std::uint64_t>(nr) * nd;
  r.need(cells * 8);
  p.local.resize(cells);
  for (auto& m : p.local) m = r.u64();
  return p;
}

}  // namespace

std::vector<std::uint8_t> serialize_cache(const DistanceCache& cache) {
  Writer w;
  w.raw(kMagic, 4);
  w.u32(kCacheFormatVersion);
  w.u32(cache.L());
  w.u32(static_cast<std::uint32_t>(cache.node_count()));
  w.u32(static_cast<std::uint32_t>(cache.partitions().size()));
  for (const auto& p : cache.partitions()) write_partition(w, p);
  for (const auto& p : cache.source_partitions()) write_partition(w, p);
  return w.take();
}

DistanceCache deserialize_cache(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 && std::memcmp(bytes.data(), kMagic, bytes.size()) == 0)
    throw CacheFormatError(CacheFormatErrorKind::Truncated, "cache file is truncated");
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw CacheFormatError(CacheFormatErrorKind::BadMagic, "not a cache file (bad magic)");
  Reader r(bytes);
  r.skip(4);
  const std::uint32_t version = r.u32();
  if (version != kCacheFormatVersion)
    throw CacheFormatError(CacheFormatErrorKind::VersionMismatch,
                           "cache format version " + std::to_string(version) + ", expected " +
                               std::to_string(kCacheFormatVersion));
  const std::uint32_t L = r.u32();
  const std::uint32_t n = r.u32();
  const std::uint32_t k = r.u32();
  std::vector<CachePartition> dest, src;
  for (std::uint32_t i = 0; i < k; ++i) dest.push_back(read_partition(r, n));
  for (std::uint32_t i = 0; i < k; ++i) src.push_back(read_partition(r, n));
  if (!r.done()) throw CacheFormatError(CacheFormatErrorKind::Corrupt, "trailing bytes after cache payload");
  try {
    return assemble_cache(L, n, std::move(dest), std::move(src));
  } catch (const std::invalid_argument& e) {
    throw CacheFormatError(CacheFormatErrorKind::Corrupt, std::string("corrupt cache: ") + e.what());
  }
}

void write_cache_file(const std::string& path, const DistanceCache& cache) {
  const auto bytes = serialize_cache(cache);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write cache file " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing cache file " + path);
}

DistanceCache read_cache_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open cache file " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_cache(bytes);
}

}  // namespace poolsim::spcache
