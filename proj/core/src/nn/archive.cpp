#include "dasr/nn/archive.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "dasr/error.hpp"

namespace dasr::nn {

static_assert(std::endian::native == std::endian::little, "archive I/O assumes little-endian");

namespace {

constexpr char kMagic[8] = {'D', 'A', 'S', 'R', 'C', 'K', 'P', 'T'};
constexpr std::uint8_t kDtypeF64 = 1;

class Writer {
 public:
  template <typename T>
  void put(T v) {
    const auto* p = reinterpret_cast<const unsigned char*>(&v);
    buf_.insert(buf_.end(), p, p + sizeof(T));
  }
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    buf_.insert(buf_.end(), p, p + n);
  }
  std::vector<unsigned char>& buffer() { return buf_; }

 private:
  std::vector<unsigned char> buf_;
};

class Reader {
 public:
  Reader(const unsigned char* data, std::size_t size) : data_(data), size_(size) {}

  template <typename T>
  T get() {
    T v;
    std::memcpy(&v, take(sizeof(T)), sizeof(T));
    return v;
  }
  const unsigned char* take(std::size_t n) {
    if (n > size_ - pos_) throw FormatError("archive truncated");
    const unsigned char* p = data_ + pos_;
    pos_ += n;
    return p;
  }
  std::size_t remaining() const { return size_ - pos_; }

 private:
  const unsigned char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

std::uint32_t crc_of(const unsigned char* data, std::size_t n) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  while (n > 0) {
    const uInt chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
    crc = crc32(crc, data, chunk);
    data += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

const Tensor* TensorArchive::find(const std::string& name) const {
  for (const auto& [n, t] : tensors)
    if (n == name) return &t;
  return nullptr;
}

const Tensor& TensorArchive::get(const std::string& name) const {
  if (const Tensor* t = find(name)) return *t;
  throw FormatError("archive has no tensor named " + name);
}

std::vector<unsigned char> serialize_archive(const TensorArchive& archive) {
  Writer w;
  w.bytes(kMagic, sizeof(kMagic));
  w.put<std::uint32_t>(TensorArchive::kVersion);
  w.put<std::uint32_t>(archive.phase);
  w.put<std::uint64_t>(archive.iteration);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(archive.metadata.size()));
  w.bytes(archive.metadata.data(), archive.metadata.size());
  w.put<std::uint32_t>(static_cast<std::uint32_t>(archive.tensors.size()));
  std::uint64_t offset = 0;
  for (const auto& [name, t] : archive.tensors) {
    DASR_REQUIRE(name.size() < 65536, "tensor name too long");
    w.put<std::uint16_t>(static_cast<std::uint16_t>(name.size()));
    w.bytes(name.data(), name.size());
    w.put<std::uint8_t>(kDtypeF64);
    w.put<std::uint8_t>(4);
    const Shape& s = t.shape();
    for (int d : {s.n, s.c, s.h, s.w}) w.put<std::uint32_t>(static_cast<std::uint32_t>(d));
    w.put<std::uint64_t>(offset);
    offset += t.numel() * sizeof(double);
  }
  w.put<std::uint64_t>(offset);
  for (const auto& entry : archive.tensors)
    w.bytes(entry.second.data(), entry.second.numel() * sizeof(double));
  auto& buf = w.buffer();
  const std::uint32_t crc = crc_of(buf.data(), buf.size());
  w.put<std::uint32_t>(crc);
  return std::move(buf);
}

TensorArchive deserialize_archive(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < sizeof(kMagic) + 4) throw ChecksumError("archive truncated");
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw FormatError("not a tensor archive (bad magic)");
  std::uint32_t stored;
  std::memcpy(&stored, bytes.data() + bytes.size() - 4, 4);
  if (crc_of(bytes.data(), bytes.size() - 4) != stored)
    throw ChecksumError("archive checksum mismatch (truncated or corrupt file)");

  Reader r(bytes.data(), bytes.size() - 4);
  r.take(sizeof(kMagic));
  const auto version = r.get<std::uint32_t>();
  if (version != TensorArchive::kVersion)
    throw FormatError("unsupported archive version " + std::to_string(version));
  TensorArchive out;
  out.phase = r.get<std::uint32_t>();
  out.iteration = r.get<std::uint64_t>();
  const auto meta_len = r.get<std::uint32_t>();
  const unsigned char* meta = r.take(meta_len);
  out.metadata.assign(reinterpret_cast<const char*>(meta), meta_len);

  struct Entry {
    std::string name;
    Shape shape;
    std::uint64_t offset;
  };
  const auto count = r.get<std::uint32_t>();
  std::vector<Entry> entries;
  entries.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto len = r.get<std::uint16_t>();
    const unsigned char* name = r.take(len);
    Entry e{std::string(reinterpret_cast<const char*>(name), len), {}, 0};
    if (r.get<std::uint8_t>() != kDtypeF64) throw FormatError("unsupported dtype for " + e.name);
    if (r.get<std::uint8_t>() != 4) throw FormatError("unsupported rank for " + e.name);
    e.shape.n = static_cast<int>(r.get<std::uint32_t>());
    e.shape.c = static_cast<int>(r.get<std::uint32_t>());
    e.shape.h = static_cast<int>(r.get<std::uint32_t>());
    e.shape.w = static_cast<int>(r.get<std::uint32_t>());
    e.offset = r.get<std::uint64_t>();
    entries.push_back(std::move(e));
  }
  const auto payload_len = r.get<std::uint64_t>();
  if (payload_len != r.remaining()) throw FormatError("archive payload length mismatch");
  const unsigned char* payload = r.take(payload_len);
  for (auto& e : entries) {
    const std::uint64_t nbytes = e.shape.numel() * sizeof(double);
    if (e.offset + nbytes > payload_len) throw FormatError("tensor " + e.name + " out of range");
    std::vector<double> values(e.shape.numel());
    std::memcpy(values.data(), payload + e.offset, nbytes);
    out.tensors.emplace_back(std::move(e.name), Tensor(e.shape, std::move(values)));
  }
  return out;
}

void write_archive(const TensorArchive& archive, const std::filesystem::path& path) {
  const auto bytes = serialize_archive(archive);
  // Write to a sibling temp file first so a crash never leaves a half file.
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + tmp);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IoError("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

TensorArchive read_archive(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("missing file: " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
  return deserialize_archive(bytes);
}

}  // namespace dasr::nn
