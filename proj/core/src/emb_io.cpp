#include "pmic/emb_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "pmic/error.hpp"

namespace pmic {
namespace {

constexpr std::uint8_t kMagic[4] = {'E', 'M', 'B', '1'};
constexpr std::size_t kHeaderSize = 4 + 4 + 4 + 1;

static_assert(std::endian::native == std::endian::little,
              "EMB1 codec assumes a little-endian host");

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[offset + i]) << (8 * i);
  return v;
}

void require(std::span<const std::uint8_t> bytes, std::size_t offset, std::size_t len,
             const char* what) {
  if (offset > bytes.size() || len > bytes.size() - offset) {
    throw FormatError(std::string("EMB1 payload truncated while reading ") + what, bytes.size());
  }
}

}  // namespace

std::vector<std::uint8_t> encode_emb1(const EmbeddedDataset& x) {
  const auto n = static_cast<std::size_t>(x.size());
  const auto d = static_cast<std::size_t>(x.dim());
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + n * d * 4 + n * 3);
  for (std::uint8_t b : kMagic) out.push_back(b);
  put_u32(out, static_cast<std::uint32_t>(n));
  put_u32(out, static_cast<std::uint32_t>(d));
  out.push_back(x.has_tags() ? 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const auto f = static_cast<float>(x.features()(static_cast<Eigen::Index>(i),
                                                     static_cast<Eigen::Index>(j)));
      put_u32(out, std::bit_cast<std::uint32_t>(f));
    }
  }
  out.insert(out.end(), x.labels().begin(), x.labels().end());
  if (x.has_tags()) {
    for (const auto& tag : x.tags()) {
      out.push_back(tag.essential_class);
      out.push_back(tag.nonessential_feature);
    }
  }
  return out;
}

EmbeddedDataset decode_emb1(std::span<const std::uint8_t> bytes) {
  require(bytes, 0, 4, "magic");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError("bad magic: expected EMB1", 0);
  }
  require(bytes, 4, 9, "header");
  const std::size_t n = get_u32(bytes, 4);
  const std::size_t d = get_u32(bytes, 8);
  const std::uint8_t has_tags = bytes[12];
  if (d < 1) throw FormatError("EMB1 dimension must be >= 1", 8);
  if (has_tags > 1) throw FormatError("EMB1 has_tags flag must be 0 or 1", 12);

  std::size_t offset = kHeaderSize;
  if (n > std::numeric_limits<std::size_t>::max() / 8 / d) {
    throw FormatError("EMB1 payload truncated while reading features", bytes.size());
  }
  require(bytes, offset, n * d * 4, "features");
  Matrix features(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const float f = std::bit_cast<float>(get_u32(bytes, offset));
      if (!std::isfinite(f)) throw FormatError("non-finite feature value", offset);
      features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = f;
      offset += 4;
    }
  }

  require(bytes, offset, n, "labels");
  std::vector<std::uint8_t> labels(bytes.begin() + static_cast<std::ptrdiff_t>(offset),
                                   bytes.begin() + static_cast<std::ptrdiff_t>(offset + n));
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] > 1) throw FormatError("label outside {0,1}", offset + i);
  }
  offset += n;

  std::optional<std::vector<CategoryTag>> tags;
  if (has_tags) {
    require(bytes, offset, 2 * n, "tags");
    tags.emplace();
    tags->reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      CategoryTag tag{bytes[offset], bytes[offset + 1]};
      if (tag.essential_class > 1 || tag.nonessential_feature > 1) {
        throw FormatError("tag values outside {0,1}", offset);
      }
      tags->push_back(tag);
      offset += 2;
    }
  }
  if (offset != bytes.size()) {
    throw FormatError("trailing bytes after EMB1 payload", offset);
  }
  return EmbeddedDataset(std::move(features), std::move(labels), std::move(tags));
}

void write_emb1(const std::filesystem::path& path, const EmbeddedDataset& x) {
  const auto bytes = encode_emb1(x);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

EmbeddedDataset read_emb1(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open EMB1 file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_emb1(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.detail(), e.offset());
  }
}

}  // namespace pmic
