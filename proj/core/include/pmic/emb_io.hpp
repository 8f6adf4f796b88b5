#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "pmic/dataset.hpp"

namespace pmic {

/// EMB1 layout (little-endian):
///   "EMB1" | u32 n | u32 d | u8 has_tags | n*d f32 row-major features |
///   n u8 labels | has_tags ? n * (u8 essential_class, u8 nonessential_feature)
/// Features are narrowed to f32 on write.
std::vector<std::uint8_t> encode_emb1(const EmbeddedDataset& x);
EmbeddedDataset decode_emb1(std::span<const std::uint8_t> bytes);

void write_emb1(const std::filesystem::path& path, const EmbeddedDataset& x);
EmbeddedDataset read_emb1(const std::filesystem::path& path);

}  // namespace pmic
