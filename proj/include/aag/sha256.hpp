/* sha256.hpp -- digest wrapper used for shared-key bytes and confirms. */
#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace aag {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::span<const std::uint8_t> data);

} // namespace aag
