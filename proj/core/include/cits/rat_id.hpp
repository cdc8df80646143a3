#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace cits {

enum class RatId : unsigned char { dsrc = 0, dsrc_px = 1, cv2x = 2, mmwave = 3 };

inline constexpr std::size_t kRatCount = 4;
inline constexpr std::array<RatId, kRatCount> kAllRats = {RatId::dsrc, RatId::dsrc_px,
                                                          RatId::cv2x, RatId::mmwave};

constexpr std::size_t index_of(RatId rat) { return static_cast<std::size_t>(rat); }

std::string_view to_string(RatId rat);
std::optional<RatId> parse_rat(std::string_view name);

}  // namespace cits
