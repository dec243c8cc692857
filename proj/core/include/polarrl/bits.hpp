#pragma once

#include <cstdint>
#include <vector>

namespace polarrl {

/// One GF(2) element per byte; only 0 and 1 are valid values.
using Bit = std::uint8_t;
using BitVec = std::vector<Bit>;

}  // namespace polarrl
