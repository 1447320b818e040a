#include "svlm/bitmask.hpp"

#include <bit>

namespace svlm {

BitMask::BitMask(std::size_t rows, std::size_t cols, bool value)
    : rows_(rows), cols_(cols), bytes_((rows * cols + 7) / 8, value ? 0xFF : 0x00) {
    if (value) {
        // Clear padding bits past the last element so popcount stays exact.
        const std::size_t used = rows * cols;
        if (used % 8 != 0 && !bytes_.empty())
            bytes_.back() = static_cast<std::uint8_t>((1u << (used % 8)) - 1u);
    }
}

std::size_t BitMask::popcount() const {
    std::size_t total = 0;
    for (std::uint8_t b : bytes_) total += static_cast<std::size_t>(std::popcount(b));
    return total;
}

} // namespace svlm
