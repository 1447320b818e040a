#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace svlm {

// Packed row-major binary mask. Bit k of byte k/8 (LSB first) holds flat
// element k = row * cols + col; this layout is also the on-disk encoding.
class BitMask {
  public:
    BitMask() = default;

    // All bits set to `value` (default: keep everything).
    BitMask(std::size_t rows, std::size_t cols, bool value = true);

    static BitMask ones(std::size_t rows, std::size_t cols) { return BitMask(rows, cols, true); }
    static BitMask zeros(std::size_t rows, std::size_t cols) { return BitMask(rows, cols, false); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return rows_ * cols_; }

    bool get(std::size_t row, std::size_t col) const { return get_flat(row * cols_ + col); }
    void set(std::size_t row, std::size_t col, bool value) { set_flat(row * cols_ + col, value); }

    bool get_flat(std::size_t k) const { return (bytes_[k >> 3] >> (k & 7)) & 1u; }
    void set_flat(std::size_t k, bool value) {
        if (value)
            bytes_[k >> 3] |= static_cast<std::uint8_t>(1u << (k & 7));
        else
            bytes_[k >> 3] &= static_cast<std::uint8_t>(~(1u << (k & 7)));
    }

    // Number of kept (1) positions.
    std::size_t popcount() const;

    const std::vector<std::uint8_t>& bytes() const { return bytes_; }
    std::vector<std::uint8_t>& bytes() { return bytes_; }

    bool operator==(const BitMask& other) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> bytes_;
};

} // namespace svlm
