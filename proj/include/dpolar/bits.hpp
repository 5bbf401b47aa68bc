#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpolar {

// Block of hard bits. Values are restricted to 0/1; stored as bytes so the
// transform butterflies stay branch-free and vectorizable.
class BitBlock {
public:
    BitBlock() = default;
    explicit BitBlock(std::size_t n) : bits_(n, 0) {}
    BitBlock(std::initializer_list<int> init) {
        bits_.reserve(init.size());
        for (int b : init) bits_.push_back(checked(b));
    }
    static BitBlock from_bytes(std::vector<std::uint8_t> raw) {
        for (auto b : raw)
            if (b > 1) throw std::invalid_argument("BitBlock: entry not in {0,1}");
        BitBlock out;
        out.bits_ = std::move(raw);
        return out;
    }

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
    std::uint8_t& operator[](std::size_t i) { return bits_[i]; }
    std::uint8_t at(std::size_t i) const { return bits_.at(i); }

    void set(std::size_t i, int v) { bits_.at(i) = checked(v); }
    void push_back(int v) { bits_.push_back(checked(v)); }

    const std::uint8_t* data() const { return bits_.data(); }
    std::uint8_t* data() { return bits_.data(); }

    BitBlock& operator^=(const BitBlock& other) {
        if (other.size() != size()) throw std::invalid_argument("BitBlock xor: size mismatch");
        for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] ^= other.bits_[i];
        return *this;
    }
    friend BitBlock operator^(BitBlock a, const BitBlock& b) { return a ^= b; }

    bool operator==(const BitBlock& other) const { return bits_ == other.bits_; }
    bool operator!=(const BitBlock& other) const { return !(*this == other); }

    std::size_t weight() const {
        std::size_t w = 0;
        for (auto b : bits_) w += b;
        return w;
    }

    std::string to_string() const {
        std::string s;
        s.reserve(bits_.size());
        for (auto b : bits_) s.push_back(b ? '1' : '0');
        return s;
    }

    const std::vector<std::uint8_t>& raw() const { return bits_; }

private:
    static std::uint8_t checked(int v) {
        if (v != 0 && v != 1) throw std::invalid_argument("BitBlock: entry not in {0,1}");
        return static_cast<std::uint8_t>(v);
    }
    std::vector<std::uint8_t> bits_;
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline int log2_exact(std::size_t n) {
    if (!is_power_of_two(n)) throw std::invalid_argument("block length must be a power of two");
    int e = 0;
    while ((std::size_t{1} << e) < n) ++e;
    return e;
}

}  // namespace dpolar
