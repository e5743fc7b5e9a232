#include "rebel/ring.hpp"

#include <numeric>
#include <stdexcept>

namespace rebel {

RingConfig::RingConfig(int n) : n_(n), bits_(n, 0), ones_(0) {
    if (n < 4) throw std::invalid_argument("ring size must be >= 4");
}

RingConfig RingConfig::from_bits(const std::vector<std::uint8_t>& bits) {
    RingConfig c(static_cast<int>(bits.size()));
    c.bits_ = bits;
    c.ones_ = 0;
    for (auto b : bits) {
        if (b > 1) throw std::invalid_argument("bits must be 0 or 1");
        c.ones_ += b;
    }
    return c;
}

RingConfig RingConfig::from_mask(int n, std::uint32_t mask) {
    std::vector<std::uint8_t> bits(n);
    for (int i = 0; i < n; ++i) bits[i] = (mask >> i) & 1u;
    return from_bits(bits);
}

void RingConfig::set(int i, std::uint8_t v) {
    i = wrap(i);
    ones_ += int(v & 1) - int(bits_[i]);
    bits_[i] = v & 1;
}

void RingConfig::toggle(int i) {
    i = wrap(i);
    bits_[i] ^= 1;
    ones_ += bits_[i] ? 1 : -1;
}

std::uint32_t RingConfig::mask() const {
    std::uint32_t m = 0;
    for (int i = 0; i < n_; ++i) m |= std::uint32_t(bits_[i]) << i;
    return m;
}

RingConfig apply_flip(const RingConfig& y, const FlipEvent& e) {
    RingConfig out = y;
    for (int s = 0; s < e.nsites; ++s) out.toggle(e.sites[s]);
    return out;
}

RingConfig interface_of(const RingConfig& x) {
    RingConfig y(x.size());
    for (int i = 0; i < x.size(); ++i)
        if (x.at(i) != x.at(i + 1)) y.set(i, 1);
    return y;
}

RingConfig rotate(const RingConfig& x, int k) {
    RingConfig out(x.size());
    for (int i = 0; i < x.size(); ++i) out.set(i + k, x.at(i));
    return out;
}

RingConfig reflect(const RingConfig& x) {
    RingConfig out(x.size());
    for (int i = 0; i < x.size(); ++i) out.set(-i, x.at(i));
    return out;
}

}  // namespace rebel
