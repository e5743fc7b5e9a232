#pragma once

#include <cstdint>
#include <vector>

namespace rebel {

/// Bit configuration on a periodic lattice of N sites with a cached
/// particle (one-site) count. Indices are taken mod N everywhere,
/// negative indices included.
class RingConfig {
public:
    explicit RingConfig(int n);
    static RingConfig from_bits(const std::vector<std::uint8_t>& bits);
    static RingConfig from_mask(int n, std::uint32_t mask);  // bit i = site i, n <= 32

    int size() const { return n_; }
    int ones() const { return ones_; }
    int parity() const { return ones_ & 1; }

    int wrap(int i) const {
        i %= n_;
        return i < 0 ? i + n_ : i;
    }
    std::uint8_t at(int i) const { return bits_[wrap(i)]; }
    void set(int i, std::uint8_t v);
    void toggle(int i);

    std::uint32_t mask() const;  // n <= 32
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    bool operator==(const RingConfig&) const = default;

private:
    int n_;
    std::vector<std::uint8_t> bits_;
    int ones_;
};

/// One transition: toggle the 1 or 2 sites of Delta at the given rate.
struct FlipEvent {
    int sites[2];
    int nsites;  // |Delta|, 1 or 2
    double rate;
};

RingConfig apply_flip(const RingConfig& y, const FlipEvent& e);

/// Kink map: y(i) = 1 iff x(i) != x(i+1 mod N). The result has even parity.
RingConfig interface_of(const RingConfig& x);

/// Configuration with site i moved to i+k.
RingConfig rotate(const RingConfig& x, int k);

/// Mirror image: site i -> -i mod N.
RingConfig reflect(const RingConfig& x);

}  // namespace rebel
