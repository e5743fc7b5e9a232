#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rebel {

/// A finite bit pattern, written as in "1101". Canonical form strips
/// leading and trailing zeros; zero padding is implicit, and translate
/// averaging makes the anchor irrelevant.
struct Pattern {
    std::string text;              // canonical, starts and ends with '1'
    std::vector<int> one_offsets;  // positions of the 1 bits
    int length = 0;

    static Pattern parse(std::string_view s);  // throws std::invalid_argument

    /// The n-ones block 11...1.
    static Pattern block(int n);
    /// The two-ones gap pattern 1 0^(n-2) 1 of total length n.
    static Pattern gap(int n);
};

}  // namespace rebel
