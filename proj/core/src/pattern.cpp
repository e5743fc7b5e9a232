#include "rebel/pattern.hpp"

#include <stdexcept>

namespace rebel {

Pattern Pattern::parse(std::string_view s) {
    std::size_t first = s.find('1');
    if (first == std::string_view::npos)
        throw std::invalid_argument("pattern must contain at least one 1");
    std::size_t last = s.find_last_of('1');
    Pattern p;
    for (std::size_t i = first; i <= last; ++i) {
        char c = s[i];
        if (c != '0' && c != '1') throw std::invalid_argument("pattern must be a 0/1 string");
        p.text.push_back(c);
        if (c == '1') p.one_offsets.push_back(static_cast<int>(i - first));
    }
    p.length = static_cast<int>(p.text.size());
    return p;
}

Pattern Pattern::block(int n) {
    if (n < 1) throw std::invalid_argument("block size must be >= 1");
    return parse(std::string(n, '1'));
}

Pattern Pattern::gap(int n) {
    if (n < 2) throw std::invalid_argument("gap pattern length must be >= 2");
    std::string s(n, '0');
    s.front() = s.back() = '1';
    return parse(s);
}

}  // namespace rebel
