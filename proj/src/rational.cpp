#include "diachron/rational.hpp"

namespace diachron {

std::string Rational::to_fixed(int decimals) const {
  unsigned __int128 scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  unsigned __int128 scaled = static_cast<unsigned __int128>(num_) * scale;
  unsigned __int128 q = (2 * scaled + den_) / (2 * static_cast<unsigned __int128>(den_));
  auto whole = static_cast<std::uint64_t>(q / scale);
  auto frac = static_cast<std::uint64_t>(q % scale);
  std::string out = std::to_string(whole);
  if (decimals > 0) {
    std::string f = std::to_string(frac);
    out += '.';
    out.append(static_cast<std::size_t>(decimals) - f.size(), '0');
    out += f;
  }
  return out;
}

}  // namespace diachron
