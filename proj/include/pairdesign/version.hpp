#ifndef PAIRDESIGN_VERSION_HPP
#define PAIRDESIGN_VERSION_HPP

namespace pairdesign {

inline constexpr const char* kVersion = "pairdesign 1.0.0";

}  // namespace pairdesign

#endif  // PAIRDESIGN_VERSION_HPP
