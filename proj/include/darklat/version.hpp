#ifndef DARKLAT_VERSION_HPP
#define DARKLAT_VERSION_HPP

namespace darklat {

inline constexpr const char* version_string = "0.1.0";

}  // namespace darklat

#endif
