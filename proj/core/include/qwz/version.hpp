#ifndef QWZ_VERSION_HPP
#define QWZ_VERSION_HPP

namespace qwz {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
