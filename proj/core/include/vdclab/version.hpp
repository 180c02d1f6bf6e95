#ifndef VDCLAB_VERSION_HPP
#define VDCLAB_VERSION_HPP

#define VDCLAB_VERSION_STRING "0.1.0"

namespace vdclab {
inline const char* version() { return VDCLAB_VERSION_STRING; }
}

#endif
