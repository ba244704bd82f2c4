#pragma once

namespace tsaw::urn {

// interior: up-probability lambda^{2i-1}/(1+lambda^{2i-1}) (sites k != 0)
// origin:   up-probability lambda^{2i}/(1+lambda^{2i})     (site 0)
enum class UrnVariant { interior, origin };

inline int exponent_shift(UrnVariant v) { return v == UrnVariant::interior ? -1 : 0; }

}  // namespace tsaw::urn
