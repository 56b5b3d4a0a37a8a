// supoly.hpp: umbrella header.
#pragma once

#include "supoly/errors.hpp"
#include "supoly/multi_index.hpp"
#include "supoly/random.hpp"
#include "supoly/ensemble.hpp"
#include "supoly/parallel.hpp"
#include "supoly/roots.hpp"
#include "supoly/zero_statistics.hpp"
#include "supoly/mobius.hpp"
#include "supoly/hole.hpp"

namespace supoly {
inline constexpr const char* kVersion = "0.1.0";
}
