#pragma once

#include "mhilb/types.hpp"

namespace mhilb {

// matrix exponential, scaling and squaring with a fixed degree 13 Pade
// approximant
cxmat expm(const cxmat& a);

}  // namespace mhilb
