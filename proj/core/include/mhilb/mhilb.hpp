#pragma once

#include "mhilb/errors.hpp"
#include "mhilb/evolution.hpp"
#include "mhilb/expm.hpp"
#include "mhilb/gauge.hpp"
#include "mhilb/hilbert.hpp"
#include "mhilb/io.hpp"
#include "mhilb/model.hpp"
#include "mhilb/observables.hpp"
#include "mhilb/probability.hpp"
#include "mhilb/products.hpp"
#include "mhilb/types.hpp"
#include "mhilb/verifier.hpp"
