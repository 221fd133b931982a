#pragma once

#include "bsm/interactive_hashing.hpp"
#include "bsm/json_io.hpp"
#include "bsm/math.hpp"
#include "bsm/mub.hpp"
#include "bsm/ot.hpp"
#include "bsm/qsim.hpp"
#include "bsm/rng.hpp"
#include "bsm/secparams.hpp"
#include "bsm/subset_code.hpp"
#include "bsm/toeplitz.hpp"
#include "bsm/wse.hpp"
