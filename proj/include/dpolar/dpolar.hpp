#pragma once

#include "dpolar/bits.hpp"
#include "dpolar/channel.hpp"
#include "dpolar/codespec.hpp"
#include "dpolar/construct.hpp"
#include "dpolar/decode.hpp"
#include "dpolar/io.hpp"
#include "dpolar/llr.hpp"
#include "dpolar/rng.hpp"
#include "dpolar/sc_memory.hpp"
#include "dpolar/simulate.hpp"
#include "dpolar/transform.hpp"
#include "dpolar/trellis.hpp"
