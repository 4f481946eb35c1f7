#pragma once

// Parity partition coding toolkit: output codes, decoders, channel models,
// the fraction-accurate estimator and the XOR separability probe.

#include "ppc/bagging.hpp"
#include "ppc/bits.hpp"
#include "ppc/channel.hpp"
#include "ppc/code_json.hpp"
#include "ppc/codes.hpp"
#include "ppc/decoder.hpp"
#include "ppc/errors.hpp"
#include "ppc/estimator.hpp"
#include "ppc/gf2.hpp"
#include "ppc/random.hpp"
#include "ppc/xorlearn.hpp"
