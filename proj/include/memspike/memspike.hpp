#pragma once

#include "memspike/config.hpp"
#include "memspike/device.hpp"
#include "memspike/errors.hpp"
#include "memspike/experiments.hpp"
#include "memspike/gate.hpp"
#include "memspike/instrument.hpp"
#include "memspike/plot.hpp"
#include "memspike/trace.hpp"
#include "memspike/waveform.hpp"
