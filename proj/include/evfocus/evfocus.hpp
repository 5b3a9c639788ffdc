// Umbrella header for the event-camera polarity-symmetry autofocus library.
#pragma once

#include "evfocus/core.hpp"
#include "evfocus/epr.hpp"
#include "evfocus/wavelet.hpp"
#include "evfocus/pbf.hpp"
#include "evfocus/egs.hpp"
#include "evfocus/sim.hpp"
#include "evfocus/io.hpp"
