#pragma once

// Umbrella header for the short-term cognitive network library.

#include "stcn/benchmark.hpp"
#include "stcn/dataset.hpp"
#include "stcn/fcm.hpp"
#include "stcn/hopfield.hpp"
#include "stcn/init.hpp"
#include "stcn/learning.hpp"
#include "stcn/model.hpp"
#include "stcn/ols.hpp"
#include "stcn/rcga.hpp"
#include "stcn/rng.hpp"
#include "stcn/serialize.hpp"
#include "stcn/sha256.hpp"
#include "stcn/sigmoid.hpp"
#include "stcn/stats.hpp"
