#pragma once

#include "rcgs/baselines.hpp"
#include "rcgs/bench.hpp"
#include "rcgs/bitio.hpp"
#include "rcgs/codec.hpp"
#include "rcgs/datagen.hpp"
#include "rcgs/grouping.hpp"
#include "rcgs/huffman.hpp"
#include "rcgs/model.hpp"
#include "rcgs/range_coder.hpp"
