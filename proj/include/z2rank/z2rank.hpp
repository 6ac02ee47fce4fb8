#pragma once

#include "z2rank/bilinear.hpp"
#include "z2rank/bit_matrix.hpp"
#include "z2rank/choose.hpp"
#include "z2rank/completion.hpp"
#include "z2rank/hieroglyph.hpp"
#include "z2rank/linear_system.hpp"
#include "z2rank/rank_count.hpp"
