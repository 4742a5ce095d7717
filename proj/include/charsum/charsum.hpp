#pragma once

#include "charsum/character_sum.hpp"
#include "charsum/characters.hpp"
#include "charsum/cyclotomic.hpp"
#include "charsum/error.hpp"
#include "charsum/ff_core.hpp"
#include "charsum/lfunc.hpp"
#include "charsum/subspace.hpp"
