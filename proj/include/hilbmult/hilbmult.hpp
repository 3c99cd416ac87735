#pragma once

#include "hilbmult/errors.hpp"
#include "hilbmult/space.hpp"
#include "hilbmult/multimap.hpp"
#include "hilbmult/duality.hpp"
#include "hilbmult/poly.hpp"
#include "hilbmult/spectral.hpp"
#include "hilbmult/random.hpp"
#include "hilbmult/family.hpp"
#include "hilbmult/calculus.hpp"
#include "hilbmult/l2grid.hpp"
