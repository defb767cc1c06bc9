#pragma once

#include "normwalk/arith.hpp"
#include "normwalk/atlas.hpp"
#include "normwalk/bits.hpp"
#include "normwalk/cones.hpp"
#include "normwalk/continuous.hpp"
#include "normwalk/generators.hpp"
#include "normwalk/hull.hpp"
#include "normwalk/io.hpp"
#include "normwalk/matrix.hpp"
#include "normwalk/normality.hpp"
#include "normwalk/polytope.hpp"
#include "normwalk/poset.hpp"
