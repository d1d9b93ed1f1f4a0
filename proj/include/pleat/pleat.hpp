#pragma once

#include "halfspace.hpp"
#include "moebius.hpp"
#include "cones.hpp"
#include "optimize.hpp"
#include "plane.hpp"
#include "lamination.hpp"
#include "bending.hpp"
#include "constants.hpp"
#include "verify.hpp"
#include "motion.hpp"
#include "scenes.hpp"
#include "io.hpp"
