#pragma once

#include "cdt/canonical_v.hpp"
#include "cdt/complementary.hpp"
#include "cdt/cone_duality.hpp"
#include "cdt/dual.hpp"
#include "cdt/error.hpp"
#include "cdt/oracle.hpp"
#include "cdt/problem_io.hpp"
#include "cdt/quadratic.hpp"
#include "cdt/reproduce.hpp"
#include "cdt/spectral.hpp"
#include "cdt/triality.hpp"
